#ifndef TOUCHREPLAY_TRACE_SYNTH_H_
#define TOUCHREPLAY_TRACE_SYNTH_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "touchreplay/action_classifier.h"
#include "touchreplay/trace_model.h"

namespace touchreplay {

struct PathPoint {
  int frame = 0;
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const PathPoint&, const PathPoint&) = default;
};

using FingerPath = std::vector<PathPoint>;

struct GroundTruthAction {
  ActionKind kind = ActionKind::kTap;
  std::vector<FingerPath> paths;  // one per finger

  int fingers() const { return static_cast<int>(paths.size()); }
  int start_frame() const;
  int end_frame() const;

  friend bool operator==(const GroundTruthAction&, const GroundTruthAction&) = default;
};

struct GroundTruthScenario {
  DeviceProfile profile;
  std::vector<GroundTruthAction> actions;  // ordered by start frame

  // Throws Error(kInvalidScenario).
  void validate() const;

  friend bool operator==(const GroundTruthScenario&, const GroundTruthScenario&) = default;
};

struct NoiseModel {
  // Standard deviation of a detected center around the true finger position.
  // Most of it is a per-contact offset (the detector's box bias for one
  // indicator); |frame_jitter_fraction| of it is independent per frame.
  double position_jitter_sigma = 0.0;
  double frame_jitter_fraction = 0.25;
  double false_positive_rate = 0.0;  // per frame
  double dropout_rate = 0.0;         // per High detection
  int fade_frames = 3;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

// "clean", "physical-device", "emulator". Returns false for unknown names.
bool find_noise_preset(std::string_view name, NoiseModel* out);
std::vector<std::string> noise_preset_names();

struct SynthesisResult {
  DetectionTrace trace;
  // One symbol per ground-truth action (see action_symbol).
  std::vector<std::string> truth;
  int false_positive_count = 0;  // injected false-positive contacts
};

// Renders a ground-truth scenario as the detector would have reported it.
// Every path point yields one High detection (jittered, maybe dropped); each
// finger lift is followed by |fade_frames| Low detections at the lift
// position; false positives of 1-2 frames are injected at random positions.
SynthesisResult synthesize_trace(const GroundTruthScenario& scenario,
                                 const NoiseModel& noise, bool extended = false);

struct ScenarioGenOptions {
  int min_actions = 5;
  int max_actions = 25;
  // Relative weights of taps, long taps, gestures and two-finger gestures.
  double tap_weight = 0.35;
  double long_tap_weight = 0.2;
  double gesture_weight = 0.3;
  double two_finger_weight = 0.15;
  // Idle frames between one action's lift fade and the next action.
  int min_gap_frames = 3;
  int max_gap_frames = 30;
};

// Random, valid scenario. Deterministic in |seed|.
GroundTruthScenario random_scenario(const DeviceProfile& profile, std::uint64_t seed,
                                    const ScenarioGenOptions& options = {});

std::string serialize_ground_truth(const GroundTruthScenario& scenario);
GroundTruthScenario parse_ground_truth(std::string_view json_text);

}  // namespace touchreplay

#endif  // TOUCHREPLAY_TRACE_SYNTH_H_
