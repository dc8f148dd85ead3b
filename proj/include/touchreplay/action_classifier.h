#ifndef TOUCHREPLAY_ACTION_CLASSIFIER_H_
#define TOUCHREPLAY_ACTION_CLASSIFIER_H_

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "touchreplay/gesture_segmenter.h"
#include "touchreplay/trace_model.h"

namespace touchreplay {

inline constexpr int kMaxFingers = 10;
inline constexpr int kScenarioSchemaVersion = 1;

enum class ActionKind { kTap, kLongTap, kGesture };

// "tap", "long_tap", "gesture".
std::string_view action_kind_name(ActionKind kind);
bool action_kind_from_name(std::string_view name, ActionKind* out);
// 'T', 'L', 'G'.
char action_kind_symbol(ActionKind kind);
// Evaluation symbol of an action: "T", "L", "G"; anything with more than one
// finger is "G", or "G<n>" when |extended|.
std::string action_symbol(ActionKind kind, int fingers, bool extended);

struct ClassifierOptions {
  double min_confidence = kDefaultMinConfidence;
  // A stationary contact lasting at most this many active frames is a Tap.
  int tap_max_frames = 20;
  // When set, the Tap cutoff is |tap_max_ms| of active time instead of
  // |tap_max_frames|, for recordings well above 30 fps.
  bool duration_based_tap_cutoff = false;
  double tap_max_ms = 667.0;
  // Actions whose share of High-opacity touches is below this are dropped.
  double min_high_fraction = 0.1;
  int max_discard_frames = kMaxDiscardFrames;
  // An action is a potential multi-finger action when strictly more than this
  // share of its frames hold several touches.
  double multi_touch_threshold = 0.5;
};

struct AtomicAction {
  ActionKind kind = ActionKind::kTap;
  TouchSequence sequence;

  int start_frame() const { return sequence.start_frame(); }
  int end_frame() const { return sequence.end_frame(); }
  // Frames from the first touch through the last High touch; the fade tail is
  // not part of the contact.
  int active_frames() const {
    return sequence.last_high_frame() - sequence.start_frame() + 1;
  }
};

struct MultiFingerAction {
  std::vector<AtomicAction> actions;  // sorted by start frame
  int finger_count = 1;

  int start_frame() const;
  int end_frame() const;
};

using ScenarioItem = std::variant<AtomicAction, MultiFingerAction>;

int item_start_frame(const ScenarioItem& item);
int item_end_frame(const ScenarioItem& item);

struct ClassifiedScenario {
  DeviceProfile profile;
  std::vector<ScenarioItem> items;  // chronological
};

// Number of detections on each frame of a trace.
class FrameTouchCounts {
 public:
  FrameTouchCounts() = default;
  explicit FrameTouchCounts(const DetectionTrace& trace);
  explicit FrameTouchCounts(std::vector<int> counts) : counts_(std::move(counts)) {}

  int at(int frame) const;

 private:
  std::vector<int> counts_;
};

struct FrameSpan {
  int start = 0;
  int end = 0;
};

AtomicAction classify_action(const TouchSequence& sequence,
                             const DeviceProfile& profile,
                             const ClassifierOptions& options = {});

std::vector<AtomicAction> filter_actions(std::vector<AtomicAction> actions,
                                         const ClassifierOptions& options = {});

// Share of the action's frames on which the trace shows two or more touches.
double multi_touch_fraction(const AtomicAction& action,
                            const FrameTouchCounts& counts);

// Stack grouping over spans sorted by start frame: a span joins the group
// being built when its start precedes the end of any member, otherwise it
// opens a new group. Returns groups of indices into |sorted_spans|.
std::vector<std::vector<std::size_t>> group_overlapping(
    std::span<const FrameSpan> sorted_spans);

// Mode of the per-frame touch counts; ties go to the larger count. The result
// is clamped to [1, kMaxFingers].
int classify_finger_count(std::span<const int> per_frame_counts);

// Per-frame touch counts of the actions' own touches over their joint span.
std::vector<int> group_frame_counts(const std::vector<AtomicAction>& actions);

// Partitions classified, filtered actions into single- and multi-finger
// items. The result does not depend on the order of |actions|.
ClassifiedScenario identify_sfa_mfa(std::vector<AtomicAction> actions,
                                    const FrameTouchCounts& counts,
                                    const DeviceProfile& profile,
                                    const ClassifierOptions& options = {});

// Confidence filter, segmentation, translation, filtering and single/multi
// finger identification in one call.
ClassifiedScenario classify_trace(const DetectionTrace& trace,
                                  const ClassifierOptions& options = {});

std::string serialize_scenario(const ClassifiedScenario& scenario);
ClassifiedScenario parse_scenario(std::string_view json_text);

}  // namespace touchreplay

#endif  // TOUCHREPLAY_ACTION_CLASSIFIER_H_
