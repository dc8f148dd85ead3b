#include "touchreplay/trace_synth.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "touchreplay/error.h"
#include "touchreplay/json_codec.h"

namespace touchreplay {

namespace {

using json_codec::Json;

// Half the size of the rendered touch indicator box.
constexpr double kIndicatorRadius = 18.0;
// Fade length the random scenario generator leaves room for.
constexpr int kAssumedFadeFrames = 3;

struct Preset {
  const char* name;
  double sigma;
  double false_positive_rate;
  double dropout_rate;
};

constexpr std::array<Preset, 3> kPresets = {{
    {"clean", 0.0, 0.0, 0.0},
    {"physical-device", 2.0, 0.005, 0.01},
    {"emulator", 4.0, 0.01, 0.03},
}};

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::kInvalidScenario, what);
}

// Box of at most kIndicatorRadius around |center| that stays on screen and
// keeps |center| exact.
BoundingBox indicator_box(Point center, const DeviceProfile& profile) {
  const double r = std::min({kIndicatorRadius, center.x, center.y,
                             profile.screen_width - center.x,
                             profile.screen_height - center.y});
  return {center.x - r, center.y - r, 2 * r, 2 * r};
}

Point clamp_to_screen(Point p, const DeviceProfile& profile) {
  return {std::clamp(p.x, 0.0, static_cast<double>(profile.screen_width)),
          std::clamp(p.y, 0.0, static_cast<double>(profile.screen_height))};
}

class Synthesizer {
 public:
  Synthesizer(const DeviceProfile& profile, const NoiseModel& noise)
      : profile_(profile), noise_(noise), rng_(noise.rng_seed) {
    const double f = std::clamp(noise.frame_jitter_fraction, 0.0, 1.0);
    contact_sigma_ = noise.position_jitter_sigma * std::sqrt(1.0 - f * f);
    frame_sigma_ = noise.position_jitter_sigma * f;
  }

  void finger(const FingerPath& path) {
    const Point offset{gaussian(contact_sigma_), gaussian(contact_sigma_)};
    Point last{};
    for (const PathPoint& p : path) {
      last = {p.x + offset.x, p.y + offset.y};
      emit(p.frame, last, Opacity::kHigh);
    }
    for (int i = 1; i <= noise_.fade_frames; ++i) {
      emit(path.back().frame + i, last, Opacity::kLow);
    }
  }

  // Injects false positives over [0, frame_count).
  int false_positives(int frame_count) {
    int injected = 0;
    std::uniform_real_distribution<double> xs(kIndicatorRadius,
                                              profile_.screen_width - kIndicatorRadius);
    std::uniform_real_distribution<double> ys(kIndicatorRadius,
                                              profile_.screen_height - kIndicatorRadius);
    std::uniform_real_distribution<double> confidence(0.5, 1.0);
    for (int f = 0; f < frame_count; ++f) {
      if (!chance(noise_.false_positive_rate)) continue;
      ++injected;
      const int lifetime = std::uniform_int_distribution<int>(1, 2)(rng_);
      const Point at{xs(rng_), ys(rng_)};
      const double conf = confidence(rng_);
      for (int i = 0; i < lifetime && f + i < frame_count; ++i) {
        detections_.push_back({f + i, indicator_box(at, profile_), conf, Opacity::kHigh});
      }
    }
    return injected;
  }

  std::vector<TouchDetection>& detections() { return detections_; }

 private:
  double gaussian(double sigma) {
    if (sigma <= 0) return 0.0;
    return std::normal_distribution<double>(0.0, sigma)(rng_);
  }

  bool chance(double p) {
    if (p <= 0) return false;
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p;
  }

  void emit(int frame, Point truth, Opacity opacity) {
    const Point wobble{gaussian(frame_sigma_), gaussian(frame_sigma_)};
    const double conf = std::uniform_real_distribution<double>(0.8, 1.0)(rng_);
    if (chance(noise_.dropout_rate)) return;
    const Point at = clamp_to_screen({truth.x + wobble.x, truth.y + wobble.y}, profile_);
    detections_.push_back({frame, indicator_box(at, profile_), conf, opacity});
  }

  const DeviceProfile& profile_;
  const NoiseModel& noise_;
  std::mt19937_64 rng_;
  double contact_sigma_ = 0.0;
  double frame_sigma_ = 0.0;
  std::vector<TouchDetection> detections_;
};

Json action_to_json(const GroundTruthAction& action) {
  Json paths = Json::array();
  for (const FingerPath& path : action.paths) {
    Json points = Json::array();
    for (const PathPoint& p : path) points.push_back(Json::array({p.frame, p.x, p.y}));
    paths.push_back(std::move(points));
  }
  return Json{{"kind", std::string(action_kind_name(action.kind))},
              {"paths", std::move(paths)}};
}

GroundTruthAction action_from_json(const Json& value, const std::string& path) {
  GroundTruthAction action;
  const std::string kind = json_codec::get_string(value, "kind", path);
  if (!action_kind_from_name(kind, &action.kind)) {
    json_codec::schema_error(path + ".kind", "unknown action kind \"" + kind + "\"");
  }
  const Json& paths = json_codec::get_array(value, "paths", path);
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const std::string where = path + ".paths[" + std::to_string(i) + "]";
    if (!paths[i].is_array()) json_codec::schema_error(where, "expected an array");
    FingerPath finger;
    for (std::size_t j = 0; j < paths[i].size(); ++j) {
      const std::string at = where + "[" + std::to_string(j) + "]";
      const Json& p = paths[i][j];
      if (!p.is_array() || p.size() != 3) json_codec::schema_error(at, "expected [frame, x, y]");
      finger.push_back({static_cast<int>(json_codec::as_int(p[0], at + "[0]")),
                        json_codec::as_number(p[1], at + "[1]"),
                        json_codec::as_number(p[2], at + "[2]")});
    }
    action.paths.push_back(std::move(finger));
  }
  return action;
}

// Random generator helpers for random_scenario.
class ScenarioBuilder {
 public:
  ScenarioBuilder(const DeviceProfile& profile, std::uint64_t seed)
      : profile_(profile), rng_(seed) {}

  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }

  Point random_point(double margin) {
    return {uniform(margin, profile_.screen_width - margin),
            uniform(margin, profile_.screen_height - margin)};
  }

  GroundTruthAction press(ActionKind kind, int start, int frames) {
    const Point p = random_point(kMargin);
    FingerPath path;
    for (int i = 0; i < frames; ++i) path.push_back({start + i, p.x, p.y});
    return {kind, {std::move(path)}};
  }

  // A swipe along a gently bent line of 100-600px.
  GroundTruthAction swipe(int start, int frames) {
    const Point from = random_point(kMargin);
    Point to;
    do {
      to = random_point(kMargin);
    } while (distance(from, to) < 100 || distance(from, to) > 600);
    const double bend = uniform(-0.2, 0.2) * distance(from, to);
    const Point normal{-(to.y - from.y) / distance(from, to),
                       (to.x - from.x) / distance(from, to)};
    FingerPath path;
    for (int i = 0; i < frames; ++i) {
      const double t = static_cast<double>(i) / (frames - 1);
      const double lift = 4 * t * (1 - t) * bend;
      path.push_back({start + i,
                      std::clamp(from.x + (to.x - from.x) * t + normal.x * lift, kMargin,
                                 profile_.screen_width - kMargin),
                      std::clamp(from.y + (to.y - from.y) * t + normal.y * lift, kMargin,
                                 profile_.screen_height - kMargin)});
    }
    return {ActionKind::kGesture, {std::move(path)}};
  }

  // Pinch, rotation or two-finger drag. The second finger may land up to two
  // frames late and lift up to two frames early.
  GroundTruthAction two_finger(int start, int frames) {
    const int style = uniform_int(0, 2);
    const double sep_a = uniform(200, 650);
    const double sep_b = style == 0 ? uniform(200, 650) : sep_a;
    const double max_half = std::max(sep_a, sep_b) / 2 + kMargin;
    Point center{uniform(max_half, profile_.screen_width - max_half),
                 uniform(max_half, profile_.screen_height - max_half)};
    const double angle0 = uniform(0, std::numbers::pi);
    const double turn = style == 1 ? uniform(0.5, 1.5) * (uniform_int(0, 1) ? 1 : -1) : 0.0;
    const Point drag = style == 2 ? Point{uniform(-150, 150), uniform(-150, 150)} : Point{};

    const int late = uniform_int(0, 2);
    const int early = uniform_int(0, 2);
    FingerPath a;
    FingerPath b;
    for (int i = 0; i < frames; ++i) {
      const double t = static_cast<double>(i) / (frames - 1);
      const double half = (sep_a + (sep_b - sep_a) * t) / 2;
      const double angle = angle0 + turn * t;
      const Point c{center.x + drag.x * t, center.y + drag.y * t};
      const Point pa = clamp({c.x + half * std::cos(angle), c.y + half * std::sin(angle)});
      const Point pb = clamp({c.x - half * std::cos(angle), c.y - half * std::sin(angle)});
      a.push_back({start + i, pa.x, pa.y});
      if (i >= late && i < frames - early) b.push_back({start + i, pb.x, pb.y});
    }
    return {ActionKind::kGesture, {std::move(a), std::move(b)}};
  }

 private:
  static constexpr double kMargin = 60.0;

  Point clamp(Point p) const {
    return {std::clamp(p.x, kMargin, profile_.screen_width - kMargin),
            std::clamp(p.y, kMargin, profile_.screen_height - kMargin)};
  }

  const DeviceProfile& profile_;
  std::mt19937_64 rng_;
};

}  // namespace

int GroundTruthAction::start_frame() const {
  int start = paths.front().front().frame;
  for (const FingerPath& p : paths) start = std::min(start, p.front().frame);
  return start;
}

int GroundTruthAction::end_frame() const {
  int end = paths.front().back().frame;
  for (const FingerPath& p : paths) end = std::max(end, p.back().frame);
  return end;
}

void GroundTruthScenario::validate() const {
  try {
    profile.validate();
  } catch (const Error& e) {
    invalid(e.what());
  }
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const GroundTruthAction& action = actions[i];
    const std::string where = "actions[" + std::to_string(i) + "]";
    if (action.paths.empty() || action.fingers() > kMaxFingers) {
      invalid(where + ": needs 1 to 10 finger paths");
    }
    for (const FingerPath& path : action.paths) {
      if (path.empty()) invalid(where + ": empty finger path");
      for (std::size_t j = 0; j < path.size(); ++j) {
        const PathPoint& p = path[j];
        if (p.frame < 0) invalid(where + ": negative frame");
        if (j > 0 && p.frame <= path[j - 1].frame) {
          invalid(where + ": finger path frames overlap or go backwards at frame " +
                  std::to_string(p.frame));
        }
        if (p.x < 0 || p.y < 0 || p.x > profile.screen_width || p.y > profile.screen_height) {
          invalid(where + ": point off screen");
        }
        if (action.kind != ActionKind::kGesture &&
            distance({p.x, p.y}, {path.front().x, path.front().y}) > profile.touch_slop) {
          invalid(where + ": tap wanders beyond the touch slop");
        }
      }
    }
    if (i > 0 && action.start_frame() < actions[i - 1].start_frame()) {
      invalid(where + ": actions are not ordered by start frame");
    }
  }
}

void NoiseModel::validate() const {
  auto rate_ok = [](double r) { return r >= 0.0 && r <= 1.0; };
  if (!rate_ok(false_positive_rate) || !rate_ok(dropout_rate) ||
      !rate_ok(frame_jitter_fraction)) {
    invalid("noise rates must lie in [0, 1]");
  }
  if (!(position_jitter_sigma >= 0)) invalid("noise sigma must be non-negative");
  if (fade_frames < 1) invalid("fade_frames must be at least 1");
}

bool find_noise_preset(std::string_view name, NoiseModel* out) {
  for (const Preset& p : kPresets) {
    if (name == p.name) {
      *out = NoiseModel{};
      out->position_jitter_sigma = p.sigma;
      out->false_positive_rate = p.false_positive_rate;
      out->dropout_rate = p.dropout_rate;
      return true;
    }
  }
  return false;
}

std::vector<std::string> noise_preset_names() {
  std::vector<std::string> names;
  for (const Preset& p : kPresets) names.emplace_back(p.name);
  return names;
}

SynthesisResult synthesize_trace(const GroundTruthScenario& scenario,
                                 const NoiseModel& noise, bool extended) {
  scenario.validate();
  noise.validate();

  Synthesizer synth(scenario.profile, noise);
  SynthesisResult result;
  int frame_count = 0;
  for (const GroundTruthAction& action : scenario.actions) {
    for (const FingerPath& path : action.paths) synth.finger(path);
    frame_count = std::max(frame_count, action.end_frame() + noise.fade_frames + 1);
    result.truth.push_back(action_symbol(action.kind, action.fingers(), extended));
  }
  result.false_positive_count = synth.false_positives(frame_count);

  result.trace.profile = scenario.profile;
  result.trace.frame_count = frame_count;
  result.trace.detections = std::move(synth.detections());
  std::stable_sort(result.trace.detections.begin(), result.trace.detections.end(),
                   [](const TouchDetection& a, const TouchDetection& b) {
                     return a.frame < b.frame;
                   });
  return result;
}

GroundTruthScenario random_scenario(const DeviceProfile& profile, std::uint64_t seed,
                                    const ScenarioGenOptions& options) {
  ScenarioBuilder builder(profile, seed);
  GroundTruthScenario scenario;
  scenario.profile = profile;

  const int count = builder.uniform_int(options.min_actions, options.max_actions);
  std::discrete_distribution<int> pick_kind_weights{
      options.tap_weight, options.long_tap_weight, options.gesture_weight,
      options.two_finger_weight};
  std::mt19937_64 kind_rng(seed ^ 0x9e3779b97f4a7c15ULL);

  int cursor = builder.uniform_int(5, 15);
  for (int i = 0; i < count; ++i) {
    GroundTruthAction action;
    switch (pick_kind_weights(kind_rng)) {
      case 0:
        action = builder.press(ActionKind::kTap, cursor, builder.uniform_int(5, 18));
        break;
      case 1:
        action = builder.press(ActionKind::kLongTap, cursor, builder.uniform_int(26, 60));
        break;
      case 2:
        action = builder.swipe(cursor, builder.uniform_int(8, 40));
        break;
      default:
        action = builder.two_finger(cursor, builder.uniform_int(15, 45));
        break;
    }
    cursor = action.end_frame() + 1 + kAssumedFadeFrames +
             builder.uniform_int(options.min_gap_frames, options.max_gap_frames);
    scenario.actions.push_back(std::move(action));
  }
  return scenario;
}

std::string serialize_ground_truth(const GroundTruthScenario& scenario) {
  Json actions = Json::array();
  for (const GroundTruthAction& a : scenario.actions) actions.push_back(action_to_json(a));
  Json doc{{"schema_version", 1},
           {"device", json_codec::device_to_json(scenario.profile)},
           {"actions", std::move(actions)}};
  return doc.dump(2) + "\n";
}

GroundTruthScenario parse_ground_truth(std::string_view json_text) {
  const Json doc = json_codec::parse_document(json_text);
  if (json_codec::get_int(doc, "schema_version", "$") != 1) {
    json_codec::schema_error("$.schema_version", "unsupported version");
  }
  GroundTruthScenario scenario;
  scenario.profile =
      json_codec::device_from_json(json_codec::require(doc, "device", "$"), "$.device");
  const Json& actions = json_codec::get_array(doc, "actions", "$");
  for (std::size_t i = 0; i < actions.size(); ++i) {
    scenario.actions.push_back(
        action_from_json(actions[i], "$.actions[" + std::to_string(i) + "]"));
  }
  scenario.validate();
  return scenario;
}

}  // namespace touchreplay
