#include "touchreplay/action_classifier.h"

#include <algorithm>
#include <map>
#include <tuple>

#include "touchreplay/error.h"
#include "touchreplay/json_codec.h"

namespace touchreplay {

namespace {

using json_codec::Json;

// Canonical order so that the output never depends on input order.
bool action_order(const AtomicAction& a, const AtomicAction& b) {
  const Point pa = a.sequence.touches.front().center();
  const Point pb = b.sequence.touches.front().center();
  return std::make_tuple(a.start_frame(), a.end_frame(), pa.x, pa.y) <
         std::make_tuple(b.start_frame(), b.end_frame(), pb.x, pb.y);
}

Json action_to_json(const AtomicAction& action) {
  Json touches = Json::array();
  for (const TouchDetection& t : action.sequence.touches) {
    touches.push_back(json_codec::detection_to_json(t));
  }
  return Json{{"kind", std::string(action_kind_name(action.kind))},
              {"start_frame", action.start_frame()},
              {"end_frame", action.end_frame()},
              {"touches", std::move(touches)}};
}

AtomicAction action_from_json(const Json& value, const std::string& path) {
  AtomicAction action;
  const std::string kind = json_codec::get_string(value, "kind", path);
  if (!action_kind_from_name(kind, &action.kind)) {
    json_codec::schema_error(path + ".kind", "unknown action kind \"" + kind + "\"");
  }
  const Json& touches = json_codec::get_array(value, "touches", path);
  if (touches.empty()) json_codec::schema_error(path + ".touches", "empty");
  for (std::size_t i = 0; i < touches.size(); ++i) {
    const std::string where = path + ".touches[" + std::to_string(i) + "]";
    TouchDetection t = json_codec::detection_from_json(touches[i], where);
    if (!action.sequence.touches.empty()) {
      const TouchDetection& prev = action.sequence.touches.back();
      if (t.frame != prev.frame + 1) {
        json_codec::schema_error(where, "touch frames must be consecutive");
      }
      if (t.is_high() && !prev.is_high()) {
        json_codec::schema_error(where, "High touch after the fade tail");
      }
    }
    action.sequence.touches.push_back(t);
  }
  if (json_codec::get_int(value, "start_frame", path) != action.start_frame() ||
      json_codec::get_int(value, "end_frame", path) != action.end_frame()) {
    json_codec::schema_error(path, "start_frame/end_frame disagree with touches");
  }
  return action;
}

}  // namespace

std::string_view action_kind_name(ActionKind kind) {
  switch (kind) {
    case ActionKind::kTap:
      return "tap";
    case ActionKind::kLongTap:
      return "long_tap";
    case ActionKind::kGesture:
      return "gesture";
  }
  return "gesture";
}

bool action_kind_from_name(std::string_view name, ActionKind* out) {
  for (ActionKind kind :
       {ActionKind::kTap, ActionKind::kLongTap, ActionKind::kGesture}) {
    if (action_kind_name(kind) == name) {
      *out = kind;
      return true;
    }
  }
  return false;
}

char action_kind_symbol(ActionKind kind) {
  switch (kind) {
    case ActionKind::kTap:
      return 'T';
    case ActionKind::kLongTap:
      return 'L';
    case ActionKind::kGesture:
      return 'G';
  }
  return 'G';
}

std::string action_symbol(ActionKind kind, int fingers, bool extended) {
  if (fingers > 1) return extended ? "G" + std::to_string(fingers) : "G";
  return std::string(1, action_kind_symbol(kind));
}

int MultiFingerAction::start_frame() const {
  int start = actions.front().start_frame();
  for (const AtomicAction& a : actions) start = std::min(start, a.start_frame());
  return start;
}

int MultiFingerAction::end_frame() const {
  int end = actions.front().end_frame();
  for (const AtomicAction& a : actions) end = std::max(end, a.end_frame());
  return end;
}

int item_start_frame(const ScenarioItem& item) {
  return std::visit([](const auto& v) { return v.start_frame(); }, item);
}

int item_end_frame(const ScenarioItem& item) {
  return std::visit([](const auto& v) { return v.end_frame(); }, item);
}

FrameTouchCounts::FrameTouchCounts(const DetectionTrace& trace) {
  int last = -1;
  for (const TouchDetection& d : trace.detections) last = std::max(last, d.frame);
  counts_.assign(static_cast<std::size_t>(last + 1), 0);
  for (const TouchDetection& d : trace.detections) {
    ++counts_[static_cast<std::size_t>(d.frame)];
  }
}

int FrameTouchCounts::at(int frame) const {
  if (frame < 0 || static_cast<std::size_t>(frame) >= counts_.size()) return 0;
  return counts_[static_cast<std::size_t>(frame)];
}

AtomicAction classify_action(const TouchSequence& sequence,
                             const DeviceProfile& profile,
                             const ClassifierOptions& options) {
  AtomicAction action{ActionKind::kGesture, sequence};
  const Point origin = sequence.touches.front().center();
  const bool stationary = std::all_of(
      sequence.touches.begin(), sequence.touches.end(),
      [&](const TouchDetection& t) {
        return distance(origin, t.center()) <= profile.touch_slop;
      });
  if (!stationary) return action;

  const int active = action.active_frames();
  const bool short_press =
      options.duration_based_tap_cutoff
          ? frame_time_ms(active, profile.fps) <= options.tap_max_ms
          : active <= options.tap_max_frames;
  action.kind = short_press ? ActionKind::kTap : ActionKind::kLongTap;
  return action;
}

std::vector<AtomicAction> filter_actions(std::vector<AtomicAction> actions,
                                         const ClassifierOptions& options) {
  std::erase_if(actions, [&](const AtomicAction& a) {
    const double high_fraction =
        static_cast<double>(a.sequence.high_count()) /
        static_cast<double>(a.sequence.touches.size());
    return high_fraction < options.min_high_fraction ||
           a.sequence.frame_span() <= options.max_discard_frames;
  });
  return actions;
}

double multi_touch_fraction(const AtomicAction& action,
                            const FrameTouchCounts& counts) {
  int multi = 0;
  for (int f = action.start_frame(); f <= action.end_frame(); ++f) {
    if (counts.at(f) >= 2) ++multi;
  }
  return static_cast<double>(multi) /
         static_cast<double>(action.sequence.frame_span());
}

std::vector<std::vector<std::size_t>> group_overlapping(
    std::span<const FrameSpan> sorted_spans) {
  std::vector<std::vector<std::size_t>> stack;
  for (std::size_t i = 0; i < sorted_spans.size(); ++i) {
    if (!stack.empty()) {
      std::vector<std::size_t>& top = stack.back();
      const bool overlaps = std::any_of(top.begin(), top.end(), [&](std::size_t j) {
        return sorted_spans[i].start < sorted_spans[j].end;
      });
      if (overlaps) {
        top.push_back(i);
        continue;
      }
    }
    stack.push_back({i});
  }
  return stack;
}

int classify_finger_count(std::span<const int> per_frame_counts) {
  std::map<int, int> histogram;
  for (int c : per_frame_counts) ++histogram[c];
  int best = 1;
  int best_frequency = 0;
  for (const auto& [count, frequency] : histogram) {
    // Ascending keys, so >= hands ties to the larger count.
    if (frequency >= best_frequency) {
      best = count;
      best_frequency = frequency;
    }
  }
  return std::clamp(best, 1, kMaxFingers);
}

std::vector<int> group_frame_counts(const std::vector<AtomicAction>& actions) {
  if (actions.empty()) return {};
  int start = actions.front().start_frame();
  int end = actions.front().end_frame();
  for (const AtomicAction& a : actions) {
    start = std::min(start, a.start_frame());
    end = std::max(end, a.end_frame());
  }
  std::vector<int> counts(static_cast<std::size_t>(end - start + 1), 0);
  for (const AtomicAction& a : actions) {
    for (const TouchDetection& t : a.sequence.touches) {
      ++counts[static_cast<std::size_t>(t.frame - start)];
    }
  }
  return counts;
}

ClassifiedScenario identify_sfa_mfa(std::vector<AtomicAction> actions,
                                    const FrameTouchCounts& counts,
                                    const DeviceProfile& profile,
                                    const ClassifierOptions& options) {
  std::stable_sort(actions.begin(), actions.end(), action_order);

  ClassifiedScenario scenario;
  scenario.profile = profile;
  std::vector<AtomicAction> potential_mfas;
  for (AtomicAction& action : actions) {
    if (multi_touch_fraction(action, counts) > options.multi_touch_threshold) {
      potential_mfas.push_back(std::move(action));
    } else {
      scenario.items.emplace_back(std::move(action));
    }
  }

  std::vector<FrameSpan> spans;
  spans.reserve(potential_mfas.size());
  for (const AtomicAction& a : potential_mfas) {
    spans.push_back({a.start_frame(), a.end_frame()});
  }
  for (const std::vector<std::size_t>& group : group_overlapping(spans)) {
    if (group.size() == 1) {
      scenario.items.emplace_back(std::move(potential_mfas[group.front()]));
      continue;
    }
    MultiFingerAction mfa;
    for (std::size_t i : group) mfa.actions.push_back(std::move(potential_mfas[i]));
    mfa.finger_count = classify_finger_count(group_frame_counts(mfa.actions));
    scenario.items.emplace_back(std::move(mfa));
  }

  std::stable_sort(scenario.items.begin(), scenario.items.end(),
                   [](const ScenarioItem& a, const ScenarioItem& b) {
                     return std::make_pair(item_start_frame(a), item_end_frame(a)) <
                            std::make_pair(item_start_frame(b), item_end_frame(b));
                   });
  return scenario;
}

ClassifiedScenario classify_trace(const DetectionTrace& trace,
                                  const ClassifierOptions& options) {
  const DetectionTrace filtered = filter_confidence(trace, options.min_confidence);
  SegmenterOptions segmenter;
  segmenter.tie_tolerance = trace.profile.touch_slop;
  segmenter.max_discard_frames = options.max_discard_frames;

  std::vector<AtomicAction> actions;
  for (const TouchSequence& seq : segment_trace(filtered, segmenter)) {
    actions.push_back(classify_action(seq, trace.profile, options));
  }
  actions = filter_actions(std::move(actions), options);
  return identify_sfa_mfa(std::move(actions), FrameTouchCounts(filtered),
                          trace.profile, options);
}

std::string serialize_scenario(const ClassifiedScenario& scenario) {
  Json items = Json::array();
  for (const ScenarioItem& item : scenario.items) {
    if (const auto* sfa = std::get_if<AtomicAction>(&item)) {
      items.push_back(Json{{"type", "sfa"}, {"action", action_to_json(*sfa)}});
    } else {
      const auto& mfa = std::get<MultiFingerAction>(item);
      Json actions = Json::array();
      for (const AtomicAction& a : mfa.actions) actions.push_back(action_to_json(a));
      items.push_back(Json{{"type", "mfa"},
                           {"finger_count", mfa.finger_count},
                           {"actions", std::move(actions)}});
    }
  }
  Json doc{{"schema_version", kScenarioSchemaVersion},
           {"device", json_codec::device_to_json(scenario.profile)},
           {"items", std::move(items)}};
  return doc.dump(2) + "\n";
}

ClassifiedScenario parse_scenario(std::string_view json_text) {
  const Json doc = json_codec::parse_document(json_text);
  const std::int64_t version = json_codec::get_int(doc, "schema_version", "$");
  if (version != kScenarioSchemaVersion) {
    json_codec::schema_error("$.schema_version",
                             "unsupported version " + std::to_string(version));
  }
  ClassifiedScenario scenario;
  scenario.profile =
      json_codec::device_from_json(json_codec::require(doc, "device", "$"), "$.device");
  const Json& items = json_codec::get_array(doc, "items", "$");
  for (std::size_t i = 0; i < items.size(); ++i) {
    const std::string path = "$.items[" + std::to_string(i) + "]";
    const std::string type = json_codec::get_string(items[i], "type", path);
    if (type == "sfa") {
      scenario.items.emplace_back(
          action_from_json(json_codec::require(items[i], "action", path), path + ".action"));
    } else if (type == "mfa") {
      MultiFingerAction mfa;
      mfa.finger_count = static_cast<int>(json_codec::get_int(items[i], "finger_count", path));
      if (mfa.finger_count < 1 || mfa.finger_count > kMaxFingers) {
        json_codec::schema_error(path + ".finger_count", "must lie in [1, 10]");
      }
      const Json& actions = json_codec::get_array(items[i], "actions", path);
      if (actions.empty()) json_codec::schema_error(path + ".actions", "empty");
      for (std::size_t j = 0; j < actions.size(); ++j) {
        mfa.actions.push_back(action_from_json(
            actions[j], path + ".actions[" + std::to_string(j) + "]"));
      }
      scenario.items.emplace_back(std::move(mfa));
    } else {
      json_codec::schema_error(path + ".type", "expected \"sfa\" or \"mfa\"");
    }
    if (i > 0 && item_start_frame(scenario.items[i]) <
                     item_start_frame(scenario.items[i - 1])) {
      json_codec::schema_error(path, "items are not in chronological order");
    }
  }
  return scenario;
}

}  // namespace touchreplay
