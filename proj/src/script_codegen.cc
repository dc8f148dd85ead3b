#include "touchreplay/script_codegen.h"

#include <algorithm>
#include <array>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>

#include "touchreplay/error.h"

namespace touchreplay {

namespace {

// Maps frames to script time with the origin's offset computed exactly, so
// gaps between items add up without accumulating rounding.
struct FrameClock {
  int origin_frame = 0;
  int fps = kMinFps;
  std::int64_t base_us = 0;

  std::int64_t at(int frame) const {
    return base_us + frame_time_us(frame - origin_frame, fps);
  }
};

class Emitter {
 public:
  Emitter(const DeviceProfile& profile, FrameClock clock, std::int32_t next_id)
      : profile_(profile), clock_(clock), next_id_(next_id) {}

  std::vector<InputEvent>& events() { return events_; }
  std::int32_t next_id() const { return next_id_; }

  void sfa(const AtomicAction& action);
  void mfa(const MultiFingerAction& mfa);

 private:
  void add(std::int64_t t, std::uint16_t type, std::uint16_t code, std::int32_t value) {
    events_.push_back({t, type, code, value});
  }
  void position(std::int64_t t, Point p) {
    add(t, evdev::kEvAbs, evdev::kAbsMtPositionX, to_device_x(p.x, profile_));
    add(t, evdev::kEvAbs, evdev::kAbsMtPositionY, to_device_y(p.y, profile_));
  }
  void sync(std::int64_t t) { add(t, evdev::kEvSyn, evdev::kSynReport, 0); }
  std::int32_t take_id() {
    const std::int32_t id = next_id_;
    next_id_ = next_id_ >= 0xffff ? 1 : next_id_ + 1;
    return id;
  }

  const DeviceProfile& profile_;
  FrameClock clock_;
  std::int32_t next_id_;
  std::vector<InputEvent> events_;
};

// Position of a finger on |frame|. Taps and long taps stay on their first
// touch.
Point finger_position(const AtomicAction& action, int frame) {
  if (action.kind != ActionKind::kGesture) {
    return action.sequence.touches.front().center();
  }
  return action.sequence.touches[static_cast<std::size_t>(frame - action.start_frame())]
      .center();
}

void Emitter::sfa(const AtomicAction& action) {
  const int start = action.start_frame();
  const int active = std::max(1, action.active_frames());
  const std::int64_t t0 = clock_.at(start);

  add(t0, evdev::kEvAbs, evdev::kAbsMtSlot, 0);
  add(t0, evdev::kEvAbs, evdev::kAbsMtTrackingId, take_id());
  add(t0, evdev::kEvKey, evdev::kBtnTouch, 1);
  position(t0, finger_position(action, start));
  sync(t0);

  if (action.kind == ActionKind::kGesture) {
    for (int f = start + 1; f < start + active; ++f) {
      const std::int64_t t = clock_.at(f);
      position(t, finger_position(action, f));
      sync(t);
    }
  }

  const std::int64_t t_end = clock_.at(start + active);
  add(t_end, evdev::kEvAbs, evdev::kAbsMtTrackingId, evdev::kReleasedTrackingId);
  add(t_end, evdev::kEvKey, evdev::kBtnTouch, 0);
  sync(t_end);
}

void Emitter::mfa(const MultiFingerAction& group) {
  if (group.actions.size() == 1) {
    sfa(group.actions.front());
    return;
  }
  struct Finger {
    const AtomicAction* action;
    int first;
    int last;
    int slot = -1;
  };
  std::vector<Finger> fingers;
  int first_frame = std::numeric_limits<int>::max();
  int last_frame = std::numeric_limits<int>::min();
  for (const AtomicAction& a : group.actions) {
    if (a.active_frames() <= 0) continue;
    fingers.push_back({&a, a.start_frame(), a.sequence.last_high_frame()});
    first_frame = std::min(first_frame, fingers.back().first);
    last_frame = std::max(last_frame, fingers.back().last);
  }
  if (fingers.empty()) return;

  std::array<bool, evdev::kSlotCount> slot_busy{};
  int down = 0;
  for (int f = first_frame; f <= last_frame; ++f) {
    for (Finger& finger : fingers) {
      if (finger.first != f) continue;
      auto free = std::find(slot_busy.begin(), slot_busy.end(), false);
      if (free == slot_busy.end()) {
        throw Error(ErrorCode::kSlotExhaustion,
                    "more than " + std::to_string(evdev::kSlotCount) +
                        " simultaneous contacts at frame " + std::to_string(f));
      }
      *free = true;
      finger.slot = static_cast<int>(free - slot_busy.begin());
    }

    std::vector<Finger*> active;
    for (Finger& finger : fingers) {
      if (finger.first <= f && f <= finger.last) active.push_back(&finger);
    }
    if (active.empty()) continue;
    std::sort(active.begin(), active.end(),
              [](const Finger* a, const Finger* b) { return a->slot < b->slot; });

    const std::int64_t t = clock_.at(f);
    for (Finger* finger : active) {
      add(t, evdev::kEvAbs, evdev::kAbsMtSlot, finger->slot);
      if (finger->first == f) {
        add(t, evdev::kEvAbs, evdev::kAbsMtTrackingId, take_id());
        if (down++ == 0) add(t, evdev::kEvKey, evdev::kBtnTouch, 1);
      }
      position(t, finger_position(*finger->action, f));
      if (finger->last == f) {
        add(t, evdev::kEvAbs, evdev::kAbsMtTrackingId, evdev::kReleasedTrackingId);
        slot_busy[static_cast<std::size_t>(finger->slot)] = false;
        --down;
      }
    }
    if (down == 0) add(t, evdev::kEvKey, evdev::kBtnTouch, 0);
    sync(t);
  }
}

void put_le(std::string* out, std::uint64_t value, int bytes) {
  for (int i = 0; i < bytes; ++i) {
    out->push_back(static_cast<char>((value >> (8 * i)) & 0xff));
  }
}

std::uint64_t get_le(std::string_view in, std::size_t offset, int bytes) {
  std::uint64_t value = 0;
  for (int i = 0; i < bytes; ++i) {
    value |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[offset + i]))
             << (8 * i);
  }
  return value;
}

constexpr std::string_view kRunnableMagic{"V2SR\x01\x00\x00\x00", 8};

[[noreturn]] void invalid_script(const std::string& what) {
  throw Error(ErrorCode::kInvalidScript, what);
}

}  // namespace

std::int32_t to_device_x(double x, const DeviceProfile& profile) {
  const double px = std::floor(x + 0.5);
  return static_cast<std::int32_t>(std::clamp(px, 0.0, profile.screen_width - 1.0));
}

std::int32_t to_device_y(double y, const DeviceProfile& profile) {
  const double px = std::floor(y + 0.5);
  return static_cast<std::int32_t>(std::clamp(px, 0.0, profile.screen_height - 1.0));
}

std::vector<InputEvent> emit_sfa_events(const AtomicAction& action,
                                        const DeviceProfile& profile,
                                        std::int64_t t0_us,
                                        std::int32_t tracking_id) {
  Emitter emitter(profile, {action.start_frame(), profile.fps, t0_us}, tracking_id);
  emitter.sfa(action);
  return std::move(emitter.events());
}

std::vector<InputEvent> emit_mfa_events(const MultiFingerAction& mfa,
                                        const DeviceProfile& profile,
                                        std::int64_t t0_us,
                                        std::int32_t first_tracking_id) {
  Emitter emitter(profile, {mfa.start_frame(), profile.fps, t0_us}, first_tracking_id);
  emitter.mfa(mfa);
  return std::move(emitter.events());
}

SendEventScript assemble_script(const ClassifiedScenario& scenario,
                                const ScriptOptions& options) {
  SendEventScript script;
  script.device_node = options.device_node;
  script.profile = scenario.profile;
  for (InputEvent e : options.prologue) {
    e.timestamp_us = 0;
    script.events.push_back(e);
  }
  if (!scenario.items.empty()) {
    const FrameClock clock{item_start_frame(scenario.items.front()),
                           scenario.profile.fps, 0};
    std::int32_t next_id = 1;
    bool have_previous = false;
    std::int64_t previous_end = 0;
    for (std::size_t i = 0; i < scenario.items.size(); ++i) {
      Emitter emitter(scenario.profile, clock, next_id);
      std::visit(
          [&](const auto& item) {
            if constexpr (std::is_same_v<std::decay_t<decltype(item)>, AtomicAction>) {
              emitter.sfa(item);
            } else {
              emitter.mfa(item);
            }
          },
          scenario.items[i]);
      next_id = emitter.next_id();
      std::vector<InputEvent>& events = emitter.events();
      if (events.empty()) continue;

      const std::int64_t begin = events.front().timestamp_us;
      if (have_previous && begin < previous_end) {
        throw Error(ErrorCode::kOverlapConflict,
                    "item " + std::to_string(i) + " starting at frame " +
                        std::to_string(item_start_frame(scenario.items[i])) +
                        " begins before the previous item released");
      }
      if (have_previous && begin == previous_end) {
        for (InputEvent& e : events) {
          if (e.timestamp_us != begin) break;
          ++e.timestamp_us;
        }
      }
      previous_end = events.back().timestamp_us;
      have_previous = true;
      script.events.insert(script.events.end(), events.begin(), events.end());
    }
  }
  const std::int64_t last = script.events.empty() ? 0 : script.events.back().timestamp_us;
  for (InputEvent e : options.epilogue) {
    e.timestamp_us = last;
    script.events.push_back(e);
  }
  return script;
}

std::vector<std::string> validate_script(const SendEventScript& script) {
  std::vector<std::string> problems;
  auto problem = [&](std::size_t i, const std::string& what) {
    problems.push_back("event " + std::to_string(i) + ": " + what);
  };

  std::map<int, std::int32_t> slot_ids;  // slot -> open tracking id
  std::set<std::int32_t> opened;
  int slot = 0;
  bool window_open = false;
  std::int64_t window_time = 0;
  bool have_report = false;
  std::int64_t last_report = 0;

  for (std::size_t i = 0; i < script.events.size(); ++i) {
    const InputEvent& e = script.events[i];
    if (e.timestamp_us < 0) problem(i, "negative timestamp");
    if (i > 0 && e.timestamp_us < script.events[i - 1].timestamp_us) {
      problem(i, "timestamp goes backwards");
    }
    if (!window_open) {
      window_open = true;
      window_time = e.timestamp_us;
      if (have_report && window_time <= last_report) {
        problem(i, "report does not advance time");
      }
    } else if (e.timestamp_us != window_time) {
      problem(i, "report spans several timestamps");
    }

    if (e.type == evdev::kEvSyn) {
      if (e.code != evdev::kSynReport) problem(i, "unexpected EV_SYN code");
      window_open = false;
      have_report = true;
      last_report = window_time;
    } else if (e.type == evdev::kEvKey) {
      if (e.code != evdev::kBtnTouch) problem(i, "unexpected EV_KEY code");
    } else if (e.type == evdev::kEvAbs) {
      switch (e.code) {
        case evdev::kAbsMtSlot:
          if (e.value < 0 || e.value >= evdev::kSlotCount) problem(i, "slot out of range");
          slot = e.value;
          break;
        case evdev::kAbsMtTrackingId:
          if (e.value == evdev::kReleasedTrackingId) {
            if (!slot_ids.erase(slot)) problem(i, "release of an idle slot");
          } else {
            if (slot_ids.count(slot)) problem(i, "slot opened twice");
            if (!opened.insert(e.value).second) {
              problem(i, "tracking id " + std::to_string(e.value) + " reused");
            }
            slot_ids[slot] = e.value;
          }
          break;
        case evdev::kAbsMtPositionX:
          if (e.value < 0 || e.value >= script.profile.screen_width) problem(i, "x off screen");
          break;
        case evdev::kAbsMtPositionY:
          if (e.value < 0 || e.value >= script.profile.screen_height) problem(i, "y off screen");
          break;
        default:
          problem(i, "unexpected EV_ABS code");
      }
    } else {
      problem(i, "unexpected event type");
    }
  }
  if (window_open) problems.push_back("script ends inside an unterminated report");
  for (const auto& [s, id] : slot_ids) {
    problems.push_back("tracking id " + std::to_string(id) + " on slot " +
                       std::to_string(s) + " never released");
  }
  return problems;
}

std::string serialize_script(const SendEventScript& script) {
  std::string out;
  out.reserve(script.events.size() * (script.device_node.size() + 40));
  char line[64];
  for (const InputEvent& e : script.events) {
    std::snprintf(line, sizeof(line), "[%" PRId64 ".%06" PRId64 "] ",
                  e.timestamp_us / 1'000'000, e.timestamp_us % 1'000'000);
    out += line;
    out += script.device_node;
    std::snprintf(line, sizeof(line), ": %04x %04x %08x\n", e.type, e.code,
                  static_cast<std::uint32_t>(e.value));
    out += line;
  }
  return out;
}

SendEventScript parse_script_log(std::string_view text, const DeviceProfile& profile) {
  SendEventScript script;
  script.profile = profile;
  bool have_node = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const std::size_t nl = text.find('\n');
    if (nl == std::string_view::npos) {
      invalid_script("line " + std::to_string(line_no) + ": missing line feed");
    }
    const std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl + 1);
    auto fail = [&](const char* what) {
      invalid_script("line " + std::to_string(line_no) + ": " + what);
    };

    const std::size_t close = line.find("] ");
    const std::size_t colon = line.rfind(": ");
    if (line.empty() || line[0] != '[' || close == std::string_view::npos ||
        colon == std::string_view::npos || colon < close) {
      fail("does not match '[sec.usec] node: type code value'");
    }
    const std::string stamp(line.substr(1, close - 1));
    const std::string_view node = line.substr(close + 2, colon - close - 2);
    const std::string fields(line.substr(colon + 2));

    unsigned long long sec = 0;
    unsigned long long usec = 0;
    int consumed = 0;
    const std::size_t dot = stamp.find('.');
    if (dot == std::string::npos || stamp.size() - dot - 1 != 6 ||
        std::sscanf(stamp.c_str(), "%llu.%6llu%n", &sec, &usec, &consumed) != 2 ||
        static_cast<std::size_t>(consumed) != stamp.size()) {
      fail("bad timestamp");
    }
    unsigned type = 0;
    unsigned code = 0;
    unsigned value = 0;
    if (fields.size() != 18 || fields[4] != ' ' || fields[9] != ' ' ||
        std::sscanf(fields.c_str(), "%4x %4x %8x", &type, &code, &value) != 3) {
      fail("bad event triple");
    }
    if (!have_node) {
      script.device_node = std::string(node);
      have_node = true;
    } else if (node != script.device_node) {
      fail("device node changes mid-script");
    }
    script.events.push_back({static_cast<std::int64_t>(sec * 1'000'000 + usec),
                             static_cast<std::uint16_t>(type),
                             static_cast<std::uint16_t>(code),
                             static_cast<std::int32_t>(value)});
  }
  return script;
}

std::string translate_runnable(const SendEventScript& script) {
  std::string out(kRunnableMagic);
  out.reserve(kRunnableMagic.size() + script.events.size() * kRunnableRecordSize);
  std::int64_t previous = 0;
  for (const InputEvent& e : script.events) {
    const std::int64_t delta = e.timestamp_us - previous;
    if (delta < 0 || delta > std::numeric_limits<std::uint32_t>::max()) {
      invalid_script("event delta " + std::to_string(delta) +
                     "us does not fit the replay format");
    }
    previous = e.timestamp_us;
    put_le(&out, static_cast<std::uint64_t>(delta), 4);
    put_le(&out, e.type, 2);
    put_le(&out, e.code, 2);
    put_le(&out, static_cast<std::uint32_t>(e.value), 4);
  }
  return out;
}

std::vector<InputEvent> parse_runnable(std::string_view bytes) {
  if (bytes.size() < kRunnableMagic.size() ||
      bytes.substr(0, kRunnableMagic.size()) != kRunnableMagic) {
    invalid_script("missing replay-format header");
  }
  bytes.remove_prefix(kRunnableMagic.size());
  if (bytes.size() % kRunnableRecordSize != 0) {
    invalid_script("truncated replay-format record");
  }
  std::vector<InputEvent> events;
  events.reserve(bytes.size() / kRunnableRecordSize);
  std::int64_t t = 0;
  for (std::size_t off = 0; off < bytes.size(); off += kRunnableRecordSize) {
    t += static_cast<std::int64_t>(get_le(bytes, off, 4));
    events.push_back({t, static_cast<std::uint16_t>(get_le(bytes, off + 4, 2)),
                      static_cast<std::uint16_t>(get_le(bytes, off + 6, 2)),
                      static_cast<std::int32_t>(
                          static_cast<std::uint32_t>(get_le(bytes, off + 8, 4)))});
  }
  return events;
}

}  // namespace touchreplay
