#ifndef TOUCHREPLAY_SCRIPT_CODEGEN_H_
#define TOUCHREPLAY_SCRIPT_CODEGEN_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "touchreplay/action_classifier.h"
#include "touchreplay/trace_model.h"

namespace touchreplay {

// Linux input event vocabulary used by the generated scripts (multi-touch
// protocol type B).
namespace evdev {
inline constexpr std::uint16_t kEvSyn = 0x0000;
inline constexpr std::uint16_t kEvKey = 0x0001;
inline constexpr std::uint16_t kEvAbs = 0x0003;

inline constexpr std::uint16_t kSynReport = 0x0000;
inline constexpr std::uint16_t kBtnTouch = 0x014a;
inline constexpr std::uint16_t kAbsMtSlot = 0x002f;
inline constexpr std::uint16_t kAbsMtPositionX = 0x0035;
inline constexpr std::uint16_t kAbsMtPositionY = 0x0036;
inline constexpr std::uint16_t kAbsMtTrackingId = 0x0039;

inline constexpr std::int32_t kReleasedTrackingId = -1;
inline constexpr int kSlotCount = 10;
}  // namespace evdev

inline constexpr char kDefaultDeviceNode[] = "/dev/input/event1";

struct InputEvent {
  std::int64_t timestamp_us = 0;  // from script start
  std::uint16_t type = 0;
  std::uint16_t code = 0;
  std::int32_t value = 0;

  double timestamp_ms() const { return static_cast<double>(timestamp_us) / 1000.0; }

  friend bool operator==(const InputEvent&, const InputEvent&) = default;
};

struct SendEventScript {
  std::string device_node = kDefaultDeviceNode;
  std::vector<InputEvent> events;
  DeviceProfile profile;

  friend bool operator==(const SendEventScript&, const SendEventScript&) = default;
};

struct ScriptOptions {
  std::string device_node = kDefaultDeviceNode;
  // Raw events some older devices need around a replay. The prologue is
  // stamped at time 0, the epilogue at the last event's time.
  std::vector<InputEvent> prologue;
  std::vector<InputEvent> epilogue;
};

// Rounds a touch center to device pixels (half-up) inside the screen.
std::int32_t to_device_x(double x, const DeviceProfile& profile);
std::int32_t to_device_y(double y, const DeviceProfile& profile);

// Events for one single-finger action starting at |t0_us|, on slot 0.
//
// Taps and long taps get a single coordinate sample (the first touch center)
// held for the action's active duration; gestures get one sample per active
// touch, one frame period apart. The contact is released one frame period
// after the last active frame.
std::vector<InputEvent> emit_sfa_events(const AtomicAction& action,
                                        const DeviceProfile& profile,
                                        std::int64_t t0_us,
                                        std::int32_t tracking_id = 1);

// Events for a multi-finger action starting at |t0_us|. Each frame becomes
// one report with a slot select and position for every finger down in it;
// fingers open on their first active frame and release in the report of
// their last one. A group of one action is emitted as a single-finger action.
// Throws Error(kSlotExhaustion) beyond ten simultaneous contacts.
std::vector<InputEvent> emit_mfa_events(const MultiFingerAction& mfa,
                                        const DeviceProfile& profile,
                                        std::int64_t t0_us,
                                        std::int32_t first_tracking_id = 1);

// Compiles every item in chronological order. Times are measured from the
// first item's start frame, so the pause between two items is the frame
// distance between them. Throws Error(kOverlapConflict) when an item would
// begin before the previous one has released. An item beginning exactly as
// the previous releases is nudged 1us later so reports stay strictly ordered.
SendEventScript assemble_script(const ClassifiedScenario& scenario,
                                const ScriptOptions& options = {});

// Human-readable problems with |script|; empty when it is well formed
// (balanced contacts, ordered reports, coordinates on screen).
std::vector<std::string> validate_script(const SendEventScript& script);

// One line per event: "[<seconds>.<micros>] <device_node>: <type> <code> <value>"
// with 4/4/8 lowercase hex digits.
std::string serialize_script(const SendEventScript& script);
SendEventScript parse_script_log(std::string_view text, const DeviceProfile& profile);

// Replay format: magic "V2SR\x01\0\0\0" followed by little-endian records
// (delta_us: u32, type: u16, code: u16, value: i32).
inline constexpr std::size_t kRunnableRecordSize = 12;
std::string translate_runnable(const SendEventScript& script);
std::vector<InputEvent> parse_runnable(std::string_view bytes);

}  // namespace touchreplay

#endif  // TOUCHREPLAY_SCRIPT_CODEGEN_H_
