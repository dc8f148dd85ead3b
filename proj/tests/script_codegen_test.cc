#include "touchreplay/script_codegen.h"

#include <gtest/gtest.h>

#include <random>
#include <regex>

#include "script_checker.h"
#include "test_support.h"
#include "touchreplay/error.h"
#include "touchreplay/trace_synth.h"

namespace touchreplay {
namespace {

using testing::check_script;
using testing::moving;
using testing::nexus5;
using testing::stationary;

namespace ev = evdev;

AtomicAction tap(int start, int high, int low, Point p, ActionKind kind = ActionKind::kTap) {
  return {kind, stationary(start, high, low, p)};
}

AtomicAction gesture(int start, int frames, Point from, double dx, double dy, int fade = 0) {
  AtomicAction a{ActionKind::kGesture, moving(start, frames, from, dx, dy)};
  const TouchDetection last = a.sequence.touches.back();
  for (int i = 1; i <= fade; ++i) {
    TouchDetection t = last;
    t.frame += i;
    t.opacity = Opacity::kLow;
    a.sequence.touches.push_back(t);
  }
  return a;
}

std::vector<InputEvent> of_code(const std::vector<InputEvent>& events, std::uint16_t code) {
  std::vector<InputEvent> out;
  for (const InputEvent& e : events) {
    if (e.type == ev::kEvAbs && e.code == code) out.push_back(e);
  }
  return out;
}

SendEventScript wrap(std::vector<InputEvent> events) {
  SendEventScript s;
  s.profile = nexus5();
  s.events = std::move(events);
  return s;
}

TEST(EmitSfa, TapHoldsOneSampleAndReleasesAfterItsFrames) {
  const auto events = emit_sfa_events(tap(0, 10, 3, {540, 960}), nexus5(), 0);
  const std::vector<InputEvent> expected{
      {0, ev::kEvAbs, ev::kAbsMtSlot, 0},
      {0, ev::kEvAbs, ev::kAbsMtTrackingId, 1},
      {0, ev::kEvKey, ev::kBtnTouch, 1},
      {0, ev::kEvAbs, ev::kAbsMtPositionX, 540},
      {0, ev::kEvAbs, ev::kAbsMtPositionY, 960},
      {0, ev::kEvSyn, ev::kSynReport, 0},
      {333333, ev::kEvAbs, ev::kAbsMtTrackingId, -1},
      {333333, ev::kEvKey, ev::kBtnTouch, 0},
      {333333, ev::kEvSyn, ev::kSynReport, 0},
  };
  EXPECT_EQ(events, expected);
  EXPECT_NEAR(events.back().timestamp_ms(), 333.0, 0.5);
  EXPECT_EQ(check_script(wrap(events)), "");
}

TEST(EmitSfa, GestureSamplesEveryTouch) {
  const auto events = emit_sfa_events(gesture(7, 5, {100, 100}, 10, 0, 3), nexus5(), 1000);
  const auto xs = of_code(events, ev::kAbsMtPositionX);
  ASSERT_EQ(xs.size(), 5u);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    EXPECT_EQ(xs[i].value, 100 + 10 * static_cast<int>(i));
    EXPECT_EQ(xs[i].timestamp_us, 1000 + frame_time_us(static_cast<std::int64_t>(i), 30));
    if (i > 0) EXPECT_NEAR(xs[i].timestamp_ms() - xs[i - 1].timestamp_ms(), 1000.0 / 30, 0.5);
  }
  EXPECT_EQ(events.back().timestamp_us, 1000 + frame_time_us(5, 30));
  EXPECT_EQ(check_script(wrap(events)), "");
}

TEST(EmitSfa, LongTapReleaseTime) {
  const auto events = emit_sfa_events(tap(0, 25, 0, {10, 20}, ActionKind::kLongTap), nexus5(), 0);
  EXPECT_EQ(of_code(events, ev::kAbsMtPositionX).size(), 1u);
  EXPECT_EQ(events.back().timestamp_us, frame_time_us(25, 30));
  EXPECT_NEAR(events.back().timestamp_ms(), frame_time_ms(25, 30), 0.5);
  EXPECT_NEAR(events.back().timestamp_ms(), 833.0, 0.5);
}

TEST(EmitMfa, PinchInterleavesSlots) {
  MultiFingerAction pinch{{gesture(0, 30, {300, 900}, 5, 0, 3), gesture(0, 30, {700, 900}, -5, 0, 3)},
                          2};
  const auto events = emit_mfa_events(pinch, nexus5(), 0);
  const auto ids = of_code(events, ev::kAbsMtTrackingId);
  ASSERT_EQ(ids.size(), 4u);
  EXPECT_EQ(ids[0].timestamp_us, 0);
  EXPECT_EQ(ids[1].timestamp_us, 0);
  EXPECT_NE(ids[0].value, ids[1].value);
  EXPECT_EQ(ids[2].value, -1);
  EXPECT_EQ(ids[3].value, -1);
  EXPECT_EQ(ids[2].timestamp_us, 966667);
  EXPECT_EQ(ids[3].timestamp_us, 966667);
  EXPECT_NEAR(ids[2].timestamp_ms(), 967, 0.5);
  EXPECT_EQ(of_code(events, ev::kAbsMtPositionX).size(), 60u);

  int reports = 0;
  for (const InputEvent& e : events) reports += e.type == ev::kEvSyn;
  EXPECT_EQ(reports, 30);
  // Both slots are addressed in every report.
  const auto slots = of_code(events, ev::kAbsMtSlot);
  ASSERT_EQ(slots.size(), 60u);
  for (std::size_t i = 0; i < slots.size(); ++i) {
    EXPECT_EQ(slots[i].value, static_cast<int>(i % 2));
  }
  EXPECT_EQ(check_script(wrap(events)), "");
}

TEST(EmitMfa, FingersEndIndependently) {
  MultiFingerAction mfa{{gesture(0, 30, {300, 900}, 5, 0), gesture(0, 21, {700, 900}, -5, 0)}, 2};
  const auto events = emit_mfa_events(mfa, nexus5(), 0);
  int slot = -1;
  std::int64_t b_closed = -1, a_closed = -1;
  for (const InputEvent& e : events) {
    if (e.type == ev::kEvAbs && e.code == ev::kAbsMtSlot) slot = e.value;
    if (e.type == ev::kEvAbs && e.code == ev::kAbsMtTrackingId && e.value == -1) {
      (slot == 1 ? b_closed : a_closed) = e.timestamp_us;
    }
  }
  EXPECT_EQ(b_closed, frame_time_us(20, 30));
  EXPECT_EQ(a_closed, frame_time_us(29, 30));
  // Slot 0 keeps reporting after slot 1 closes.
  std::size_t after = 0;
  for (const InputEvent& e : of_code(events, ev::kAbsMtPositionX)) after += e.timestamp_us > b_closed;
  EXPECT_EQ(after, 9u);
  EXPECT_EQ(check_script(wrap(events)), "");
}

TEST(EmitMfa, SingleActionGroupMatchesSfa) {
  const AtomicAction a = gesture(4, 12, {200, 300}, 3, 4, 3);
  EXPECT_EQ(emit_mfa_events({{a}, 1}, nexus5(), 500), emit_sfa_events(a, nexus5(), 500));
}

TEST(EmitMfa, ElevenFingersExhaustSlots) {
  MultiFingerAction mfa;
  for (int i = 0; i < 11; ++i) mfa.actions.push_back(gesture(0, 10, {50.0 + 90 * i, 500}, 0, 5));
  mfa.finger_count = 10;
  try {
    emit_mfa_events(mfa, nexus5(), 0);
    FAIL() << "expected SlotExhaustion";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSlotExhaustion);
  }
  mfa.actions.pop_back();
  EXPECT_EQ(check_script(wrap(emit_mfa_events(mfa, nexus5(), 0))), "");
}

TEST(EmitMfa, FreedSlotsAreReused) {
  MultiFingerAction mfa;
  for (int i = 0; i < 10; ++i) mfa.actions.push_back(gesture(0, 5, {50.0 + 90 * i, 500}, 0, 5));
  mfa.actions.push_back(gesture(5, 10, {500, 1500}, 5, 0));
  EXPECT_EQ(check_script(wrap(emit_mfa_events(mfa, nexus5(), 0))), "");
}

TEST(AssembleScript, GapFollowsFrameDistance) {
  ClassifiedScenario s{nexus5(), {tap(10, 10, 3, {100, 100}), tap(70, 10, 3, {200, 200})}};
  const SendEventScript script = assemble_script(s);
  std::vector<std::int64_t> begins;
  for (const InputEvent& e : script.events) {
    if (e.code == ev::kAbsMtTrackingId && e.type == ev::kEvAbs && e.value != -1) {
      begins.push_back(e.timestamp_us);
    }
  }
  ASSERT_EQ(begins.size(), 2u);
  EXPECT_EQ(begins[0], 0);
  EXPECT_EQ(begins[1] - begins[0], 2'000'000);
  EXPECT_TRUE(validate_script(script).empty());
}

TEST(AssembleScript, EmptyScenario) {
  EXPECT_TRUE(assemble_script({nexus5(), {}}).events.empty());
}

TEST(AssembleScript, SingleMfaIsTheMfaStream) {
  MultiFingerAction pinch{{gesture(5, 30, {300, 900}, 5, 0, 3), gesture(6, 28, {700, 900}, -5, 0, 3)},
                          2};
  ClassifiedScenario s{nexus5(), {pinch}};
  EXPECT_EQ(assemble_script(s).events, emit_mfa_events(pinch, nexus5(), 0));
}

TEST(AssembleScript, OverlapConflict) {
  ClassifiedScenario s{nexus5(), {tap(0, 10, 0, {100, 100}), tap(5, 10, 0, {900, 900})}};
  try {
    assemble_script(s);
    FAIL() << "expected OverlapConflict";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kOverlapConflict);
  }
}

TEST(AssembleScript, AdjacentItemsAreNudged) {
  // The first tap releases at frame 10, exactly when the second begins.
  ClassifiedScenario s{nexus5(), {tap(0, 10, 0, {100, 100}), tap(10, 10, 0, {900, 900})}};
  const SendEventScript script = assemble_script(s);
  EXPECT_TRUE(validate_script(script).empty());
  EXPECT_EQ(check_script(script), "");
  EXPECT_EQ(script.events[9].timestamp_us, frame_time_us(10, 30) + 1);
}

TEST(AssembleScript, PrologueAndEpilogue) {
  ScriptOptions options;
  options.device_node = "/dev/input/event7";
  options.prologue = {{99, ev::kEvSyn, ev::kSynReport, 0}};
  options.epilogue = {{0, ev::kEvSyn, ev::kSynReport, 0}};
  const SendEventScript script =
      assemble_script({nexus5(), {tap(3, 10, 0, {100, 100})}}, options);
  EXPECT_EQ(script.device_node, "/dev/input/event7");
  EXPECT_EQ(script.events.front().timestamp_us, 0);
  EXPECT_EQ(script.events.back().timestamp_us, script.events[script.events.size() - 2].timestamp_us);
}

TEST(Coordinates, RoundHalfUpAndClamp) {
  const DeviceProfile p = nexus5();
  EXPECT_EQ(to_device_x(10.5, p), 11);
  EXPECT_EQ(to_device_x(10.49, p), 10);
  EXPECT_EQ(to_device_x(-3, p), 0);
  EXPECT_EQ(to_device_x(1080, p), 1079);
  EXPECT_EQ(to_device_y(1919.7, p), 1919);
}

TEST(SerializeScript, LineGrammar) {
  SendEventScript s = wrap({{1'234'567, ev::kEvAbs, ev::kAbsMtTrackingId, -1}});
  const std::string text = serialize_script(s);
  EXPECT_EQ(text, "[1.234567] /dev/input/event1: 0003 0039 ffffffff\n");
  const std::regex line(R"(\[\d+\.\d{6}\] \S+: [0-9a-f]{4} [0-9a-f]{4} [0-9a-f]{8})");
  const SendEventScript full =
      assemble_script({nexus5(), {gesture(0, 20, {100, 100}, 7, 9, 3)}});
  std::size_t start = 0, lines = 0;
  const std::string log = serialize_script(full);
  while (start < log.size()) {
    const std::size_t nl = log.find('\n', start);
    ASSERT_NE(nl, std::string::npos);
    ASSERT_TRUE(std::regex_match(log.substr(start, nl - start), line));
    start = nl + 1;
    ++lines;
  }
  EXPECT_EQ(lines, full.events.size());
}

SendEventScript random_script(std::mt19937_64& rng) {
  SendEventScript s = wrap({});
  s.device_node = rng() % 2 ? "/dev/input/event" + std::to_string(rng() % 10) : "/dev/x";
  std::int64_t t = 0;
  const std::size_t n = rng() % 50;
  for (std::size_t i = 0; i < n; ++i) {
    t += static_cast<std::int64_t>(rng() % 3 == 0 ? rng() % 5'000'000 : 0);
    s.events.push_back({t, static_cast<std::uint16_t>(rng()), static_cast<std::uint16_t>(rng()),
                        static_cast<std::int32_t>(rng())});
  }
  return s;
}

TEST(SerializeScript, RoundTripsRandomScripts) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const SendEventScript s = random_script(rng);
    const SendEventScript back = parse_script_log(serialize_script(s), s.profile);
    ASSERT_EQ(back.events, s.events);
    if (!s.events.empty()) ASSERT_EQ(back.device_node, s.device_node);
    ASSERT_EQ(parse_runnable(translate_runnable(s)), s.events);
  }
}

TEST(ParseScriptLog, RejectsBadLines) {
  const DeviceProfile p = nexus5();
  EXPECT_THROW(parse_script_log("[0.000000] /dev/x: 0003 0039 ffffffff", p), Error);
  EXPECT_THROW(parse_script_log("[0.00000] /dev/x: 0003 0039 ffffffff\n", p), Error);
  EXPECT_THROW(parse_script_log("[0.000000] /dev/x: 003 0039 ffffffff\n", p), Error);
  EXPECT_THROW(parse_script_log("0.000000 /dev/x: 0003 0039 ffffffff\n", p), Error);
  EXPECT_THROW(parse_script_log("[0.000000] /dev/x: 0003 0039 ffffffff\n"
                                "[0.000000] /dev/y: 0003 0039 ffffffff\n",
                                p),
               Error);
  EXPECT_TRUE(parse_script_log("", p).events.empty());
}

TEST(Runnable, FormatAndErrors) {
  const SendEventScript s = wrap({{5, 3, 0x39, -1}, {70000, 0, 0, 0}});
  const std::string bytes = translate_runnable(s);
  ASSERT_EQ(bytes.size(), 8 + 2 * kRunnableRecordSize);
  EXPECT_EQ(bytes.substr(0, 8), std::string("V2SR\x01\x00\x00\x00", 8));
  EXPECT_EQ(bytes.substr(8, 12), std::string("\x05\x00\x00\x00\x03\x00\x39\x00\xff\xff\xff\xff", 12));
  // Second record holds the delta, not the absolute time.
  EXPECT_EQ(static_cast<unsigned char>(bytes[20]), (70000 - 5) & 0xff);
  EXPECT_THROW(parse_runnable("V2SR"), Error);
  EXPECT_THROW(parse_runnable(bytes.substr(0, bytes.size() - 1)), Error);
  EXPECT_THROW(parse_runnable("XXXX\x01\x00\x00\x00"), Error);
  EXPECT_THROW(translate_runnable(wrap({{5'000'000'000, 0, 0, 0}})), Error);
}

TEST(AssembleScript, RandomScenariosAreWellFormed) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const SynthesisResult r = synthesize_trace(random_scenario(nexus5(), seed), NoiseModel{});
    const SendEventScript script = assemble_script(classify_trace(r.trace));
    ASSERT_TRUE(validate_script(script).empty()) << validate_script(script).front();
    ASSERT_EQ(check_script(script), "") << "seed " << seed;
  }
}

TEST(ValidateScript, FlagsProblems) {
  EXPECT_FALSE(validate_script(wrap({{0, ev::kEvAbs, ev::kAbsMtTrackingId, 1},
                                     {0, ev::kEvSyn, ev::kSynReport, 0}}))
                   .empty());
  EXPECT_FALSE(validate_script(wrap({{0, ev::kEvAbs, ev::kAbsMtTrackingId, -1},
                                     {0, ev::kEvSyn, ev::kSynReport, 0}}))
                   .empty());
  EXPECT_FALSE(validate_script(wrap({{5, ev::kEvSyn, ev::kSynReport, 0},
                                     {5, ev::kEvSyn, ev::kSynReport, 0}}))
                   .empty());
  EXPECT_FALSE(validate_script(wrap({{5, ev::kEvAbs, ev::kAbsMtPositionX, 5000},
                                     {5, ev::kEvSyn, ev::kSynReport, 0}}))
                   .empty());
}

}  // namespace
}  // namespace touchreplay
