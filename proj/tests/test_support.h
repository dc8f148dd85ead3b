#ifndef TOUCHREPLAY_TESTS_TEST_SUPPORT_H_
#define TOUCHREPLAY_TESTS_TEST_SUPPORT_H_

#include <algorithm>
#include <vector>

#include "touchreplay/action_classifier.h"
#include "touchreplay/gesture_segmenter.h"
#include "touchreplay/trace_model.h"

namespace touchreplay::testing {

inline constexpr double kBoxSide = 36.0;

inline DeviceProfile nexus5() {
  DeviceProfile p;
  find_builtin_profile("nexus5", &p);
  return p;
}

inline TouchDetection touch(int frame, double cx, double cy, Opacity opacity = Opacity::kHigh,
                            double confidence = 1.0) {
  return {frame, {cx - kBoxSide / 2, cy - kBoxSide / 2, kBoxSide, kBoxSide}, confidence,
          opacity};
}

// |high| High touches at |p| from |start|, then |low| Low touches.
inline TouchSequence stationary(int start, int high, int low, Point p) {
  TouchSequence s;
  for (int i = 0; i < high + low; ++i) {
    s.touches.push_back(touch(start + i, p.x, p.y, i < high ? Opacity::kHigh : Opacity::kLow));
  }
  return s;
}

// High touches moving by (dx, dy) per frame.
inline TouchSequence moving(int start, int frames, Point from, double dx, double dy) {
  TouchSequence s;
  for (int i = 0; i < frames; ++i) {
    s.touches.push_back(touch(start + i, from.x + dx * i, from.y + dy * i));
  }
  return s;
}

inline DetectionTrace make_trace(std::vector<TouchDetection> detections) {
  DetectionTrace t;
  t.profile = nexus5();
  std::stable_sort(detections.begin(), detections.end(),
                   [](const auto& a, const auto& b) { return a.frame < b.frame; });
  t.frame_count = detections.empty() ? 0 : detections.back().frame + 1;
  t.detections = std::move(detections);
  return t;
}

inline FrameGroup make_group(std::vector<TouchDetection> detections) {
  DetectionTrace t = make_trace(std::move(detections));
  FrameGroup g;
  g.detections = t.detections;
  g.first_frame = g.detections.front().frame;
  g.last_frame = g.detections.back().frame;
  return g;
}

inline AtomicAction action_over(int start, int end, ActionKind kind = ActionKind::kGesture,
                                Point at = {500, 500}) {
  AtomicAction a;
  a.kind = kind;
  for (int f = start; f <= end; ++f) a.sequence.touches.push_back(touch(f, at.x, at.y));
  return a;
}

}  // namespace touchreplay::testing

#endif  // TOUCHREPLAY_TESTS_TEST_SUPPORT_H_
