#ifndef TOUCHREPLAY_GESTURE_SEGMENTER_H_
#define TOUCHREPLAY_GESTURE_SEGMENTER_H_

#include <cstddef>
#include <vector>

#include "touchreplay/trace_model.h"

namespace touchreplay {

// Detections below this confidence are treated as detector noise.
inline constexpr double kDefaultMinConfidence = 0.7;
// Runs spanning this many frames or fewer are discarded as false positives.
inline constexpr int kMaxDiscardFrames = 2;

// Detections over a maximal run of consecutive, non-empty frames.
struct FrameGroup {
  std::vector<TouchDetection> detections;  // sorted by frame
  int first_frame = 0;
  int last_frame = 0;

  int frame_span() const { return last_frame - first_frame + 1; }
};

// One finger's contiguous contact: one touch per frame, frames consecutive,
// and any Low-opacity touches form a suffix (the lift fade).
struct TouchSequence {
  std::vector<TouchDetection> touches;

  int start_frame() const { return touches.front().frame; }
  int end_frame() const { return touches.back().frame; }
  int frame_span() const { return end_frame() - start_frame() + 1; }
  std::size_t high_count() const;
  // Frame of the last High touch, or start_frame() - 1 if there is none.
  int last_high_frame() const;
};

struct SegmenterOptions {
  // Candidate links whose distances differ by less than this are ties and
  // fall through to the opacity rule.
  double tie_tolerance = kDefaultTouchSlop;
  int max_discard_frames = kMaxDiscardFrames;
};

DetectionTrace filter_confidence(const DetectionTrace& trace,
                                 double min_confidence = kDefaultMinConfidence);

std::vector<FrameGroup> group_consecutive(
    const DetectionTrace& trace, int max_discard_frames = kMaxDiscardFrames);

// Splits a frame group into per-finger touch sequences.
//
// Open sequences are linked to the touches of the next frame by greedy
// nearest-pair matching on center distance. When the closest candidates are
// within |tie_tolerance| of each other the opacity rule decides: a Low touch
// terminates the older High sequence, a High touch continues a High sequence
// rather than a faded one. Remaining ties go to the touch with smaller x,
// then smaller y. Surplus touches open new sequences; unmatched sequences are
// closed. Afterwards every sequence is cut after its Low run wherever a High
// touch follows it, and sequences of |max_discard_frames| or fewer frames are
// dropped.
std::vector<TouchSequence> segment_actions(const FrameGroup& group,
                                           const SegmenterOptions& options = {});

// group_consecutive + segment_actions over all groups, in group order.
std::vector<TouchSequence> segment_trace(const DetectionTrace& filtered_trace,
                                         const SegmenterOptions& options = {});

}  // namespace touchreplay

#endif  // TOUCHREPLAY_GESTURE_SEGMENTER_H_
