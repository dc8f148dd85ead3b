#include "touchreplay/gesture_segmenter.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "test_support.h"
#include "touchreplay/trace_synth.h"

namespace touchreplay {
namespace {

using testing::make_group;
using testing::make_trace;
using testing::nexus5;
using testing::touch;

std::vector<int> frames_of(const TouchSequence& s) {
  std::vector<int> out;
  for (const TouchDetection& t : s.touches) out.push_back(t.frame);
  return out;
}

std::vector<int> range(int lo, int hi) {
  std::vector<int> out;
  for (int f = lo; f <= hi; ++f) out.push_back(f);
  return out;
}

bool low_is_suffix(const TouchSequence& s) {
  bool seen_low = false;
  for (const TouchDetection& t : s.touches) {
    if (!t.is_high()) seen_low = true;
    if (seen_low && t.is_high()) return false;
  }
  return true;
}

TEST(FilterConfidence, BoundaryIsKept) {
  const DetectionTrace t = make_trace({touch(0, 1, 1, Opacity::kHigh, 0.9),
                                       touch(1, 1, 1, Opacity::kHigh, 0.69),
                                       touch(2, 1, 1, Opacity::kHigh, 0.7)});
  const DetectionTrace f = filter_confidence(t);
  ASSERT_EQ(f.detections.size(), 2u);
  EXPECT_EQ(f.detections[0].confidence, 0.9);
  EXPECT_EQ(f.detections[1].confidence, 0.7);
  EXPECT_EQ(f.frame_count, t.frame_count);
}

TEST(FilterConfidence, EmptyAndIdentity) {
  EXPECT_TRUE(filter_confidence(make_trace({})).detections.empty());
  const DetectionTrace t = make_trace({touch(0, 1, 1), touch(0, 5, 5), touch(3, 2, 2)});
  EXPECT_EQ(filter_confidence(t), t);
}

TEST(GroupConsecutive, GapSplitsGroups) {
  std::vector<TouchDetection> dets;
  for (int f : {3, 4, 5, 9, 10, 11, 12}) dets.push_back(touch(f, 100, 100));
  const auto groups = group_consecutive(make_trace(dets));
  ASSERT_EQ(groups.size(), 2u);
  EXPECT_EQ(groups[0].first_frame, 3);
  EXPECT_EQ(groups[0].last_frame, 5);
  EXPECT_EQ(groups[1].first_frame, 9);
  EXPECT_EQ(groups[1].detections.size(), 4u);
}

TEST(GroupConsecutive, TwoFrameRunsAreDiscarded) {
  EXPECT_TRUE(group_consecutive(make_trace({touch(3, 1, 1), touch(4, 1, 1)})).empty());
  EXPECT_EQ(group_consecutive(make_trace({touch(3, 1, 1), touch(4, 1, 1), touch(5, 1, 1)}))
                .size(),
            1u);
}

TEST(GroupConsecutive, GroupsByFrameAdjacencyNotTouchCount) {
  const auto groups = group_consecutive(
      make_trace({touch(3, 1, 1), touch(4, 1, 1), touch(4, 500, 500), touch(5, 1, 1)}));
  ASSERT_EQ(groups.size(), 1u);
  EXPECT_EQ(groups[0].detections.size(), 4u);
}

// Two actions overlapping for three frames: B lands one frame after A, and
// A's last node is a Low touch exactly between A's and B's previous nodes.
TEST(SegmentActions, FadingNodeJoinsTheOlderAction) {
  std::vector<TouchDetection> dets;
  for (int f = 0; f <= 2; ++f) dets.push_back(touch(f, 100, 100));
  for (int f = 1; f <= 2; ++f) dets.push_back(touch(f, 140, 100));
  dets.push_back(touch(3, 120, 100, Opacity::kLow));
  for (int f = 3; f <= 5; ++f) dets.push_back(touch(f, 120, 130));
  const auto seqs = segment_actions(make_group(dets));
  ASSERT_EQ(seqs.size(), 2u);
  EXPECT_EQ(frames_of(seqs[0]), range(0, 3));
  EXPECT_EQ(seqs[0].touches.back().opacity, Opacity::kLow);
  EXPECT_EQ(seqs[0].touches.back().center(), (Point{120, 100}));
  EXPECT_EQ(frames_of(seqs[1]), range(1, 5));
  EXPECT_EQ(seqs[1].touches[2].center(), (Point{120, 130}));
}

TEST(SegmentActions, SingleChain) {
  std::vector<TouchDetection> dets;
  for (int f = 0; f <= 9; ++f) dets.push_back(touch(f, 300 + f, 300));
  const auto seqs = segment_actions(make_group(dets));
  ASSERT_EQ(seqs.size(), 1u);
  EXPECT_EQ(seqs[0].touches.size(), 10u);
}

TEST(SegmentActions, InteriorLowNodeSplits) {
  std::vector<TouchDetection> dets;
  for (int f = 0; f <= 11; ++f) {
    dets.push_back(touch(f, 300, 300, f == 5 ? Opacity::kLow : Opacity::kHigh));
  }
  const auto seqs = segment_actions(make_group(dets));
  ASSERT_EQ(seqs.size(), 2u);
  EXPECT_EQ(frames_of(seqs[0]), range(0, 5));
  EXPECT_EQ(frames_of(seqs[1]), range(6, 11));
}

TEST(SegmentActions, ShortPiecesAfterSplitAreDropped) {
  std::vector<TouchDetection> dets;
  for (int f = 0; f <= 7; ++f) {
    dets.push_back(touch(f, 300, 300, f == 1 ? Opacity::kLow : Opacity::kHigh));
  }
  const auto seqs = segment_actions(make_group(dets));
  ASSERT_EQ(seqs.size(), 1u);
  EXPECT_EQ(frames_of(seqs[0]), range(2, 7));
}

TEST(SegmentActions, SurplusTouchesOpenSequences) {
  std::vector<TouchDetection> dets;
  for (int f = 0; f <= 9; ++f) dets.push_back(touch(f, 100, 100));
  for (int f = 4; f <= 9; ++f) dets.push_back(touch(f, 900, 1500));
  const auto seqs = segment_actions(make_group(dets));
  ASSERT_EQ(seqs.size(), 2u);
  EXPECT_EQ(frames_of(seqs[1]), range(4, 9));
}

// Two fingers stepping toward each other. Whenever the nearer candidate wins
// by more than the tie tolerance it must be chosen.
TEST(SegmentActions, NearerCandidateAlwaysWinsOutsideTolerance) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 500; ++trial) {
    const double sep = 40 + 400 * u(rng);
    const double step = (sep / 2 - 9) * u(rng);
    const double y = 200 + 1000 * u(rng);
    std::vector<TouchDetection> dets;
    for (int f = 0; f < 6; ++f) {
      dets.push_back(touch(f, 300 + step * f / 5, y + (f % 2)));
      dets.push_back(touch(f, 300 + sep - step * f / 5, y - (f % 2)));
    }
    const auto seqs = segment_actions(make_group(dets));
    ASSERT_EQ(seqs.size(), 2u);
    for (const TouchSequence& s : seqs) {
      ASSERT_EQ(s.touches.size(), 6u);
      const bool left = s.touches.front().center().x < 300 + sep / 2;
      for (const TouchDetection& t : s.touches) {
        ASSERT_EQ(t.center().x < 300 + sep / 2, left) << "trial " << trial;
      }
    }
  }
}

TEST(SegmentActions, PartitionAndSuffixFadeOnRandomGroups) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<TouchDetection> dets;
    const int frames = 3 + static_cast<int>(rng() % 20);
    for (int f = 0; f < frames; ++f) {
      const int n = 1 + static_cast<int>(rng() % 4);
      for (int k = 0; k < n; ++k) {
        dets.push_back(touch(f, static_cast<double>(rng() % 1000) + 20,
                             static_cast<double>(rng() % 1800) + 20,
                             rng() % 4 == 0 ? Opacity::kLow : Opacity::kHigh));
      }
    }
    const FrameGroup group = make_group(dets);
    const auto seqs = segment_actions(group);
    std::vector<TouchDetection> remaining = group.detections;
    for (const TouchSequence& s : seqs) {
      ASSERT_GE(s.frame_span(), 3);
      ASSERT_TRUE(low_is_suffix(s));
      for (std::size_t i = 1; i < s.touches.size(); ++i) {
        ASSERT_EQ(s.touches[i].frame, s.touches[i - 1].frame + 1);
      }
      for (const TouchDetection& t : s.touches) {
        auto it = std::find(remaining.begin(), remaining.end(), t);
        ASSERT_NE(it, remaining.end()) << "touch used twice or invented";
        remaining.erase(it);
      }
    }
    // The leftovers are exactly the discarded detections: re-linking them is
    // not checked here, only that nothing was lost or duplicated.
    std::size_t used = 0;
    for (const TouchSequence& s : seqs) used += s.touches.size();
    ASSERT_EQ(used + remaining.size(), group.detections.size());
  }
}

TEST(SegmentTrace, ZeroNoiseRoundTripRecoversFingerPaths) {
  NoiseModel clean;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const GroundTruthScenario s = random_scenario(nexus5(), seed);
    const SynthesisResult r = synthesize_trace(s, clean);
    const auto seqs = segment_trace(filter_confidence(r.trace));
    std::vector<std::pair<int, int>> expected;
    std::size_t touch_total = 0;
    for (const GroundTruthAction& a : s.actions) {
      for (const FingerPath& p : a.paths) {
        expected.push_back({p.front().frame, p.back().frame + clean.fade_frames});
        touch_total += p.size() + static_cast<std::size_t>(clean.fade_frames);
      }
    }
    std::vector<std::pair<int, int>> got;
    std::size_t got_total = 0;
    for (const TouchSequence& q : seqs) {
      got.push_back({q.start_frame(), q.end_frame()});
      got_total += q.touches.size();
      ASSERT_TRUE(low_is_suffix(q));
      ASSERT_EQ(static_cast<int>(q.touches.size()) - static_cast<int>(q.high_count()),
                clean.fade_frames);
    }
    std::sort(expected.begin(), expected.end());
    std::sort(got.begin(), got.end());
    ASSERT_EQ(got, expected) << "seed " << seed;
    ASSERT_EQ(got_total, touch_total);
  }
}

}  // namespace
}  // namespace touchreplay
