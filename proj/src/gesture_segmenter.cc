#include "touchreplay/gesture_segmenter.h"

#include <algorithm>
#include <limits>
#include <tuple>

namespace touchreplay {

namespace {

struct Link {
  std::size_t sequence;  // index into the open list
  std::size_t touch;     // index into the frame's touches
  double distance;
};

// Lower is preferred. A Low touch ends whatever trajectory reaches it; a High
// touch should not resume a sequence that has already started fading.
int opacity_rank(const TouchDetection& previous, const TouchDetection& next) {
  if (!next.is_high()) return 0;
  return previous.is_high() ? 1 : 2;
}

bool touch_order(const TouchDetection& a, const TouchDetection& b) {
  return std::tie(a.bbox.x, a.bbox.y) < std::tie(b.bbox.x, b.bbox.y);
}

// Links |touches| (one frame) onto the open sequences. Returns, for every open
// sequence, the index of the touch it took or npos.
std::vector<std::size_t> match_frame(
    const std::vector<TouchSequence>& sequences,
    const std::vector<std::size_t>& open,
    const std::vector<TouchDetection>& touches, double tie_tolerance) {
  constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> taken(open.size(), npos);
  std::vector<bool> touch_used(touches.size(), false);

  std::vector<Link> links;
  links.reserve(open.size() * touches.size());
  for (std::size_t s = 0; s < open.size(); ++s) {
    const Point from = sequences[open[s]].touches.back().center();
    for (std::size_t t = 0; t < touches.size(); ++t) {
      links.push_back({s, t, distance(from, touches[t].center())});
    }
  }
  std::stable_sort(links.begin(), links.end(),
                   [](const Link& a, const Link& b) { return a.distance < b.distance; });

  auto preference = [&](const Link& l) {
    const TouchSequence& seq = sequences[open[l.sequence]];
    const TouchDetection& prev = seq.touches.back();
    const TouchDetection& next = touches[l.touch];
    // Among equally distant candidates a fading touch belongs to the sequence
    // that has been running longest.
    const int age = next.is_high() ? 0 : seq.start_frame();
    return std::make_tuple(opacity_rank(prev, next), age, next.bbox.x,
                           next.bbox.y, prev.bbox.x, prev.bbox.y, l.sequence);
  };

  auto available = [&](const Link& l) {
    return taken[l.sequence] == npos && !touch_used[l.touch];
  };

  while (true) {
    auto closest = std::find_if(links.begin(), links.end(), available);
    if (closest == links.end()) break;
    // Candidates competing with the closest link for its sequence or its
    // touch at a similar distance.
    const Link* best = &*closest;
    auto best_key = preference(*best);
    for (auto it = closest; it != links.end(); ++it) {
      if (it->distance - closest->distance >= tie_tolerance) break;
      if (!available(*it)) continue;
      if (it->sequence != closest->sequence && it->touch != closest->touch) {
        continue;
      }
      auto key = preference(*it);
      if (key < best_key) {
        best = &*it;
        best_key = key;
      }
    }
    taken[best->sequence] = best->touch;
    touch_used[best->touch] = true;
  }
  return taken;
}

// Cuts a linked sequence wherever a High touch follows a Low one; the Low run
// closes the earlier piece.
void split_at_fades(TouchSequence sequence, std::vector<TouchSequence>* out) {
  TouchSequence piece;
  for (const TouchDetection& touch : sequence.touches) {
    if (!piece.touches.empty() && touch.is_high() &&
        !piece.touches.back().is_high()) {
      out->push_back(std::move(piece));
      piece = TouchSequence{};
    }
    piece.touches.push_back(touch);
  }
  if (!piece.touches.empty()) out->push_back(std::move(piece));
}

}  // namespace

std::size_t TouchSequence::high_count() const {
  return static_cast<std::size_t>(std::count_if(
      touches.begin(), touches.end(),
      [](const TouchDetection& t) { return t.is_high(); }));
}

int TouchSequence::last_high_frame() const {
  for (auto it = touches.rbegin(); it != touches.rend(); ++it) {
    if (it->is_high()) return it->frame;
  }
  return start_frame() - 1;
}

DetectionTrace filter_confidence(const DetectionTrace& trace,
                                 double min_confidence) {
  DetectionTrace out;
  out.profile = trace.profile;
  out.frame_count = trace.frame_count;
  std::copy_if(trace.detections.begin(), trace.detections.end(),
               std::back_inserter(out.detections),
               [&](const TouchDetection& d) { return d.confidence >= min_confidence; });
  return out;
}

std::vector<FrameGroup> group_consecutive(const DetectionTrace& trace,
                                          int max_discard_frames) {
  std::vector<FrameGroup> groups;
  FrameGroup current;
  auto flush = [&] {
    if (!current.detections.empty() &&
        current.frame_span() > max_discard_frames) {
      groups.push_back(std::move(current));
    }
    current = FrameGroup{};
  };
  for (const TouchDetection& d : trace.detections) {
    if (!current.detections.empty() && d.frame > current.last_frame + 1) {
      flush();
    }
    if (current.detections.empty()) current.first_frame = d.frame;
    current.last_frame = d.frame;
    current.detections.push_back(d);
  }
  flush();
  return groups;
}

std::vector<TouchSequence> segment_actions(const FrameGroup& group,
                                           const SegmenterOptions& options) {
  std::vector<TouchSequence> linked;
  if (group.detections.empty()) return linked;

  std::vector<std::vector<TouchDetection>> frames(
      static_cast<std::size_t>(group.frame_span()));
  for (const TouchDetection& d : group.detections) {
    frames[static_cast<std::size_t>(d.frame - group.first_frame)].push_back(d);
  }

  std::vector<std::size_t> open;  // indices into |linked|
  for (std::vector<TouchDetection>& touches : frames) {
    std::stable_sort(touches.begin(), touches.end(), touch_order);
    std::vector<std::size_t> next_open;
    std::vector<bool> used(touches.size(), false);
    if (!open.empty()) {
      const std::vector<std::size_t> taken =
          match_frame(linked, open, touches, options.tie_tolerance);
      for (std::size_t s = 0; s < open.size(); ++s) {
        if (taken[s] >= touches.size()) continue;  // finger lifted
        linked[open[s]].touches.push_back(touches[taken[s]]);
        used[taken[s]] = true;
        next_open.push_back(open[s]);
      }
    }
    for (std::size_t t = 0; t < touches.size(); ++t) {
      if (used[t]) continue;
      linked.push_back(TouchSequence{{touches[t]}});
      next_open.push_back(linked.size() - 1);
    }
    open = std::move(next_open);
  }

  std::vector<TouchSequence> pieces;
  for (TouchSequence& seq : linked) split_at_fades(std::move(seq), &pieces);

  std::vector<TouchSequence> out;
  for (TouchSequence& piece : pieces) {
    if (piece.frame_span() > options.max_discard_frames) {
      out.push_back(std::move(piece));
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const TouchSequence& a, const TouchSequence& b) {
                     return a.start_frame() < b.start_frame();
                   });
  return out;
}

std::vector<TouchSequence> segment_trace(const DetectionTrace& filtered_trace,
                                         const SegmenterOptions& options) {
  std::vector<TouchSequence> out;
  for (const FrameGroup& group :
       group_consecutive(filtered_trace, options.max_discard_frames)) {
    std::vector<TouchSequence> sequences = segment_actions(group, options);
    std::move(sequences.begin(), sequences.end(), std::back_inserter(out));
  }
  return out;
}

}  // namespace touchreplay
