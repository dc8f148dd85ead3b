#include "touchreplay/trace_model.h"

#include <algorithm>
#include <array>
#include <cmath>

#include "touchreplay/error.h"
#include "touchreplay/json_codec.h"

namespace touchreplay {

namespace {

using json_codec::Json;

struct BuiltinProfile {
  const char* name;
  int width;
  int height;
  int fps;
};

constexpr std::array<BuiltinProfile, 4> kBuiltinProfiles = {{
    {"nexus5", 1080, 1920, 30},
    {"pixel2", 1080, 1920, 30},
    {"pixel3a", 1080, 2220, 30},
    {"emulator", 1080, 1920, 30},
}};

void violation(const std::string& what) {
  throw Error(ErrorCode::kSchemaViolation, what);
}

// Clips |bbox| to the screen. Throws BoundsViolation if the box center is
// off-screen, since clipping would then invent a touch location.
BoundingBox clip_to_screen(const BoundingBox& bbox, const DeviceProfile& profile,
                           const std::string& path) {
  const Point c = bbox.center();
  if (c.x < 0 || c.y < 0 || c.x > profile.screen_width ||
      c.y > profile.screen_height) {
    throw Error(ErrorCode::kBoundsViolation,
                path + ".bbox: center (" + std::to_string(c.x) + ", " +
                    std::to_string(c.y) + ") lies outside the " +
                    std::to_string(profile.screen_width) + "x" +
                    std::to_string(profile.screen_height) + " screen");
  }
  const double x0 = std::max(0.0, bbox.x);
  const double y0 = std::max(0.0, bbox.y);
  const double x1 = std::min<double>(profile.screen_width, bbox.x + bbox.width);
  const double y1 = std::min<double>(profile.screen_height, bbox.y + bbox.height);
  return {x0, y0, x1 - x0, y1 - y0};
}

}  // namespace

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::string_view opacity_name(Opacity opacity) {
  return opacity == Opacity::kHigh ? "high" : "low";
}

void DeviceProfile::validate() const {
  if (screen_width <= 0) violation("device.width must be positive");
  if (screen_height <= 0) violation("device.height must be positive");
  if (fps < kMinFps) {
    violation("device.fps must be at least " + std::to_string(kMinFps) +
              ", got " + std::to_string(fps));
  }
  if (!(touch_slop > 0)) violation("device.touch_slop must be positive");
}

void DetectionTrace::validate() const {
  profile.validate();
  if (frame_count < 0) violation("frame_count must be non-negative");
  for (std::size_t i = 0; i < detections.size(); ++i) {
    const TouchDetection& d = detections[i];
    const std::string where = "detections[" + std::to_string(i) + "]";
    if (d.frame < 0) violation(where + ".frame is negative");
    if (d.frame >= frame_count) violation(where + ".frame is >= frame_count");
    if (i > 0 && detections[i - 1].frame > d.frame) {
      violation(where + " is out of frame order");
    }
    if (d.confidence < 0 || d.confidence > 1) {
      violation(where + ".confidence outside [0, 1]");
    }
    const BoundingBox& b = d.bbox;
    if (b.width < 0 || b.height < 0 || b.x < 0 || b.y < 0 ||
        b.x + b.width > profile.screen_width ||
        b.y + b.height > profile.screen_height) {
      throw Error(ErrorCode::kBoundsViolation, where + ".bbox outside screen");
    }
  }
}

DetectionTrace parse_trace(std::string_view json_text) {
  const Json doc = json_codec::parse_document(json_text);
  if (!doc.is_object()) json_codec::schema_error("$", "expected an object");

  const std::int64_t version = json_codec::get_int(doc, "schema_version", "$");
  if (version != kTraceSchemaVersion) {
    json_codec::schema_error("$.schema_version",
                             "unsupported version " + std::to_string(version));
  }

  DetectionTrace trace;
  trace.profile =
      json_codec::device_from_json(json_codec::require(doc, "device", "$"),
                                   "$.device");
  const std::int64_t frame_count = json_codec::get_int(doc, "frame_count", "$");
  if (frame_count < 0 || frame_count > INT32_MAX) {
    json_codec::schema_error("$.frame_count", "out of range");
  }
  trace.frame_count = static_cast<int>(frame_count);

  const Json& detections = json_codec::get_array(doc, "detections", "$");
  trace.detections.reserve(detections.size());
  for (std::size_t i = 0; i < detections.size(); ++i) {
    const std::string path = "$.detections[" + std::to_string(i) + "]";
    TouchDetection d = json_codec::detection_from_json(detections[i], path);
    if (d.frame >= trace.frame_count) {
      json_codec::schema_error(path + ".frame", "must be < frame_count");
    }
    d.bbox = clip_to_screen(d.bbox, trace.profile, path);
    trace.detections.push_back(d);
  }
  std::stable_sort(trace.detections.begin(), trace.detections.end(),
                   [](const TouchDetection& a, const TouchDetection& b) {
                     return a.frame < b.frame;
                   });
  return trace;
}

std::string serialize_trace(const DetectionTrace& trace) {
  Json detections = Json::array();
  for (const TouchDetection& d : trace.detections) {
    detections.push_back(json_codec::detection_to_json(d));
  }
  Json doc{{"schema_version", kTraceSchemaVersion},
           {"device", json_codec::device_to_json(trace.profile)},
           {"frame_count", trace.frame_count},
           {"detections", std::move(detections)}};
  return doc.dump(2) + "\n";
}

double frame_time_ms(std::int64_t frame, int fps) {
  return static_cast<double>(frame) * 1000.0 / static_cast<double>(fps);
}

std::int64_t frame_time_us(std::int64_t frame, int fps) {
  // Integer half-up rounding of frame * 1e6 / fps.
  return (frame * 2'000'000 + fps) / (2 * static_cast<std::int64_t>(fps));
}

bool find_builtin_profile(std::string_view name, DeviceProfile* out) {
  for (const BuiltinProfile& p : kBuiltinProfiles) {
    if (name == p.name) {
      *out = DeviceProfile{p.name, p.width, p.height, p.fps, kDefaultTouchSlop};
      return true;
    }
  }
  return false;
}

std::vector<std::string> builtin_profile_names() {
  std::vector<std::string> names;
  for (const BuiltinProfile& p : kBuiltinProfiles) names.emplace_back(p.name);
  return names;
}

}  // namespace touchreplay
