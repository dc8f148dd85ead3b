#ifndef TOUCHREPLAY_TRACE_MODEL_H_
#define TOUCHREPLAY_TRACE_MODEL_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace touchreplay {

// Lowest recording rate the pipeline accepts; quick flings are not resolvable
// below it.
inline constexpr int kMinFps = 30;
inline constexpr double kDefaultTouchSlop = 8.0;
inline constexpr int kTraceSchemaVersion = 1;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double distance(Point a, Point b);

struct BoundingBox {
  double x = 0.0;
  double y = 0.0;
  double width = 0.0;
  double height = 0.0;

  // The canonical touch coordinate. Everything downstream of ingestion uses
  // this and never the raw box.
  Point center() const { return {x + width / 2.0, y + height / 2.0}; }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

enum class Opacity { kHigh, kLow };

std::string_view opacity_name(Opacity opacity);

struct DeviceProfile {
  std::string name;
  int screen_width = 0;
  int screen_height = 0;
  int fps = kMinFps;
  double touch_slop = kDefaultTouchSlop;

  // Throws Error(kSchemaViolation) naming the offending field.
  void validate() const;

  friend bool operator==(const DeviceProfile&, const DeviceProfile&) = default;
};

struct TouchDetection {
  int frame = 0;
  BoundingBox bbox;
  double confidence = 1.0;
  Opacity opacity = Opacity::kHigh;

  Point center() const { return bbox.center(); }
  bool is_high() const { return opacity == Opacity::kHigh; }

  friend bool operator==(const TouchDetection&,
                         const TouchDetection&) = default;
};

struct DetectionTrace {
  DeviceProfile profile;
  // Sorted by frame; several detections may share a frame.
  std::vector<TouchDetection> detections;
  int frame_count = 0;

  void validate() const;

  friend bool operator==(const DetectionTrace&,
                         const DetectionTrace&) = default;
};

// Parses the detection JSON document. Boxes that overhang the screen edge are
// clipped to it; boxes whose center is off-screen are rejected. The result is
// sorted by frame (stable for detections sharing a frame).
DetectionTrace parse_trace(std::string_view json_text);

std::string serialize_trace(const DetectionTrace& trace);

// Offset of |frame| from frame 0 at |fps|, exact up to double precision.
double frame_time_ms(std::int64_t frame, int fps);

// Same, in integer microseconds rounded half-up. Only meaningful for
// frame >= 0.
std::int64_t frame_time_us(std::int64_t frame, int fps);

// Built-in device profiles selectable by name ("nexus5", "pixel2", ...).
// Returns false if |name| is unknown.
bool find_builtin_profile(std::string_view name, DeviceProfile* out);
std::vector<std::string> builtin_profile_names();

}  // namespace touchreplay

#endif  // TOUCHREPLAY_TRACE_MODEL_H_
