#include "touchreplay/json_codec.h"

#include <cmath>

#include "touchreplay/error.h"

namespace touchreplay::json_codec {

Json parse_document(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kMalformedJson, e.what());
  }
}

void schema_error(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::kSchemaViolation, path + ": " + what);
}

const Json& require(const Json& object, const char* key,
                    const std::string& path) {
  if (!object.is_object()) schema_error(path, "expected an object");
  auto it = object.find(key);
  if (it == object.end()) schema_error(path, std::string("missing field '") + key + "'");
  return *it;
}

std::int64_t as_int(const Json& value, const std::string& path) {
  if (value.is_number_integer()) return value.get<std::int64_t>();
  if (value.is_number_float()) {
    double v = value.get<double>();
    if (std::isfinite(v) && std::floor(v) == v) return static_cast<std::int64_t>(v);
  }
  schema_error(path, "expected an integer");
}

double as_number(const Json& value, const std::string& path) {
  if (!value.is_number()) schema_error(path, "expected a number");
  double v = value.get<double>();
  if (!std::isfinite(v)) schema_error(path, "expected a finite number");
  return v;
}

std::int64_t get_int(const Json& object, const char* key,
                     const std::string& path) {
  return as_int(require(object, key, path), path + "." + key);
}

double get_number(const Json& object, const char* key,
                  const std::string& path) {
  return as_number(require(object, key, path), path + "." + key);
}

std::string get_string(const Json& object, const char* key,
                       const std::string& path) {
  const Json& v = require(object, key, path);
  if (!v.is_string()) schema_error(path + "." + key, "expected a string");
  return v.get<std::string>();
}

const Json& get_array(const Json& object, const char* key,
                      const std::string& path) {
  const Json& v = require(object, key, path);
  if (!v.is_array()) schema_error(path + "." + key, "expected an array");
  return v;
}

Json device_to_json(const DeviceProfile& profile) {
  return Json{{"name", profile.name},
              {"width", profile.screen_width},
              {"height", profile.screen_height},
              {"fps", profile.fps},
              {"touch_slop", profile.touch_slop}};
}

DeviceProfile device_from_json(const Json& value, const std::string& path) {
  DeviceProfile profile;
  profile.name = get_string(value, "name", path);
  profile.screen_width = static_cast<int>(get_int(value, "width", path));
  profile.screen_height = static_cast<int>(get_int(value, "height", path));
  profile.fps = static_cast<int>(get_int(value, "fps", path));
  if (value.contains("touch_slop")) {
    profile.touch_slop = get_number(value, "touch_slop", path);
  }
  try {
    profile.validate();
  } catch (const Error& e) {
    schema_error(path, e.what());
  }
  return profile;
}

Opacity opacity_from_string(const std::string& text, const std::string& path) {
  if (text == "high") return Opacity::kHigh;
  if (text == "low") return Opacity::kLow;
  schema_error(path, "opacity must be \"high\" or \"low\", got \"" + text + "\"");
}

Json detection_to_json(const TouchDetection& d) {
  return Json{{"frame", d.frame},
              {"bbox", {d.bbox.x, d.bbox.y, d.bbox.width, d.bbox.height}},
              {"confidence", d.confidence},
              {"opacity", std::string(opacity_name(d.opacity))}};
}

TouchDetection detection_from_json(const Json& value, const std::string& path) {
  TouchDetection d;
  std::int64_t frame = get_int(value, "frame", path);
  if (frame < 0) schema_error(path + ".frame", "negative frame index");
  if (frame > INT32_MAX) schema_error(path + ".frame", "frame index too large");
  d.frame = static_cast<int>(frame);

  const Json& bbox = get_array(value, "bbox", path);
  if (bbox.size() != 4) schema_error(path + ".bbox", "expected [x, y, w, h]");
  d.bbox.x = as_number(bbox[0], path + ".bbox[0]");
  d.bbox.y = as_number(bbox[1], path + ".bbox[1]");
  d.bbox.width = as_number(bbox[2], path + ".bbox[2]");
  d.bbox.height = as_number(bbox[3], path + ".bbox[3]");
  if (d.bbox.width < 0 || d.bbox.height < 0) {
    schema_error(path + ".bbox", "negative box size");
  }

  d.confidence = get_number(value, "confidence", path);
  if (d.confidence < 0.0 || d.confidence > 1.0) {
    schema_error(path + ".confidence", "must lie in [0, 1]");
  }
  d.opacity = opacity_from_string(get_string(value, "opacity", path),
                                  path + ".opacity");
  return d;
}

}  // namespace touchreplay::json_codec
