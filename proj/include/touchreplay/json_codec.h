#ifndef TOUCHREPLAY_JSON_CODEC_H_
#define TOUCHREPLAY_JSON_CODEC_H_

// JSON helpers shared by the file formats (detection traces, scenario
// fixtures, classified scenarios, reports, config). Field errors are reported
// as Error(kSchemaViolation) with a JSON-path style location.

#include <string>
#include <string_view>

#include "json.hpp"
#include "touchreplay/trace_model.h"

namespace touchreplay::json_codec {

using Json = nlohmann::json;

// Throws Error(kMalformedJson) on syntax errors.
Json parse_document(std::string_view text);

const Json& require(const Json& object, const char* key,
                    const std::string& path);
std::int64_t get_int(const Json& object, const char* key,
                     const std::string& path);
double get_number(const Json& object, const char* key,
                  const std::string& path);
std::string get_string(const Json& object, const char* key,
                       const std::string& path);
const Json& get_array(const Json& object, const char* key,
                      const std::string& path);
std::int64_t as_int(const Json& value, const std::string& path);
double as_number(const Json& value, const std::string& path);

[[noreturn]] void schema_error(const std::string& path,
                               const std::string& what);

Json device_to_json(const DeviceProfile& profile);
DeviceProfile device_from_json(const Json& value, const std::string& path);

Json detection_to_json(const TouchDetection& detection);
// Range checks only; screen-bounds handling is the caller's business.
TouchDetection detection_from_json(const Json& value, const std::string& path);

Opacity opacity_from_string(const std::string& text, const std::string& path);

}  // namespace touchreplay::json_codec

#endif  // TOUCHREPLAY_JSON_CODEC_H_
