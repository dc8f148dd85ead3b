#include "touchreplay/config.h"

#include <cstdlib>

#include "touchreplay/error.h"
#include "touchreplay/file_io.h"
#include "touchreplay/json_codec.h"

namespace touchreplay {

namespace {

using json_codec::Json;

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorCode::kConfigError, what);
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const std::string& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

template <typename T>
T typed(const Json& value, const std::string& key) {
  try {
    return value.get<T>();
  } catch (const Json::exception&) {
    config_error("config key '" + key + "' has the wrong type");
  }
}

}  // namespace

void merge_config_json(std::string_view json_text, Config* config) {
  const Json doc = json_codec::parse_document(json_text);
  if (!doc.is_object()) config_error("config file must hold a JSON object");
  for (const auto& [key, value] : doc.items()) {
    if (key == "inputs") {
      config->inputs = typed<std::vector<std::string>>(value, key);
    } else if (key == "profile") {
      config->profile = typed<std::string>(value, key);
    } else if (key == "bridge_path") {
      config->bridge_path = typed<std::string>(value, key);
    } else if (key == "device_serial") {
      config->device_serial = typed<std::string>(value, key);
    } else if (key == "agent_path") {
      config->agent_path = typed<std::string>(value, key);
    } else if (key == "device_node") {
      config->device_node = typed<std::string>(value, key);
    } else if (key == "noise_preset") {
      config->noise_preset = typed<std::string>(value, key);
    } else if (key == "seed") {
      config->seed = typed<std::uint64_t>(value, key);
    } else if (key == "output_dir") {
      config->output_dir = typed<std::string>(value, key);
    } else if (key == "extended_alphabet") {
      config->extended_alphabet = typed<bool>(value, key);
    } else if (key == "duration_tap_cutoff") {
      config->duration_tap_cutoff = typed<bool>(value, key);
    } else if (key == "min_confidence") {
      config->min_confidence = typed<double>(value, key);
      if (config->min_confidence < 0 || config->min_confidence > 1) {
        config_error("config key 'min_confidence' must lie in [0, 1]");
      }
    } else if (key == "jobs") {
      config->jobs = typed<int>(value, key);
    } else {
      config_error("unknown config key '" + key + "'");
    }
  }
}

void merge_config_file(const std::string& path, Config* config) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const Error& e) {
    config_error(std::string("config file: ") + e.what());
  }
  merge_config_json(text, config);
}

void merge_environment(Config* config,
                       const std::function<std::optional<std::string>(const char*)>& lookup) {
  auto get = [&](const char* name) -> std::optional<std::string> {
    if (lookup) return lookup(name);
    const char* v = std::getenv(name);
    if (v == nullptr || *v == '\0') return std::nullopt;
    return std::string(v);
  };
  if (auto v = get(kBridgeEnvVar)) config->bridge_path = *v;
  if (auto v = get(kOutputDirEnvVar)) config->output_dir = *v;
}

DeviceProfile resolve_profile(const Config& config) {
  DeviceProfile profile;
  if (!find_builtin_profile(config.profile, &profile)) {
    config_error("unknown device profile '" + config.profile +
                 "' (known: " + join(builtin_profile_names()) + ")");
  }
  return profile;
}

NoiseModel resolve_noise(const Config& config) {
  NoiseModel noise;
  if (!find_noise_preset(config.noise_preset, &noise)) {
    config_error("unknown noise preset '" + config.noise_preset +
                 "' (known: " + join(noise_preset_names()) + ")");
  }
  noise.rng_seed = config.seed;
  return noise;
}

}  // namespace touchreplay
