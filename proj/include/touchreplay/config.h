#ifndef TOUCHREPLAY_CONFIG_H_
#define TOUCHREPLAY_CONFIG_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "touchreplay/script_codegen.h"
#include "touchreplay/trace_model.h"
#include "touchreplay/trace_synth.h"

namespace touchreplay {

inline constexpr char kBridgeEnvVar[] = "TOUCHREPLAY_ADB";
inline constexpr char kOutputDirEnvVar[] = "TOUCHREPLAY_OUT";

// Settings shared by the command-line tools. Resolution order is command-line
// flags, then environment, then the config file, then these defaults.
struct Config {
  std::vector<std::string> inputs;
  std::string profile = "nexus5";
  std::string bridge_path = "adb";
  std::string device_serial;
  std::string agent_path;
  std::string device_node = kDefaultDeviceNode;
  std::string noise_preset = "clean";
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  bool extended_alphabet = false;
  bool duration_tap_cutoff = false;
  double min_confidence = 0.7;
  int jobs = 0;  // 0 = one per hardware thread
};

// Merges the JSON config file at |path| over |config|. Unknown keys are
// rejected so typos surface. Throws Error(kConfigError) or
// Error(kMalformedJson).
void merge_config_file(const std::string& path, Config* config);
void merge_config_json(std::string_view json_text, Config* config);

// Applies TOUCHREPLAY_ADB and TOUCHREPLAY_OUT. |lookup| defaults to getenv.
void merge_environment(Config* config,
                       const std::function<std::optional<std::string>(const char*)>& lookup = {});

// Resolves the profile name against the built-in table. Throws
// Error(kConfigError) listing the known names.
DeviceProfile resolve_profile(const Config& config);
NoiseModel resolve_noise(const Config& config);

}  // namespace touchreplay

#endif  // TOUCHREPLAY_CONFIG_H_
