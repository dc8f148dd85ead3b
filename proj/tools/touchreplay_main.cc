// Command-line front end: classify, generate, replay, synthesize, evaluate and
// pipeline subcommands over the touchreplay library.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "touchreplay/action_classifier.h"
#include "touchreplay/config.h"
#include "touchreplay/error.h"
#include "touchreplay/eval_harness.h"
#include "touchreplay/file_io.h"
#include "touchreplay/parallel.h"
#include "touchreplay/replay_driver.h"
#include "touchreplay/script_codegen.h"
#include "touchreplay/trace_synth.h"

namespace fs = std::filesystem;
using namespace touchreplay;

namespace {

// Artifact names inside the output directory.
constexpr char kTraceFile[] = "trace.json";
constexpr char kGroundTruthFile[] = "ground_truth.json";
constexpr char kTruthFile[] = "truth.txt";
constexpr char kScenarioFile[] = "scenario.json";
constexpr char kPredictedFile[] = "predicted.txt";
constexpr char kScriptLogFile[] = "script.log";
constexpr char kScriptBinFile[] = "script.bin";
constexpr char kReportJsonFile[] = "report.json";
constexpr char kReportTextFile[] = "report.txt";
constexpr char kReplayFile[] = "replay.json";

// An error tagged with the pipeline stage it came from.
struct StageError {
  std::string stage;
  Error error;
};

template <typename Fn>
auto in_stage(const std::string& stage, Fn fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw StageError{stage, e};
  }
}

[[noreturn]] void config_error(const std::string& what) {
  throw Error(ErrorCode::kConfigError, what);
}

void require_file(const std::string& path, const std::string& what) {
  if (path.empty()) config_error("no " + what + " given");
  if (!fs::is_regular_file(path)) config_error(what + " not found: " + path);
}

std::string out_path(const Config& config, const std::string& name) {
  return (fs::path(config.output_dir) / name).string();
}

void ensure_output_dir(const Config& config) {
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIoError,
                "cannot create output directory " + config.output_dir + ": " + ec.message());
  }
}

// Scenario id of a trace file: its name without ".json" and ".trace".
std::string scenario_id(const std::string& path) {
  std::string stem = fs::path(path).stem().string();
  constexpr std::string_view kTraceSuffix = ".trace";
  if (stem.size() > kTraceSuffix.size() && stem.ends_with(kTraceSuffix)) {
    stem.resize(stem.size() - kTraceSuffix.size());
  }
  return stem;
}

ClassifierOptions classifier_options(const Config& config) {
  ClassifierOptions options;
  options.min_confidence = config.min_confidence;
  options.duration_based_tap_cutoff = config.duration_tap_cutoff;
  return options;
}

struct Classified {
  std::string id;
  ClassifiedScenario scenario;
};

// Classifies every input trace on the worker pool. With one input the
// scenario goes to scenario.json; with several, to <id>.scenario.json.
std::vector<Classified> run_classify(const Config& config, const std::vector<std::string>& inputs) {
  if (inputs.empty()) config_error("classify needs at least one trace file");
  for (const std::string& path : inputs) require_file(path, "trace file");
  ensure_output_dir(config);
  const ClassifierOptions options = classifier_options(config);

  std::vector<Classified> results = in_stage("classify", [&] {
    return parallel_map(
        inputs,
        [&](const std::string& path) {
          try {
            return Classified{scenario_id(path), classify_trace(parse_trace(read_file(path)), options)};
          } catch (const Error& e) {
            throw Error(e.code(), path + ": " + e.what());
          }
        },
        config.jobs);
  });

  std::string predicted;
  for (const Classified& c : results) {
    const std::string name =
        results.size() == 1 ? std::string(kScenarioFile) : c.id + "." + kScenarioFile;
    write_file(out_path(config, name), serialize_scenario(c.scenario));
    predicted += format_sequence_line(c.id, scenario_symbols(c.scenario, config.extended_alphabet));
  }
  write_file(out_path(config, kPredictedFile), predicted);
  std::cout << predicted;
  return results;
}

SendEventScript run_generate(const Config& config, const ClassifiedScenario& scenario) {
  ensure_output_dir(config);
  ScriptOptions options;
  options.device_node = config.device_node;
  const SendEventScript script = in_stage("generate", [&] {
    SendEventScript s = assemble_script(scenario, options);
    const std::vector<std::string> problems = validate_script(s);
    if (!problems.empty()) {
      throw Error(ErrorCode::kInvalidScript, "generated script is malformed: " + problems.front());
    }
    return s;
  });
  write_file(out_path(config, kScriptLogFile), serialize_script(script));
  write_file(out_path(config, kScriptBinFile), translate_runnable(script));
  std::cout << "wrote " << script.events.size() << " events to "
            << out_path(config, kScriptLogFile) << " and " << out_path(config, kScriptBinFile)
            << "\n";
  return script;
}

nlohmann::json replay_to_json(const ReplayReport& report, bool dry_run) {
  nlohmann::json calls = nlohmann::json::array();
  for (const TransportCall& call : report.transcript) {
    calls.push_back({{"kind", call.kind == TransportCall::Kind::kPush ? "push" : "exec"},
                     {"target", call.target},
                     {"bytes", call.bytes}});
  }
  return {{"dry_run", dry_run},
          {"exit_code", report.exit_code},
          {"duration_ms", report.duration_ms},
          {"output", report.output},
          {"transcript", std::move(calls)}};
}

void run_replay(const Config& config, const std::string& script_path, bool dry_run) {
  require_file(script_path, "runnable script");
  require_file(config.agent_path, "replay agent (set agent_path or --agent)");
  ensure_output_dir(config);
  const std::string bytes = read_file(script_path);
  ReplayConfig replay;
  replay.agent_path = config.agent_path;

  ReplayReport report;
  if (dry_run) {
    MockTransport mock;
    report = in_stage("replay", [&] { return push_and_replay(bytes, mock, replay); });
  } else {
    BridgeTransport bridge(config.bridge_path, config.device_serial);
    report = in_stage("replay", [&] { return push_and_replay(bytes, bridge, replay); });
  }
  write_file(out_path(config, kReplayFile), replay_to_json(report, dry_run).dump(2) + "\n");
  for (const TransportCall& call : report.transcript) {
    std::cout << (dry_run ? "[dry-run] " : "")
              << (call.kind == TransportCall::Kind::kPush ? "push " : "exec ") << call.target
              << "\n";
  }
  if (!report.output.empty()) std::cout << report.output;
}

struct SynthesizeArgs {
  std::string scenario_path;
  std::optional<std::uint64_t> random_seed;
  int count = 1;
  std::string id = "trace";
};

void run_synthesize(const Config& config, const SynthesizeArgs& args) {
  if (args.scenario_path.empty() == !args.random_seed.has_value()) {
    config_error("synthesize needs exactly one of --scenario or --random");
  }
  if (args.count < 1) config_error("--count must be at least 1");
  if (!args.scenario_path.empty()) require_file(args.scenario_path, "scenario file");
  ensure_output_dir(config);
  const DeviceProfile profile = resolve_profile(config);
  const NoiseModel base_noise = resolve_noise(config);

  std::vector<int> indices(static_cast<std::size_t>(args.count));
  for (int i = 0; i < args.count; ++i) indices[static_cast<std::size_t>(i)] = i;

  struct Output {
    std::string id;
    GroundTruthScenario scenario;
    SynthesisResult result;
  };
  const std::vector<Output> outputs = in_stage("synthesize", [&] {
    return parallel_map(
        indices,
        [&](int i) {
          Output out;
          out.id = args.count == 1 ? args.id : args.id + "_" + std::to_string(i);
          out.scenario = args.random_seed
                             ? random_scenario(profile, *args.random_seed + static_cast<std::uint64_t>(i))
                             : parse_ground_truth(read_file(args.scenario_path));
          NoiseModel noise = base_noise;
          noise.rng_seed += static_cast<std::uint64_t>(i);
          out.result = synthesize_trace(out.scenario, noise, config.extended_alphabet);
          return out;
        },
        config.jobs);
  });

  std::string truth;
  for (const Output& o : outputs) {
    const bool single = outputs.size() == 1;
    write_file(out_path(config, single ? kTraceFile : o.id + ".trace.json"),
               serialize_trace(o.result.trace));
    if (args.random_seed) {
      write_file(out_path(config, single ? kGroundTruthFile : o.id + ".ground_truth.json"),
                 serialize_ground_truth(o.scenario));
    }
    truth += format_sequence_line(o.id, o.result.truth);
  }
  write_file(out_path(config, kTruthFile), truth);
  std::cout << truth;
}

void run_evaluate(const Config& config, const std::string& predicted_path,
                  const std::string& truth_path) {
  require_file(predicted_path, "predicted sequence file");
  require_file(truth_path, "ground-truth sequence file");
  ensure_output_dir(config);
  const BatchReport report = in_stage("evaluate", [&] {
    const auto predicted = parse_sequence_file(read_file(predicted_path));
    const auto truth = parse_sequence_file(read_file(truth_path));
    return evaluate_batch(pair_by_id(predicted, truth));
  });
  write_file(out_path(config, kReportJsonFile), report_to_json(report));
  const std::string table = report_to_table(report);
  write_file(out_path(config, kReportTextFile), table);
  std::cout << table;
}

// CLI11 binds flags to these; only flags actually given override the config.
struct Overrides {
  std::string profile;
  std::string output_dir;
  std::string bridge_path;
  std::string device_serial;
  std::string agent_path;
  std::string device_node;
  std::string noise_preset;
  std::uint64_t seed = 0;
  double min_confidence = 0;
  int jobs = 0;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"touchreplay: turn touch-detection traces from screen recordings into "
               "replayable input-event scripts"};
  app.set_version_flag("--version", "touchreplay 1.0.0");
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  Overrides flags;
  bool extended = false;
  bool duration_cutoff = false;
  app.add_option("--config", config_path, "JSON config file (see docs/config.md)");
  auto* profile_opt = app.add_option("--profile", flags.profile,
                                     "device profile: nexus5, pixel2, pixel3a, emulator");
  auto* out_opt = app.add_option("-o,--out", flags.output_dir,
                                 "output directory (env " + std::string(kOutputDirEnvVar) + ")");
  auto* jobs_opt = app.add_option("-j,--jobs", flags.jobs, "worker threads for batch inputs");
  auto* extended_opt =
      app.add_flag("--extended", extended, "write multi-finger actions as G2..G10");
  auto* cutoff_opt = app.add_flag("--duration-tap-cutoff", duration_cutoff,
                                  "use a 667 ms Tap cutoff instead of 20 frames");
  auto* conf_opt = app.add_option("--min-confidence", flags.min_confidence,
                                  "detection confidence filter (default 0.7)")
                       ->check(CLI::Range(0.0, 1.0));

  std::vector<std::string> classify_inputs;
  auto* classify = app.add_subcommand("classify", "trace JSON -> scenario.json + predicted.txt");
  classify->add_option("traces", classify_inputs, "detection trace files");

  std::string generate_input;
  auto* generate = app.add_subcommand("generate", "scenario.json -> script.log + script.bin");
  generate->add_option("--scenario", generate_input, "classified scenario (default <out>/scenario.json)");
  auto* node_opt = generate->add_option("--device-node", flags.device_node,
                                        "input device node written into the log");

  std::string replay_input;
  bool replay_dry_run = false;
  auto* replay = app.add_subcommand("replay", "push script.bin and the agent to a device and run it");
  replay->add_option("--script", replay_input, "runnable script (default <out>/script.bin)");
  auto* agent_opt = replay->add_option("--agent", flags.agent_path, "local replay agent binary");
  auto* bridge_opt = replay->add_option(
      "--bridge", flags.bridge_path, "debug-bridge binary (env " + std::string(kBridgeEnvVar) + ")");
  auto* serial_opt = replay->add_option("--device", flags.device_serial, "device serial");
  replay->add_flag("--dry-run", replay_dry_run, "use an in-memory transport");

  SynthesizeArgs synth_args;
  std::uint64_t random_seed = 0;
  auto* synthesize = app.add_subcommand("synthesize", "ground truth -> trace.json + truth.txt");
  synthesize->add_option("--scenario", synth_args.scenario_path, "ground-truth scenario JSON");
  auto* random_opt =
      synthesize->add_option("--random", random_seed, "generate a random scenario from this seed");
  synthesize->add_option("--count", synth_args.count, "number of random scenarios (seeds random..)");
  synthesize->add_option("--id", synth_args.id, "scenario id written to truth.txt");
  auto* noise_opt = synthesize->add_option("--noise", flags.noise_preset,
                                           "noise preset: clean, physical-device, emulator");
  auto* seed_opt = synthesize->add_option("--seed", flags.seed, "noise RNG seed");

  std::string predicted_input;
  std::string truth_input;
  auto* evaluate = app.add_subcommand("evaluate", "predicted.txt + truth.txt -> report.json/.txt");
  evaluate->add_option("--predicted", predicted_input, "predicted sequences (default <out>/predicted.txt)");
  evaluate->add_option("--truth", truth_input, "ground-truth sequences (default <out>/truth.txt)");

  std::vector<std::string> pipeline_inputs;
  std::string pipeline_serial;
  bool pipeline_dry_run = false;
  auto* pipeline = app.add_subcommand("pipeline", "classify -> generate (-> replay with --device)");
  pipeline->add_option("traces", pipeline_inputs, "detection trace file");
  auto* pipeline_serial_opt =
      pipeline->add_option("--device", pipeline_serial, "replay on this device serial");
  auto* pipeline_agent_opt = pipeline->add_option("--agent", flags.agent_path, "replay agent");
  pipeline->add_flag("--dry-run", pipeline_dry_run, "never touch a device");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  std::string stage = "config";
  try {
    Config config;
    if (!config_path.empty()) merge_config_file(config_path, &config);
    merge_environment(&config);
    if (*profile_opt) config.profile = flags.profile;
    if (*out_opt) config.output_dir = flags.output_dir;
    if (*jobs_opt) config.jobs = flags.jobs;
    if (*extended_opt) config.extended_alphabet = extended;
    if (*cutoff_opt) config.duration_tap_cutoff = duration_cutoff;
    if (*conf_opt) config.min_confidence = flags.min_confidence;
    if (*node_opt) config.device_node = flags.device_node;
    if (*agent_opt || *pipeline_agent_opt) config.agent_path = flags.agent_path;
    if (*bridge_opt) config.bridge_path = flags.bridge_path;
    if (*serial_opt) config.device_serial = flags.device_serial;
    if (*pipeline_serial_opt) config.device_serial = pipeline_serial;
    if (*noise_opt) config.noise_preset = flags.noise_preset;
    if (*seed_opt) config.seed = flags.seed;
    if (*random_opt) synth_args.random_seed = random_seed;
    resolve_profile(config);
    resolve_noise(config);

    auto or_default = [&](const std::string& given, const char* name) {
      return given.empty() ? out_path(config, name) : given;
    };

    if (*classify) {
      stage = "classify";
      run_classify(config, classify_inputs.empty() ? config.inputs : classify_inputs);
    } else if (*generate) {
      stage = "generate";
      const std::string path = or_default(generate_input, kScenarioFile);
      require_file(path, "scenario file");
      const ClassifiedScenario scenario =
          in_stage("generate", [&] { return parse_scenario(read_file(path)); });
      run_generate(config, scenario);
    } else if (*replay) {
      stage = "replay";
      run_replay(config, or_default(replay_input, kScriptBinFile), replay_dry_run);
    } else if (*synthesize) {
      stage = "synthesize";
      run_synthesize(config, synth_args);
    } else if (*evaluate) {
      stage = "evaluate";
      run_evaluate(config, or_default(predicted_input, kPredictedFile),
                   or_default(truth_input, kTruthFile));
    } else if (*pipeline) {
      stage = "pipeline";
      const std::vector<std::string>& inputs =
          pipeline_inputs.empty() ? config.inputs : pipeline_inputs;
      if (inputs.size() != 1) config_error("pipeline takes exactly one trace file");
      if (!pipeline_dry_run && !config.device_serial.empty()) {
        require_file(config.agent_path, "replay agent (set agent_path or --agent)");
      }
      const std::vector<Classified> classified = run_classify(config, inputs);
      run_generate(config, classified.front().scenario);
      if (pipeline_dry_run) {
        std::cout << "[dry-run] replay skipped; artifacts are in " << config.output_dir << "\n";
      } else if (!config.device_serial.empty()) {
        run_replay(config, out_path(config, kScriptBinFile), false);
      }
    }
  } catch (const StageError& e) {
    std::cerr << "touchreplay: " << e.stage << ": " << error_code_name(e.error.code()) << ": "
              << e.error.what() << "\n";
    return is_input_error(e.error.code()) ? 2 : 1;
  } catch (const Error& e) {
    std::cerr << "touchreplay: " << stage << ": " << error_code_name(e.code()) << ": " << e.what()
              << "\n";
    return is_input_error(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "touchreplay: " << stage << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}
