#ifndef TOUCHREPLAY_REPLAY_DRIVER_H_
#define TOUCHREPLAY_REPLAY_DRIVER_H_

#include <string>
#include <string_view>
#include <vector>

namespace touchreplay {

struct ExecResult {
  int exit_code = 0;
  std::string output;
};

// Minimal device bridge: copy bytes to a device path and run a shell command.
// Implementations throw Error(kTransportError) when the bridge itself fails.
class DeviceTransport {
 public:
  virtual ~DeviceTransport() = default;

  virtual void push(std::string_view bytes, const std::string& remote_path) = 0;
  virtual ExecResult exec(const std::string& command) = 0;
};

struct TransportCall {
  enum class Kind { kPush, kExec };

  Kind kind = Kind::kPush;
  // Remote path for pushes, command line for execs.
  std::string target;
  std::size_t bytes = 0;

  friend bool operator==(const TransportCall&, const TransportCall&) = default;
};

// Runs the platform debug-bridge binary ("adb [-s serial] push|shell ...").
// Pushed bytes are staged in a temporary local file.
class BridgeTransport : public DeviceTransport {
 public:
  explicit BridgeTransport(std::string bridge_path, std::string serial = {});

  void push(std::string_view bytes, const std::string& remote_path) override;
  ExecResult exec(const std::string& command) override;

  // Every command line run so far, for logging.
  const std::vector<std::string>& invocations() const { return invocations_; }

 private:
  ExecResult run(std::vector<std::string> args);

  std::string bridge_path_;
  std::string serial_;
  std::vector<std::string> invocations_;
};

// In-memory transport for tests and dry runs. Records every call; failures
// can be injected per call kind.
class MockTransport : public DeviceTransport {
 public:
  void push(std::string_view bytes, const std::string& remote_path) override;
  ExecResult exec(const std::string& command) override;

  const std::vector<TransportCall>& calls() const { return calls_; }
  // Contents of the last push to |remote_path|, or empty.
  std::string pushed(const std::string& remote_path) const;

  bool fail_push = false;
  bool fail_exec = false;
  ExecResult exec_result;

 private:
  std::vector<TransportCall> calls_;
  std::vector<std::pair<std::string, std::string>> files_;
};

struct ReplayConfig {
  // Local replay agent binary pushed next to the script.
  std::string agent_path;
  std::string remote_dir = "/data/local/tmp";
  std::string agent_remote_name = "touchreplay_agent";
  std::string script_remote_name = "replay.bin";
};

struct ReplayReport {
  int exit_code = 0;
  double duration_ms = 0.0;
  std::vector<TransportCall> transcript;
  std::string output;
};

// Pushes the agent and the runnable script, then runs the agent on it. The
// script is parsed before any transport call. Throws Error(kInvalidScript),
// Error(kIoError) for an unreadable agent, Error(kTransportError), or
// Error(kNonZeroExit) carrying the agent's output.
ReplayReport push_and_replay(std::string_view runnable_script, DeviceTransport& transport,
                             const ReplayConfig& config);

}  // namespace touchreplay

#endif  // TOUCHREPLAY_REPLAY_DRIVER_H_
