#include "touchreplay/replay_driver.h"

#include <fcntl.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <iostream>

#include "touchreplay/error.h"
#include "touchreplay/file_io.h"
#include "touchreplay/script_codegen.h"

extern char** environ;

namespace touchreplay {

namespace {

std::string join_command(const std::vector<std::string>& args) {
  std::string out;
  for (const std::string& a : args) {
    if (!out.empty()) out += ' ';
    out += a;
  }
  return out;
}

// Removes the staged file when the push is done.
class TempFile {
 public:
  explicit TempFile(std::string_view bytes) {
    std::string pattern =
        (std::filesystem::temp_directory_path() / "touchreplay-XXXXXX").string();
    const int fd = ::mkstemp(pattern.data());
    if (fd < 0) throw Error(ErrorCode::kIoError, "cannot create a temporary file");
    ::close(fd);
    path_ = pattern;
    write_file(path_, std::string(bytes));
  }
  ~TempFile() { std::filesystem::remove(path_); }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace

BridgeTransport::BridgeTransport(std::string bridge_path, std::string serial)
    : bridge_path_(std::move(bridge_path)), serial_(std::move(serial)) {}

ExecResult BridgeTransport::run(std::vector<std::string> args) {
  std::vector<std::string> argv{bridge_path_};
  if (!serial_.empty()) {
    argv.push_back("-s");
    argv.push_back(serial_);
  }
  argv.insert(argv.end(), args.begin(), args.end());
  invocations_.push_back(join_command(argv));
  std::clog << "[bridge] " << invocations_.back() << "\n";

  int pipe_fds[2];
  if (::pipe(pipe_fds) != 0) throw Error(ErrorCode::kTransportError, "pipe() failed");
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, pipe_fds[1], STDOUT_FILENO);
  posix_spawn_file_actions_adddup2(&actions, pipe_fds[1], STDERR_FILENO);
  posix_spawn_file_actions_addclose(&actions, pipe_fds[0]);

  std::vector<char*> c_args;
  for (std::string& a : argv) c_args.push_back(a.data());
  c_args.push_back(nullptr);

  pid_t pid = 0;
  const int rc = ::posix_spawnp(&pid, bridge_path_.c_str(), &actions, nullptr,
                                c_args.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  ::close(pipe_fds[1]);
  if (rc != 0) {
    ::close(pipe_fds[0]);
    throw Error(ErrorCode::kTransportError,
                "cannot start " + bridge_path_ + ": " + std::strerror(rc));
  }

  ExecResult result;
  std::array<char, 4096> buf;
  ssize_t n;
  while ((n = ::read(pipe_fds[0], buf.data(), buf.size())) > 0) {
    result.output.append(buf.data(), static_cast<std::size_t>(n));
  }
  ::close(pipe_fds[0]);
  int status = 0;
  if (::waitpid(pid, &status, 0) < 0) {
    throw Error(ErrorCode::kTransportError, "waitpid failed for " + bridge_path_);
  }
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
  return result;
}

void BridgeTransport::push(std::string_view bytes, const std::string& remote_path) {
  TempFile staged(bytes);
  const ExecResult r = run({"push", staged.path(), remote_path});
  if (r.exit_code != 0) {
    throw Error(ErrorCode::kTransportError,
                "push to " + remote_path + " failed (exit " + std::to_string(r.exit_code) +
                    "): " + r.output);
  }
}

ExecResult BridgeTransport::exec(const std::string& command) {
  return run({"shell", command});
}

void MockTransport::push(std::string_view bytes, const std::string& remote_path) {
  calls_.push_back({TransportCall::Kind::kPush, remote_path, bytes.size()});
  if (fail_push) throw Error(ErrorCode::kTransportError, "mock push failure: " + remote_path);
  files_.emplace_back(remote_path, std::string(bytes));
}

ExecResult MockTransport::exec(const std::string& command) {
  calls_.push_back({TransportCall::Kind::kExec, command, 0});
  if (fail_exec) throw Error(ErrorCode::kTransportError, "mock exec failure");
  return exec_result;
}

std::string MockTransport::pushed(const std::string& remote_path) const {
  for (auto it = files_.rbegin(); it != files_.rend(); ++it) {
    if (it->first == remote_path) return it->second;
  }
  return {};
}

namespace {

// Wraps a transport and records the calls the driver makes.
class RecordingTransport {
 public:
  explicit RecordingTransport(DeviceTransport& inner) : inner_(inner) {}

  void push(std::string_view bytes, const std::string& remote) {
    transcript_.push_back({TransportCall::Kind::kPush, remote, bytes.size()});
    inner_.push(bytes, remote);
  }
  ExecResult exec(const std::string& command) {
    transcript_.push_back({TransportCall::Kind::kExec, command, 0});
    return inner_.exec(command);
  }
  std::vector<TransportCall>& transcript() { return transcript_; }

 private:
  DeviceTransport& inner_;
  std::vector<TransportCall> transcript_;
};

}  // namespace

ReplayReport push_and_replay(std::string_view runnable_script, DeviceTransport& transport,
                             const ReplayConfig& config) {
  parse_runnable(runnable_script);
  const std::string agent = read_file(config.agent_path);

  const std::string agent_remote = config.remote_dir + "/" + config.agent_remote_name;
  const std::string script_remote = config.remote_dir + "/" + config.script_remote_name;
  const auto started = std::chrono::steady_clock::now();

  RecordingTransport recorder(transport);
  recorder.push(agent, agent_remote);
  recorder.push(runnable_script, script_remote);
  const ExecResult result =
      recorder.exec("chmod 755 " + agent_remote + " && " + agent_remote + " " + script_remote);

  ReplayReport report;
  report.exit_code = result.exit_code;
  report.output = result.output;
  report.transcript = std::move(recorder.transcript());
  report.duration_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - started)
                           .count();
  if (result.exit_code != 0) {
    throw Error(ErrorCode::kNonZeroExit, "replay agent exited with " +
                                             std::to_string(result.exit_code) + ": " +
                                             result.output);
  }
  return report;
}

}  // namespace touchreplay
