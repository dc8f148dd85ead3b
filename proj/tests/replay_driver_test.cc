#include "touchreplay/replay_driver.h"

#include <gtest/gtest.h>

#include <filesystem>

#include "touchreplay/error.h"
#include "touchreplay/file_io.h"
#include "touchreplay/script_codegen.h"

namespace touchreplay {
namespace {

class ReplayDriverTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("touchreplay_driver_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir_);
    config_.agent_path = (dir_ / "agent").string();
    write_file(config_.agent_path, "AGENT");
    SendEventScript s;
    s.events = {{0, 3, 0x2f, 0}, {0, 3, 0x39, 1}, {0, 0, 0, 0}};
    script_ = translate_runnable(s);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::filesystem::path dir_;
  ReplayConfig config_;
  std::string script_;
};

TEST_F(ReplayDriverTest, CallOrder) {
  MockTransport mock;
  const ReplayReport report = push_and_replay(script_, mock, config_);
  const std::vector<TransportCall> expected{
      {TransportCall::Kind::kPush, "/data/local/tmp/touchreplay_agent", 5},
      {TransportCall::Kind::kPush, "/data/local/tmp/replay.bin", script_.size()},
      {TransportCall::Kind::kExec,
       "chmod 755 /data/local/tmp/touchreplay_agent && /data/local/tmp/touchreplay_agent "
       "/data/local/tmp/replay.bin",
       0},
  };
  EXPECT_EQ(mock.calls(), expected);
  EXPECT_EQ(report.transcript, expected);
  EXPECT_EQ(report.exit_code, 0);
  EXPECT_GE(report.duration_ms, 0.0);
  EXPECT_EQ(mock.pushed("/data/local/tmp/replay.bin"), script_);
  EXPECT_EQ(mock.pushed("/data/local/tmp/touchreplay_agent"), "AGENT");
}

TEST_F(ReplayDriverTest, ConfigurableRemotePaths) {
  MockTransport mock;
  config_.remote_dir = "/sdcard";
  config_.script_remote_name = "s.bin";
  push_and_replay(script_, mock, config_);
  EXPECT_EQ(mock.calls()[1].target, "/sdcard/s.bin");
}

TEST_F(ReplayDriverTest, PushFailure) {
  MockTransport mock;
  mock.fail_push = true;
  try {
    push_and_replay(script_, mock, config_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTransportError);
  }
  EXPECT_EQ(mock.calls().size(), 1u);
}

TEST_F(ReplayDriverTest, NonZeroExitCarriesOutput) {
  MockTransport mock;
  mock.exec_result = {1, "cannot open /dev/input/event1"};
  try {
    push_and_replay(script_, mock, config_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonZeroExit);
    EXPECT_NE(std::string(e.what()).find("cannot open /dev/input/event1"), std::string::npos);
  }
}

TEST_F(ReplayDriverTest, RepeatRunsMakeTheSameCalls) {
  MockTransport first, second;
  push_and_replay(script_, first, config_);
  push_and_replay(script_, first, config_);
  push_and_replay(script_, second, config_);
  ASSERT_EQ(first.calls().size(), 6u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(first.calls()[i], first.calls()[i + 3]);
    EXPECT_EQ(first.calls()[i], second.calls()[i]);
  }
}

TEST_F(ReplayDriverTest, InvalidScriptMakesNoCalls) {
  MockTransport mock;
  EXPECT_THROW(push_and_replay("not a script", mock, config_), Error);
  EXPECT_THROW(push_and_replay(script_.substr(0, script_.size() - 3), mock, config_), Error);
  EXPECT_TRUE(mock.calls().empty());
}

TEST_F(ReplayDriverTest, MissingAgentMakesNoCalls) {
  MockTransport mock;
  config_.agent_path = (dir_ / "missing").string();
  try {
    push_and_replay(script_, mock, config_);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoError);
  }
  EXPECT_TRUE(mock.calls().empty());
}

// Uses a shell script standing in for the bridge binary.
TEST_F(ReplayDriverTest, BridgeTransportRunsTheBinary) {
  const std::string fake = (dir_ / "fake_bridge").string();
  const std::string log = (dir_ / "bridge.log").string();
  write_file(fake, "#!/bin/sh\necho \"$@\" >> " + log +
                       "\nfor a; do last=$a; done\n"
                       "if [ \"$last\" = fail ]; then echo boom; exit 3; fi\necho ok\n");
  std::filesystem::permissions(fake, std::filesystem::perms::owner_all);

  BridgeTransport bridge(fake, "SERIAL1");
  const ReplayReport report = push_and_replay(script_, bridge, config_);
  EXPECT_EQ(report.output, "ok\n");
  ASSERT_EQ(bridge.invocations().size(), 3u);
  EXPECT_NE(bridge.invocations()[0].find("-s SERIAL1 push"), std::string::npos);
  EXPECT_NE(bridge.invocations()[2].find("shell chmod 755"), std::string::npos);
  const std::string logged = read_file(log);
  EXPECT_NE(logged.find("/data/local/tmp/replay.bin"), std::string::npos);

  const ExecResult r = bridge.exec("fail");
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_EQ(r.output, "boom\n");

  BridgeTransport missing((dir_ / "no_such_bridge").string());
  EXPECT_THROW(missing.exec("ls"), Error);
}

}  // namespace
}  // namespace touchreplay
