#include <gtest/gtest.h>
#include <httplib.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "fixtures.hpp"
#include "vesa/graph_dump.hpp"

namespace vesa {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int exit_code = -1;
  std::string output;  // stdout and stderr
};

CliRun run_cli(const std::string& args) {
  std::string command = std::string(VESA_CLI) + " " + args + " 2>&1";
  CliRun run;
  FILE* pipe = ::popen(command.c_str(), "r");
  if (!pipe) return run;
  char buffer[4096];
  while (size_t n = std::fread(buffer, 1, sizeof buffer, pipe)) run.output.append(buffer, n);
  int status = ::pclose(pipe);
  run.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return run;
}

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("vesa_cli_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const std::string& content) const {
    fs::create_directories((dir_ / name).parent_path());
    std::ofstream(dir_ / name) << content;
  }

  fs::path dir_;
  const fs::path demo_ = testing::kDataDir / "demo";
};

TEST_F(CliTest, BuildIsByteDeterministicAndReportsCounts) {
  std::string args = "build --sources " + (demo_ / "sources.json").string() + " --fixtures " +
                     (demo_ / "fixtures").string() + " --tokenizer " + (demo_ / "tokenizer.json").string();
  CliRun first = run_cli(args + " --out " + path("a.jsonl"));
  ASSERT_EQ(first.exit_code, 0) << first.output;
  CliRun second = run_cli(args + " --out " + path("b.jsonl"));
  ASSERT_EQ(second.exit_code, 0) << second.output;
  std::string a = read_file(path("a.jsonl"));
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, read_file(path("b.jsonl")));

  Attrs header = Attrs::parse(a.substr(0, a.find('\n')));
  GraphStore loaded = load(path("a.jsonl"));
  EXPECT_EQ(header["counts"]["nodes"], loaded.node_count());
  EXPECT_EQ(header["counts"]["edges"], loaded.edge_count());
  EXPECT_NE(first.output.find(std::to_string(loaded.node_count()) + " nodes"), std::string::npos);
  EXPECT_TRUE(loaded.check_referential_integrity());
}

TEST_F(CliTest, MissingRequiredOptionIsAConfigError) {
  EXPECT_EQ(run_cli("build --sources x.json").exit_code, 2);
  EXPECT_EQ(run_cli("").exit_code, 2);
  EXPECT_EQ(run_cli("frobnicate").exit_code, 2);
  EXPECT_EQ(run_cli("--help").exit_code, 0);
}

TEST_F(CliTest, BadSourcesConfigIsAConfigError) {
  write("sources.json", R"([{"name":"x","kind":"ftp"}])");
  CliRun run = run_cli("build --sources " + path("sources.json") + " --fixtures " + path("f") + " --out " +
                    path("g.jsonl"));
  EXPECT_EQ(run.exit_code, 2) << run.output;
  write("broken.json", "{");
  EXPECT_EQ(run_cli("build --sources " + path("broken.json") + " --fixtures " + path("f") + " --out " +
                    path("g.jsonl"))
                .exit_code,
            2);
}

TEST_F(CliTest, RejectThresholdExitsWithParseError) {
  write("sources.json", R"([{"name":"p","kind":"pangaea"}])");
  write("fixtures/p/1.json", R"({"id":"1","title":"Fine"})");
  write("fixtures/p/2.json",
        R"({"id":"2","title":"Reversed","temporal_coverage":{"start_date":"2001-01-01","end_date":"2000-01-01"}})");
  std::string base = "build --sources " + path("sources.json") + " --fixtures " + path("fixtures") + " --out " +
                     path("g.jsonl");
  CliRun rejected = run_cli(base);
  EXPECT_EQ(rejected.exit_code, 3) << rejected.output;
  EXPECT_FALSE(fs::exists(path("g.jsonl")));
  CliRun tolerated = run_cli(base + " --max-reject-fraction 0.5");
  EXPECT_EQ(tolerated.exit_code, 0) << tolerated.output;
  EXPECT_EQ(load(path("g.jsonl")).dataset_ids().size(), 1u);
}

TEST_F(CliTest, ServeWithoutDumpIsAnIoError) {
  CliRun run = run_cli("serve --graph " + path("absent.jsonl"));
  EXPECT_EQ(run.exit_code, 4);
  EXPECT_NE(run.output.find(path("absent.jsonl")), std::string::npos) << run.output;

  write("service.json", R"({"graph":"absent.jsonl","port":0})");
  EXPECT_EQ(run_cli("serve --config " + path("service.json")).exit_code, 2);
  write("corrupt.jsonl", "{\"format\":\"other\"}\n");
  EXPECT_EQ(run_cli("serve --graph " + path("corrupt.jsonl")).exit_code, 4);
}

TEST_F(CliTest, OfflineHarvestReadsTheCache) {
  write("sources.json", R"([{"name":"p","kind":"pangaea","endpoint":"http://127.0.0.1:1/none"}])");
  write("cache/p/000000.json", R"({"id":"1","title":"Cached"})");
  CliRun run = run_cli("harvest --offline --sources " + path("sources.json") + " --cache " + path("cache"));
  EXPECT_EQ(run.exit_code, 0) << run.output;
  EXPECT_NE(run.output.find("p: 1 documents"), std::string::npos) << run.output;
}

int free_port() {
  int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  ::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr);
  socklen_t len = sizeof addr;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  ::close(fd);
  return ntohs(addr.sin_port);
}

TEST_F(CliTest, ServeHonoursPortOverride) {
  dump(*testing::foraminifera_store(), path("graph.jsonl"));
  write("service.json", R"({"graph":"graph.jsonl","port":1})");
  int port = free_port();
  pid_t pid = ::fork();
  ASSERT_GE(pid, 0);
  if (pid == 0) {
    ::setenv("VESA_PORT", std::to_string(port).c_str(), 1);
    std::string config = path("service.json");
    ::execl(VESA_CLI, VESA_CLI, "serve", "--config", config.c_str(), "--host", "127.0.0.1",
            static_cast<char*>(nullptr));
    ::_exit(127);
  }
  httplib::Client client("127.0.0.1", port);
  httplib::Result res;
  for (int i = 0; i < 100 && !(res = client.Get("/main/all")); ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(Attrs::parse(res->body)["result"][0]["id"], "Dataset/495977132");
  ::kill(pid, SIGTERM);
  int status = 0;
  ::waitpid(pid, &status, 0);
  EXPECT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), 0);
}

}  // namespace
}  // namespace vesa
