#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "deltakit/json_io.hpp"
#include "test_support.hpp"

namespace deltakit {
namespace {

struct CliResult {
  int status;
  std::string out;
};

CliResult run(const std::string& args) {
  const std::string cmd = std::string(DELTAKIT_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return {-1, ""};
  std::string out;
  char buffer[4096];
  std::size_t n;
  while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) out.append(buffer, n);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

TEST(Cli, ExampleAPasses) {
  const CliResult r = run("example-a --level 3");
  ASSERT_EQ(r.status, 0);
  const Json j = parse_json(r.out);
  EXPECT_EQ(j.at("distance_m_xy_m_uv").at("exact"), "1/1");
  EXPECT_EQ(j.at("denting").at("certified"), 34);
}

TEST(Cli, CsvOutput) {
  const CliResult r = run("example-b --level 3 --samples 4 --format csv");
  ASSERT_EQ(r.status, 0);
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header, "slice,width,u,v,value,distance_exact,found");
  std::size_t rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  EXPECT_EQ(rows, 4u);
}

TEST(Cli, ConfigurationErrorsExitWithTwo) {
  EXPECT_EQ(run("example-a --level 0").status, 2);
  EXPECT_EQ(run("example-b --level 8").status, 2);
  EXPECT_EQ(run("verify geometry").status, 2);
  EXPECT_EQ(run("verify metric --format xml").status, 2);
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("inspect").status, 2);
  EXPECT_EQ(run("inspect --space " + testing::data_path("kite_missing_entry.json")).status, 2);
  EXPECT_EQ(run("inspect --space /nonexistent.json").status, 2);
}

TEST(Cli, CorruptedFixtureFails) {
  const CliResult r = run("verify metric --samples 5 --space " + testing::data_path("kite_triangle_broken.json"));
  EXPECT_EQ(r.status, 1);
  const Json j = parse_json(r.out);
  EXPECT_FALSE(j.at("fixture").at("valid").get<bool>());
  EXPECT_EQ(j.at("fixture").at("witness").size(), 3u);
  EXPECT_EQ(run("inspect --space " + testing::data_path("kite_triangle_broken.json")).status, 1);
}

TEST(Cli, InspectDescribesInputs) {
  const CliResult r = run("inspect --space " + testing::data_path("kite.json") + " --norm " +
                    testing::data_path("figure_norm.json"));
  ASSERT_EQ(r.status, 0);
  const Json j = parse_json(r.out);
  EXPECT_TRUE(j.at("space").at("valid").get<bool>());
  EXPECT_EQ(j.at("norm").at("extreme_points").size(), 12u);
  EXPECT_EQ(j.at("norm").at("v_points").size(), 12u);
  const Json l3 = parse_json(run("inspect --norm " + testing::data_path("l3_norm.json")).out);
  EXPECT_FALSE(l3.at("norm").at("polyhedral").get<bool>());
}

TEST(Cli, VerifyIsDeterministicAndWritesFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "deltakit_cli_test";
  std::filesystem::create_directories(dir);
  const auto first = dir / "first.json";
  const auto second = dir / "second.json";
  ASSERT_EQ(run("verify rtree --samples 30 --seed 3 --out " + first.string()).status, 0);
  ASSERT_EQ(run("verify rtree --samples 30 --seed 3 --out " + second.string()).status, 0);
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  EXPECT_FALSE(slurp(first).empty());
  EXPECT_EQ(slurp(first), slurp(second));
  const Json j = parse_json(slurp(first));
  EXPECT_EQ(j.at("seed"), 3);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace deltakit
