#include <gtest/gtest.h>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

namespace moser::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

Result seedless(std::vector<std::string> args) {
  args.insert(args.begin(), "--seedless");
  return invoke(std::move(args));
}

TEST(Cli, BasicValues) {
  EXPECT_EQ(seedless({"bern", "2"}).out, "1/6\n");
  EXPECT_EQ(seedless({"bern", "0"}).out, "1\n");
  EXPECT_EQ(seedless({"bern", "1"}).out, "-1/2\n");
  EXPECT_EQ(seedless({"bern", "12"}).out, "-691/2730\n");
  EXPECT_EQ(seedless({"bern", "7"}).out, "0\n");
  EXPECT_EQ(seedless({"gk", "10", "5"}).out, "5\n");
  EXPECT_EQ(seedless({"gk", "2", "6"}).out, "1/6\n");
  EXPECT_EQ(seedless({"powersum", "10", "5"}).out, "1108650\n");
  EXPECT_EQ(seedless({"powersum", "2", "7", "--naive"}).out, "91\n");
  EXPECT_EQ(seedless({"crossover", "10"}).out, "16\n");
}

TEST(Cli, GlobalFlagsAfterSubcommand) {
  auto r = seedless({"bern", "10", "--format", "json"});
  EXPECT_EQ(r.code, kOk);
  auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["value"], "5/66");
}

TEST(Cli, RatioSearchJson) {
  auto r = seedless({"search", "ratio", "--kmax", "3", "--mmax", "10", "--format", "json"});
  ASSERT_EQ(r.code, kOk) << r.err;
  auto rows = nlohmann::json::parse(r.out)["rows"];
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (nlohmann::json{{"k", "1"}, {"m", "3"}, {"quotient", "2"}}));
  EXPECT_EQ(rows[1], (nlohmann::json{{"k", "3"}, {"m", "3"}, {"quotient", "4"}}));
}

TEST(Cli, EmSearch) {
  auto r = seedless({"search", "em", "--kmax", "12", "--mmax", "500", "--format", "csv"});
  EXPECT_EQ(r.out, "k,m\r\n1,3\r\n");
}

TEST(Cli, Ladder) {
  auto r = seedless({"ladder", "12", "691"});
  EXPECT_EQ(r.code, kOk);
  EXPECT_NE(r.out.find("m^4 477481 no formula"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("m^3 477481 477481 match"), std::string::npos) << r.out;
}

TEST(Cli, NumeratorScan) {
  auto r = seedless({"scan", "numerators", "--kmax", "20", "--trial-bound", "100", "--format", "json"});
  ASSERT_EQ(r.code, kOk);
  auto rows = nlohmann::json::parse(r.out)["rows"];
  ASSERT_EQ(rows.size(), 10u);
  EXPECT_EQ(rows[4]["k"], "10");
  EXPECT_EQ(rows[4]["prime"], "true");
  EXPECT_EQ(rows[0]["square_status"], "trivial");
  EXPECT_EQ(rows[9]["prime"], "false");
}

TEST(Cli, UsageErrors) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"bern"}, {"bern", "x"}, {"gk", "3", "5"}, {"gk", "10", "1"}, {"frobnicate"},
           {"--format", "xml", "bern", "2"}, {"verify", "huge"}, {"verify", "--grid", "k=1..4,zz=1"},
           {"verify", "quick", "--grid", "k=1..4"}, {"powersum", "2", "0"}, {"--jobs", "0", "verify"}}) {
    auto r = seedless(args);
    EXPECT_EQ(r.code, kUsage) << args.front();
    EXPECT_TRUE(r.out.empty()) << args.front();
    EXPECT_FALSE(r.err.empty()) << args.front();
  }
}

TEST(Cli, HelpAndSchema) {
  auto h = invoke({"--help"});
  EXPECT_EQ(h.code, kOk);
  EXPECT_NE(h.out.find("verify"), std::string::npos);
  auto s = invoke({"--help-schema"});
  EXPECT_EQ(s.code, kOk);
  EXPECT_TRUE(nlohmann::json::accept(s.out));
}

TEST(Cli, VerifyGrid) {
  auto r = seedless({"verify", "--grid", "k=2..12,m=1..60,checks=gcd-ladder+congruence,even", "--format", "json",
                     "--no-timing"});
  ASSERT_EQ(r.code, kOk) << r.err;
  auto doc = nlohmann::json::parse(r.out);
  EXPECT_EQ(doc["grid"]["checks"], nlohmann::json::array({"gcd-ladder", "congruence"}));
  EXPECT_EQ(doc["grid"]["k_min"], 2);
  EXPECT_FALSE(doc.contains("wall_time_seconds"));
  EXPECT_EQ(doc["summary"]["ok"], true);
  EXPECT_TRUE(r.err.find("0 failure") != std::string::npos);
}

TEST(Cli, CacheFileLifecycle) {
  auto dir = fs::temp_directory_path() / "moser-cli-cache-test";
  fs::remove_all(dir);
  auto file = (dir / "b.cache").string();
  EXPECT_EQ(invoke({"--cache", file, "bern", "20"}).out, "-174611/330\n");
  ASSERT_TRUE(fs::exists(file));
  auto shown = invoke({"--cache", file, "cache", "show", "--format", "csv"});
  EXPECT_NE(shown.out.find("20,-174611,330\r\n"), std::string::npos);
  EXPECT_EQ(invoke({"--cache", file, "cache", "build", "--kmax", "40"}).code, kOk);

  { std::ofstream(file, std::ios::app) << "junk\n"; }
  auto broken = invoke({"--cache", file, "bern", "4"});
  EXPECT_EQ(broken.code, kIo);
  EXPECT_TRUE(broken.out.empty());
  EXPECT_NE(broken.err.find("cache"), std::string::npos);
  // --seedless ignores the broken file.
  EXPECT_EQ(invoke({"--seedless", "--cache", file, "bern", "4"}).out, "-1/30\n");
  fs::remove_all(dir);
}

#ifdef MOSERLAB_PATH
std::pair<int, std::string> shell(const std::string& command) {
  std::string out;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) return {-1, out};
  char buffer[4096];
  std::size_t n;
  while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) out.append(buffer, n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

TEST(CliBinary, ExitCodesAndStreams) {
  const std::string bin = MOSERLAB_PATH;
  EXPECT_EQ(shell(bin + " --seedless bern 2 2>/dev/null"), (std::pair<int, std::string>{0, "1/6\n"}));
  EXPECT_EQ(shell(bin + " --seedless gk 3 3 2>/dev/null"), (std::pair<int, std::string>{2, ""}));
  auto quick = shell(bin + " --seedless verify quick --format csv 2>/dev/null");
  EXPECT_EQ(quick.first, 0);
  EXPECT_EQ(quick.second.rfind("check,pass,fail,inapplicable,reported\r\n", 0), 0u);
  auto dir = fs::temp_directory_path() / "moser-cli-binary-test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  { std::ofstream(dir / "bad.cache") << "moser-ladder-cache v9\n"; }
  EXPECT_EQ(shell(bin + " --cache " + (dir / "bad.cache").string() + " bern 2 2>/dev/null").first, 3);
  fs::remove_all(dir);
}
#endif

}  // namespace
}  // namespace moser::cli
