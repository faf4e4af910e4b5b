#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "modbasis/verify.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args, bool with_cache = false) {
  if (!with_cache) args.insert(args.begin(), "--no-cache");
  std::ostringstream out;
  std::ostringstream err;
  const int code = modbasis::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class ScratchDir {
 public:
  explicit ScratchDir(const std::string& tag)
      : path_(fs::temp_directory_path() / ("modbasis-cli-" + tag)) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~ScratchDir() { fs::remove_all(path_); }
  std::string str() const { return path_.string(); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

}  // namespace

TEST(Expand, PrintsHauptmodul) {
  const Outcome o = run({"expand", "--level", "6", "--weight", "0", "--m", "1", "--terms", "4"});
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(o.out, "q^-1 + 6q + 4q^2 - 3q^3\n");
}

TEST(Expand, PrintsFirstCuspElement) {
  const Outcome o =
      run({"expand", "--level", "6", "--weight", "2", "--space", "S", "--m", "1", "--terms", "4"});
  EXPECT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(o.out, "q^-1 - 6q - 8q^2 + 9q^3\n");
}

TEST(Expand, UsageErrors) {
  EXPECT_EQ(run({"expand", "--level", "7", "--weight", "0", "--m", "1"}).code, 2);
  EXPECT_EQ(run({"expand", "--level", "6", "--weight", "1", "--m", "1"}).code, 2);
  EXPECT_EQ(run({"expand", "--level", "6", "--weight", "0", "--m", "1", "--prec", "8"}).code, 2);
  EXPECT_EQ(run({"expand", "--level", "6", "--weight", "2", "--m", "-5"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
}

TEST(Expand, JsonEnvelope) {
  const Outcome o = run({"--format", "json", "expand", "--level", "12", "--weight", "0", "--m", "1",
                         "--terms", "3"});
  ASSERT_EQ(o.code, 0) << o.err;
  const json doc = json::parse(o.out);
  for (const char* key : {"tool_version", "fixture_version", "command", "params", "coeffs", "summary"}) {
    EXPECT_TRUE(doc.contains(key)) << key;
  }
  EXPECT_EQ(doc["command"], "expand");
  EXPECT_EQ(doc["summary"]["pass"], true);
  EXPECT_EQ(doc["coeffs"]["valuation"], -1);
  EXPECT_EQ(doc["coeffs"]["coeffs"][2], "2");
  EXPECT_EQ(doc["coeffs"]["coeffs"][6], "0");
}

TEST(Verify, DocumentedCommandsPass) {
  EXPECT_EQ(run({"verify", "duality", "--level", "6", "--weight", "0", "--window", "15"}).code, 0);
  EXPECT_EQ(run({"verify", "uplemma", "--level", "12", "--mmax", "20"}).code, 0);
  EXPECT_EQ(run({"verify", "genfun", "--level", "10", "--weight", "4", "--mmax", "8"}).code, 0);
  EXPECT_EQ(run({"verify", "theta", "--level", "18", "--mmax", "6"}).code, 0);
  EXPECT_EQ(run({"verify", "al", "--level", "10", "--p", "2", "--amax", "1"}).code, 0);
}

TEST(Verify, ForcedWrongSignExitsOne) {
  const Outcome o = run({"verify", "al", "--level", "6", "--p", "2", "--sign", "1", "--amax", "1"});
  EXPECT_EQ(o.code, 1);
}

TEST(Verify, JsonReportRoundTrips) {
  const Outcome o = run({"--format", "json", "verify", "theta", "--level", "6", "--mmax", "5"});
  ASSERT_EQ(o.code, 0) << o.err;
  const json doc = json::parse(o.out);
  EXPECT_TRUE(doc.contains("report"));
  EXPECT_EQ(doc["summary"]["failures"], 0);
  const auto report = modbasis::report_from_json(doc["report"].dump());
  EXPECT_EQ(json::parse(modbasis::report_to_json(report)), doc["report"]);
}

TEST(Scan, DocumentedCommands) {
  EXPECT_EQ(run({"scan", "--level", "6", "--p", "2", "--amax", "4", "--bmax", "4", "--ncap", "200"}).code, 0);
  const Outcome weak = run({"--format", "csv", "scan", "--level", "18", "--p", "2", "--require-weak",
                            "--ncap", "100"});
  EXPECT_EQ(weak.code, 0) << weak.err;
  std::istringstream lines(weak.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "N,p,a,b,r,s,m,n,coeff,valuation,bound,status");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    // r is the fifth column; weak rows have 3 not dividing r
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    ASSERT_GE(cells.size(), 5u);
    EXPECT_NE(std::stoll(cells[4]) % 3, 0) << line;
  }
  EXPECT_GT(rows, 0);
  const Outcome p5 = run({"scan", "--level", "10", "--p", "5", "--amax", "3", "--bmax", "2"});
  EXPECT_EQ(p5.code, 0) << p5.err;
  EXPECT_NE(p5.out.find("no claim"), std::string::npos);
  EXPECT_EQ(run({"scan", "--level", "12", "--p", "2", "--require-weak", "--ncap", "50"}).code, 1);
  EXPECT_EQ(run({"scan", "--level", "6", "--p", "5"}).code, 2);
}

TEST(Scan, ReportFile) {
  ScratchDir dir("report");
  const std::string csv = (dir.path() / "rows.csv").string();
  const std::string js = (dir.path() / "rows.json").string();
  ASSERT_EQ(run({"scan", "--level", "6", "--p", "3", "--amax", "1", "--bmax", "1", "--report", csv}).code, 0);
  ASSERT_EQ(run({"scan", "--level", "6", "--p", "3", "--amax", "1", "--bmax", "1", "--report", js}).code, 0);
  std::ifstream c(csv);
  std::string header;
  std::getline(c, header);
  EXPECT_EQ(header, "N,p,a,b,r,s,m,n,coeff,valuation,bound,status");
  std::ifstream j(js);
  const json doc = json::parse(j);
  EXPECT_TRUE(doc.contains("rows"));
}

TEST(Validate, BuiltInAndAsPrintedFixtures) {
  EXPECT_EQ(run({"validate", "--level", "6"}).code, 0);
  const Outcome printed =
      run({"validate", "--fixture", oracle::fixture_path("as_printed/level18.json")});
  EXPECT_EQ(printed.code, 3);
  EXPECT_NE(printed.out.find("FractionalValuation"), std::string::npos) << printed.out;
  EXPECT_EQ(run({"validate", "--fixture", "/nonexistent.json"}).code, 2);
  ScratchDir dir("fixture");
  const std::string broken = (dir.path() / "broken.json").string();
  std::ofstream(broken) << "{\"level\": 6}";
  EXPECT_EQ(run({"validate", "--fixture", broken}).code, 3);
}

TEST(Determinism, CacheWarmColdAndDisabledAgree) {
  ScratchDir dir("determinism");
  const std::vector<std::string> args = {"--format", "json", "--cache-dir", dir.str(), "expand",
                                         "--level", "18", "--weight", "2", "--space", "S",
                                         "--m", "4", "--terms", "12"};
  const Outcome cold = run(args, true);
  const Outcome warm = run(args, true);
  std::vector<std::string> off = args;
  off.erase(off.begin() + 2, off.begin() + 4);
  const Outcome none = run(off);
  ASSERT_EQ(cold.code, 0) << cold.err;
  EXPECT_EQ(cold.out, warm.out);
  EXPECT_EQ(cold.out, none.out);
  EXPECT_FALSE(fs::is_empty(dir.path()));
}

TEST(Cache, InfoWarmClear) {
  ScratchDir dir("manage");
  EXPECT_EQ(run({"--cache-dir", dir.str(), "cache", "warm", "--level", "6", "--weight", "0"}, true).code, 0);
  const Outcome info = run({"--cache-dir", dir.str(), "cache", "info"}, true);
  EXPECT_EQ(info.code, 0);
  EXPECT_NE(info.out.find("N6"), std::string::npos) << info.out;
  EXPECT_EQ(run({"--cache-dir", dir.str(), "cache", "clear"}, true).code, 0);
  EXPECT_TRUE(fs::is_empty(dir.path()));
}
