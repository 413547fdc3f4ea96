#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / ("uniwkb_cli_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

CliRun run(const std::string& args, const std::string& env = "") {
  const fs::path dir = scratch_dir();
  const fs::path out = dir / "stdout.txt", err = dir / "stderr.txt";
  const std::string cmd = env + " '" UNIWKB_CLI_PATH "' " + args + " >'" + out.string() + "' 2>'" +
                          err.string() + "'";
  const int status = std::system(cmd.c_str());
  CliRun r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) v.push_back(line);
  return v;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> v;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) v.push_back(f);
  if (!line.empty() && line.back() == ',') v.emplace_back();
  return v;
}

TEST(CliSolve, JsonRecordsForBuiltin) {
  const CliRun r = run("solve --potential morse --param gamma=4.5 --levels 0..3");
  ASSERT_EQ(r.code, 0) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_EQ(doc["schema"], "uniwkb/1");
  ASSERT_EQ(doc["levels"].size(), 4u);
  for (int n = 0; n < 4; ++n) {
    const json& lv = doc["levels"][n];
    EXPECT_EQ(lv["n"], n);
    std::vector<std::string> keys;
    for (auto it = lv.begin(); it != lv.end(); ++it) keys.push_back(it.key());
    EXPECT_EQ(keys, (std::vector<std::string>{"n", "e_sp", "e_bar", "e_exact", "metrics"}));
    EXPECT_EQ(lv["metrics"].size(), 5u);
  }
  EXPECT_NEAR(doc["levels"][0]["e_bar"].get<double>(), -7.98840, 1e-4);
  EXPECT_EQ(doc["levels"][2]["e_exact"].get<double>(), -2.0);
  EXPECT_TRUE(doc["provenance"].contains("version"));
  EXPECT_TRUE(doc["provenance"]["timings"].contains("total_s"));
}

TEST(CliSolve, ExpressionHasNoExactFields) {
  const CliRun r = run("solve --potential expr --expr 'q^4/4' --levels 0,1");
  ASSERT_EQ(r.code, 0) << r.err;
  const json doc = json::parse(r.out);
  ASSERT_EQ(doc["levels"].size(), 2u);
  for (const json& lv : doc["levels"]) {
    EXPECT_FALSE(lv.contains("e_exact"));
    EXPECT_FALSE(lv.contains("metrics"));
  }
  EXPECT_EQ(doc["config"]["expr"], "q^4/4");
}

TEST(CliSolve, CsvFormat) {
  const CliRun r = run("solve --potential harmonic --param k=0.5 --levels 0..2 --format csv");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines_of(r.out);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], "n,e_sp,e_bar,e_exact,delta_psi,delta_psi_prime,delta_h_psi,d,delta_e");
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(fields(rows[i]).size(), 9u);
  EXPECT_EQ(fields(rows[1])[3], "0.5");
}

TEST(CliSolve, OutputIsDeterministic) {
  const fs::path dir = scratch_dir();
  const std::string base = "solve --potential poschl-teller --param lambda=5 --levels 0..3 --out ";
  ASSERT_EQ(run(base + "'" + (dir / "a.json").string() + "'").code, 0);
  ASSERT_EQ(run(base + "'" + (dir / "b.json").string() + "'").code, 0);
  json a = json::parse(slurp(dir / "a.json")), b = json::parse(slurp(dir / "b.json"));
  a["provenance"].erase("timings");
  b["provenance"].erase("timings");
  EXPECT_EQ(a.dump(), b.dump());
}

TEST(CliSolve, LevelAboveWellTopExitsThree) {
  const fs::path target = scratch_dir() / "never.json";
  fs::remove(target);
  const CliRun r = run("solve --potential morse --param gamma=4.5 --levels 0..9 --out '" +
                    target.string() + "'");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("4 bound levels"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(target));
  EXPECT_FALSE(fs::exists(target.string() + ".partial"));
}

TEST(CliSolve, SyntaxErrorReportsColumn) {
  const CliRun r = run("solve --potential expr --expr 'q^4/*4'");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("column 5"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("      ^"), std::string::npos) << r.err;
}

TEST(CliSolve, ConfigurationErrorsExitTwo) {
  EXPECT_EQ(run("solve --potential morse --bogus").code, 2);
  EXPECT_EQ(run("solve --potential morse --param gamma=0.2").code, 2);
  EXPECT_EQ(run("solve --potential harmonic --param omega=1").code, 2);
  EXPECT_EQ(run("solve --potential harmonic --levels 3..1").code, 2);
  EXPECT_EQ(run("solve --potential harmonic --format xml").code, 2);
  EXPECT_EQ(run("").code, 2);
}

TEST(CliVerify, ShippedTablePasses) {
  const CliRun r = run("verify");
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("60/60"), std::string::npos) << r.out;
}

TEST(CliVerify, CorruptedGoldenExitsTwo) {
  std::string body = slurp(UNIWKB_GOLDEN_TABLE);
  body[body.find("4.60e-03")] = '5';
  const fs::path bad = scratch_dir() / "corrupt.csv";
  std::ofstream(bad, std::ios::binary) << body;
  const CliRun r = run("verify", "UNIWKB_GOLDEN='" + bad.string() + "'");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("checksum"), std::string::npos) << r.err;
}

TEST(CliDump, GridRowsAndColumns) {
  const CliRun r = run("dump --potential harmonic --param k=0.5 --levels 1 --grid 201");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines_of(r.out);
  ASSERT_EQ(rows.size(), 202u);
  EXPECT_EQ(rows[0], "q,a,region,psi_ap,dpsi_ap,psi_ex,h_psi");
  int allowed = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = fields(rows[i]);
    ASSERT_EQ(f.size(), 7u) << rows[i];
    allowed += f[2] == "allowed";
  }
  EXPECT_GT(allowed, 0);
}

TEST(CliDump, ScaledVariableVanishesAtTurningPoints) {
  // harmonic k=1/2, n=0: E_sp = 0.511055873756435, q± = ±sqrt(2 E_sp)
  const double qt = std::sqrt(2.0 * 0.511055873756435);
  char range[64];
  std::snprintf(range, sizeof range, "%.15f:%.15f", -qt, qt);
  const CliRun r = run(std::string("dump --potential harmonic --param k=0.5 --levels 0 --grid 11 "
                                "--range ") + range);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines_of(r.out);
  ASSERT_EQ(rows.size(), 12u);
  EXPECT_NEAR(std::stod(fields(rows[1])[1]), 0.0, 1e-9);
  EXPECT_NEAR(std::stod(fields(rows[11])[1]), 0.0, 1e-9);
  EXPECT_NE(fields(rows[6])[1].find("inf"), std::string::npos);  // Q' = 0 at q = 0
}

TEST(CliDump, ExpressionLeavesExactColumnEmpty) {
  const CliRun r = run("dump --potential expr --expr 'q^4/4' --levels 0 --grid 5");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines_of(r.out);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(fields(rows[3])[5], "");
}

TEST(CliDump, SingleLevelOnly) {
  EXPECT_EQ(run("dump --potential harmonic --levels 0..1").code, 2);
}

}  // namespace
