#include <gtest/gtest.h>
#include <json.hpp>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("loglap_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args, const std::string& env = "") const {
    const std::string cmd = "cd '" + dir_.string() + "' && " + env + " '" LOGLAP_CLI_PATH "' " + args +
                            " > stdout.txt 2> stderr.txt";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  }

  std::string read(const std::string& name) const {
    std::ifstream in(dir_ / name, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  void write(const std::string& name, const std::string& text) const { std::ofstream(dir_ / name) << text; }
  bool exists(const std::string& name) const { return fs::exists(dir_ / name); }

  // CSV data rows after the comment lines and the header.
  std::vector<std::vector<std::string>> rows(const std::string& name) const {
    std::istringstream in(read(name));
    std::vector<std::vector<std::string>> out;
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
      if (line.rfind("#", 0) == 0) continue;
      if (!header) {
        header = true;
        continue;
      }
      std::vector<std::string> cells;
      std::stringstream ls(line);
      std::string c;
      while (std::getline(ls, c, ',')) cells.push_back(c);
      out.push_back(cells);
    }
    return out;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, ConstantsRangeResiduals) {
  ASSERT_EQ(run("constants --dim 1..10 --out table.csv"), 0);
  const std::string text = read("table.csv");
  EXPECT_EQ(text.rfind("# loglap ", 0), 0u);
  EXPECT_NE(text.find("# config {\"command\":\"constants\""), std::string::npos);
  const auto r = rows("table.csv");
  ASSERT_EQ(r.size(), 10u);
  for (const auto& row : r) EXPECT_LE(std::abs(std::stod(row[8])), 1e-12) << row[0];
}

TEST_F(Cli, ConstantsWithQuadrature) {
  ASSERT_EQ(run("constants --dim 2 --quadrature --out table.csv"), 0);
  const auto r = rows("table.csv");
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[1][1], "quadrature");
  EXPECT_NEAR(std::stod(r[1][4]), -std::log(2.0), 1e-10);
}

// Same arguments, same bytes, whatever the worker count.
TEST_F(Cli, RerunsAreByteIdentical) {
  ASSERT_EQ(run("constants --dim 1..4 --quadrature --out a.csv"), 0);
  const std::string first = read("a.csv");
  ASSERT_EQ(run("constants --dim 1..4 --quadrature --out a.csv"), 0);
  EXPECT_EQ(first, read("a.csv"));
  write("p.json", "[0, 0.5, 1.25]");
  const std::string args = "eval --method extension --function smooth_bump --params 1 --points p.json --out v.csv";
  ASSERT_EQ(run(args, "LOGLAP_THREADS=1"), 0);
  const std::string serial = read("v.csv");
  ASSERT_EQ(run(args, "LOGLAP_THREADS=3"), 0);
  EXPECT_EQ(serial, read("v.csv"));
}

TEST_F(Cli, InvalidFunctionIsConfigErrorWithoutOutput) {
  write("p.json", "[0]");
  EXPECT_EQ(run("eval --method direct --function nope --points p.json --out v.csv"), 1);
  EXPECT_FALSE(exists("v.csv"));
  EXPECT_EQ(run("constants --dim 0..3 --out t.csv"), 1);
  EXPECT_FALSE(exists("t.csv"));
  EXPECT_EQ(run("eval --method direct --function constant --points p.json --out v.csv"), 1);
  EXPECT_FALSE(exists("v.csv"));
}

TEST_F(Cli, ConfigFileValidation) {
  write("p.json", "[0, 1]");
  write("bad.json", R"({"command": "eval", "function": "gaussian", "sigma": 2})");
  EXPECT_EQ(run("eval --config bad.json --points p.json --out v.csv"), 1);
  EXPECT_NE(read("stderr.txt").find("unknown config key 'sigma'"), std::string::npos);
  write("mismatch.json", R"({"command": "energy", "function": "gaussian"})");
  EXPECT_EQ(run("eval --config mismatch.json --points p.json --out v.csv"), 1);
  write("type.json", R"({"command": "eval", "dim": "two"})");
  EXPECT_EQ(run("eval --config type.json --points p.json --out v.csv"), 1);
  write("nocmd.json", R"({"function": "gaussian"})");
  EXPECT_EQ(run("eval --config nocmd.json --points p.json --out v.csv"), 1);
  EXPECT_FALSE(exists("v.csv"));
}

TEST_F(Cli, CommandLineOverridesConfigFile) {
  write("p.json", "[0]");
  write("cfg.json", R"({"command": "eval", "function": "smooth_bump", "params": [1.0], "method": "spectral"})");
  ASSERT_EQ(run("eval --config cfg.json --method direct --points p.json --out v.csv"), 0);
  const std::string text = read("v.csv");
  EXPECT_NE(text.find("\"function\":\"smooth_bump\""), std::string::npos);
  EXPECT_NE(text.find("\"method\":\"direct\""), std::string::npos);
}

TEST_F(Cli, BadThreadEnvironmentIsConfigError) {
  EXPECT_EQ(run("constants --out t.csv", "LOGLAP_THREADS=zero"), 1);
  EXPECT_FALSE(exists("t.csv"));
}

TEST_F(Cli, EvalGaussianOriginAllMethods) {
  write("p.json", "[[0]]");
  for (const char* m : {"direct", "extension", "spectral"}) {
    ASSERT_EQ(run(std::string("eval --method ") + m + " --function gaussian --dim 1 --points p.json --out v.csv"), 0);
    const auto r = rows("v.csv");
    ASSERT_EQ(r.size(), 1u);
    EXPECT_NEAR(std::stod(r[0][2]), -(0.57721566490153286 + std::log(2.0)), 1e-3) << m;
  }
}

TEST_F(Cli, SpectralMeanWarningWithoutCompensation) {
  write("p.json", "[0]");
  ASSERT_EQ(run("eval --method spectral --function gaussian --compensation-sigma 0 --points p.json --out v.csv"), 0);
  EXPECT_NE(read("stderr.txt").find("exceeds 1e-12"), std::string::npos);
  ASSERT_EQ(run("eval --method spectral --function gaussian --points p.json --out v.csv"), 0);
  EXPECT_EQ(read("stderr.txt").find("exceeds 1e-12"), std::string::npos);
}

TEST_F(Cli, CrosscheckReport) {
  ASSERT_EQ(run("crosscheck --function gaussian --dim 1 --out report.json"), 0);
  const json j = json::parse(read("report.json"));
  EXPECT_TRUE(j.contains("version"));
  EXPECT_EQ(j["config"]["command"], "crosscheck");
  EXPECT_LE(j["discrepancies"]["max"].get<double>(), 1e-3);
  EXPECT_EQ(j["values"]["direct"].size(), 9u);
  EXPECT_TRUE(j["converged"].get<bool>());
}

TEST_F(Cli, ExtensionSweep) {
  ASSERT_EQ(run("extension --function gaussian --dim 1 --x 0 --tmin 1e-3 --tmax 0.2 --out sweep.csv"), 0);
  const auto r = rows("sweep.csv");
  ASSERT_EQ(r.size(), 8u);
  EXPECT_NE(read("sweep.csv").find("# loglap_extension -1.27036"), std::string::npos);
}

TEST_F(Cli, CounterexampleAndProbe) {
  ASSERT_EQ(run("counterexample --tau 1.5 --dim 2 --radii 10,100 --out ce.csv"), 0);
  const auto r = rows("ce.csv");
  ASSERT_EQ(r.size(), 2u);
  EXPECT_LT(std::stod(r[0][1]), std::stod(r[1][1]));
  ASSERT_EQ(run("ucp-probe --function annulus_bump --params 1,2 --ball 0,0,0.5 --out probe.json"), 0);
  const json j = json::parse(read("probe.json"));
  EXPECT_EQ(j["config"]["dim"], 2);
  EXPECT_GE(j["max_abs_loglap"].get<double>(), 0.01);
  EXPECT_EQ(run("ucp-probe --function annulus_bump --params 1,2 --ball 0,0,1.5 --out bad.json"), 1);
  EXPECT_FALSE(exists("bad.json"));
}

TEST_F(Cli, SmallsAndEnergy) {
  ASSERT_EQ(run("smalls --function gaussian --s 0.1,0.05,0.025 --out s.csv"), 0);
  const auto r = rows("s.csv");
  ASSERT_EQ(r.size(), 3u);
  EXPECT_LT(std::stod(r[2][1]), std::stod(r[1][1]));
  ASSERT_EQ(run("energy --function smooth_bump --params 1 --out e.json"), 0);
  const json j = json::parse(read("e.json"));
  EXPECT_LE(j["relative_discrepancies"]["form_vs_pairing"].get<double>(), 1e-3);
  EXPECT_EQ(run("energy --function gaussian --out e2.json"), 1);
}

TEST_F(Cli, PublishedSchemaMatchesTool) {
  ASSERT_EQ(run("--print-config-schema"), 0);
  std::ifstream in(LOGLAP_SCHEMA_PATH);
  ASSERT_TRUE(in.good());
  const json published = json::parse(in);
  const json printed = json::parse(read("stdout.txt"));
  EXPECT_EQ(published, printed);
}

// Every example config names a command and uses only keys the schema lists
// for that command, with matching JSON types.
TEST_F(Cli, ExampleConfigsConformToSchema) {
  std::ifstream in(LOGLAP_SCHEMA_PATH);
  const json schema = json::parse(in);
  int checked = 0;
  for (const auto& e : fs::directory_iterator(LOGLAP_CONFIG_DIR)) {
    if (e.path().extension() != ".json") continue;
    std::ifstream cf(e.path());
    const json cfg = json::parse(cf);
    const json* variant = nullptr;
    for (const auto& v : schema["oneOf"])
      if (v["properties"]["command"]["const"] == cfg["command"]) variant = &v;
    ASSERT_NE(variant, nullptr) << e.path();
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
      ASSERT_TRUE((*variant)["properties"].contains(it.key())) << e.path() << " " << it.key();
      const std::string type = (*variant)["properties"][it.key()].value("type", "");
      const bool ok = type == "number"    ? it->is_number()
                      : type == "integer" ? it->is_number_integer()
                      : type == "string"  ? it->is_string()
                      : type == "boolean" ? it->is_boolean()
                      : type == "array"   ? it->is_array()
                                          : true;
      EXPECT_TRUE(ok) << e.path() << " " << it.key();
    }
    ++checked;
  }
  EXPECT_GT(checked, 0);
}
