#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>

#include "gwf/equilibrium.hpp"
#include "gwf/errors.hpp"
#include "gwf/tools/config.hpp"
#include "gwf/tools/fixtures.hpp"
#include "gwf/tools/runner.hpp"
#include "gwf/tools/table.hpp"
#include "oracles.hpp"

namespace gwf::tools {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path temp_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("gwf_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(ConfigParseTest, ReportsLineAndColumn) {
  try {
    parse_config_text("n = 3\n# note\n  oops\n");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.column(), 3);
  }
  EXPECT_THROW(parse_config_text("n = 3\nn = 4\n"), ConfigError);
  EXPECT_THROW(parse_config_text("mu =\n"), ConfigError);
}

TEST(ConfigValidateTest, MissingSeedNamesSeed) {
  try {
    validate_config("simulate", {{"n", "4"}, {"t_end", "1"}});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "seed");
    EXPECT_NE(std::string(e.what()).find("seed"), std::string::npos);
  }
}

TEST(ConfigValidateTest, NegativeMuIsRangeError) {
  try {
    validate_config("exact", {{"n", "4"}, {"mu", "-1"}});
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.key(), "mu");
  }
}

TEST(ConfigValidateTest, UnknownKeyRejected) {
  EXPECT_THROW(validate_config("exact", {{"n", "4"}, {"colour", "red"}}), ConfigError);
  EXPECT_THROW(validate_config("nope", {}), ConfigError);
}

TEST(ConfigValidateTest, NormalizedEcho) {
  const ExperimentConfig c = validate_config("command = limit\nt-grid = 0.5, 1\nseed=3\nmu=1.50\n");
  EXPECT_EQ(c.text("t_grid"), "0.5,1");
  EXPECT_EQ(c.text("mu"), "1.5");
  EXPECT_EQ(c.text("n"), "500");
  const std::string echo = c.echo();
  EXPECT_EQ(echo.rfind("command=limit\n", 0), 0u);
  EXPECT_NE(echo.find("seed=3\n"), std::string::npos);
  EXPECT_EQ(validate_config(echo).echo(), echo);
}

TEST(ConfigValidateTest, DualitySeedOnlyForMonteCarlo) {
  EXPECT_NO_THROW(validate_config("duality", {{"n", "2"}, {"t", "0.5"}}));
  EXPECT_THROW(validate_config("duality", {{"n", "2"}, {"t", "0.5"}, {"replicates", "10"}}), ConfigError);
  EXPECT_THROW(validate_config("equilibrium", {{"replicates", "10"}, {"seed", "1"}, {"n", "10,5"}}),
               ConfigError);
}

TEST(Sha256Test, KnownDigest) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(TableTest, QuotesKeysWithCommas) {
  Table t{"x", {"key", "value"}, {}};
  t.add_row({std::string("[1,2]:1"), 0.1});
  std::ostringstream out;
  write_csv(out, t);
  EXPECT_EQ(out.str(), "key,value\n\"[1,2]:1\",0.10000000000000001\n");
}

TEST(FixturesTest, BuiltinAndErrors) {
  EXPECT_GE(builtin_graphon_fixtures().size(), 5u);
  EXPECT_THROW(parse_graphon_fixtures("[{\"kind\": \"spiral\"}]"), PreconditionError);
  EXPECT_THROW(parse_graphon_fixtures("{"), PreconditionError);
  EXPECT_THROW(parse_graphon_fixtures("[{\"kind\": \"block\", \"sizes\": [0.8, 0.8]}]"), PreconditionError);
}

TEST(RunTest, ExactFrequencyCsvMatchesEwens) {
  const fs::path dir = temp_dir("exact");
  const std::string out = (dir / "med.csv").string();
  const ExperimentConfig c = validate_config("exact", {{"chain", "frequency"}, {"n", "5"}, {"mu", "1"}, {"out", out}});
  std::ostringstream log;
  EXPECT_EQ(run(c, log), ExitCode::kOk);
  std::istringstream csv(slurp(out));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "state_key,exact_pi,med_pmf,abs_diff");
  int rows = 0;
  while (std::getline(csv, line)) {
    const auto comma = line.find(',');
    const FrequencySpectrum nu = FrequencySpectrum::parse(line.substr(0, comma));
    const double pi = std::stod(line.substr(comma + 1));
    EXPECT_NEAR(pi, static_cast<double>(oracle::ewens_pmf(nu.counts(), 1.0)), 1e-10);
    ++rows;
  }
  EXPECT_EQ(rows, 7);
  const std::string manifest = slurp(out + ".manifest.json");
  EXPECT_NE(manifest.find(sha256_hex(slurp(out))), std::string::npos);
  EXPECT_NE(manifest.find("\"wall_ms\""), std::string::npos);
}

TEST(RunTest, DualityPrintsSmallResidual) {
  std::ostringstream log;
  const ExperimentConfig c = validate_config("duality", {{"n", "2"}, {"mu", "1"}, {"t", "0.5"}});
  EXPECT_EQ(run(c, log), ExitCode::kOk);
  const std::string text = log.str();
  const auto pos = text.find("residual=");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_LE(std::stod(text.substr(pos + 9)), 1e-8);
}

TEST(RunTest, SimulateIsByteIdentical) {
  const fs::path dir = temp_dir("simulate");
  for (const char* chain : {"poach", "adjacency", "moran", "frequency"}) {
    std::string first;
    for (int pass = 0; pass < 2; ++pass) {
      const std::string out = (dir / (std::string(chain) + std::to_string(pass) + ".csv")).string();
      const ExperimentConfig c = validate_config(
          "simulate", {{"chain", chain}, {"n", "5"}, {"t_end", "2"}, {"replicates", "3"}, {"seed", "9"}, {"out", out}});
      std::ostringstream log;
      ASSERT_EQ(run(c, log), ExitCode::kOk);
      if (pass == 0) {
        first = slurp(out);
      } else {
        EXPECT_EQ(slurp(out), first) << chain;
      }
    }
    EXPECT_GT(first.size(), 50u);
  }
}

TEST(RunTest, ExitCodes) {
  std::ostringstream out;
  std::ostringstream err;
  const ExperimentConfig big = validate_config(
      "simulate", {{"n", "64"}, {"t_end", "1000"}, {"replicates", "1000"}, {"seed", "1"}});
  EXPECT_EQ(run_guarded(big, out, err), 4);
  EXPECT_EQ(err.str().find('\n'), err.str().size() - 1);
  EXPECT_NE(err.str().find("\"error\":\"resource_cap\""), std::string::npos);
  std::ostringstream err2;
  const ExperimentConfig huge = validate_config("exact", {{"chain", "frequency"}, {"n", "40"}});
  EXPECT_EQ(run_guarded(huge, out, err2), 4);
}

int run_binary(const std::string& args) {
  const int status = std::system((std::string(GWF_CLI_PATH) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(BinaryTest, ExitStatuses) {
  EXPECT_EQ(run_binary("duality --n 2 --mu 1 --t 0.5"), 0);
  EXPECT_EQ(run_binary("exact --n 4 --mu -1"), 2);
  EXPECT_EQ(run_binary("simulate --n 4 --t-end 1"), 2);
  EXPECT_EQ(run_binary("exact --n 4 --bogus 1"), 2);
  const fs::path dir = temp_dir("binary");
  const fs::path cfg = dir / "run.cfg";
  std::ofstream(cfg) << "command = exact\nchain = poach\nn = 3\nmu = 1\nout = " << (dir / "g.csv").string() << "\n";
  EXPECT_EQ(run_binary("exact --config " + cfg.string()), 0);
  EXPECT_TRUE(fs::exists(dir / "g.csv.manifest.json"));
}

}  // namespace
}  // namespace gwf::tools
