#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "golden_cases.hpp"
#include "ppha/cli.hpp"
#include "ppha/io.hpp"

namespace fs = std::filesystem;

namespace {

using namespace ppha;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    fs::current_path(PPHA_TESTS_DIR);
    tmp_ = fs::temp_directory_path() /
           ("ppha_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(tmp_);
    fs::create_directories(tmp_);
  }
  void TearDown() override { fs::remove_all(tmp_); }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "ppha_cli");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return cli::run(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  fs::path tmp_;
  std::ostringstream out_, err_;
};

// -- ingest -----------------------------------------------------------------

TEST(Ingest, SingleColumnWithHeader) {
  std::istringstream in("value\n1\n2\n3\n");
  const auto c = parse_curve_csv(in);
  EXPECT_EQ(std::vector<double>(c.values().begin(), c.values().end()), (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(c.origin(), 0);
  EXPECT_EQ(c.level(), 0);
}

TEST(Ingest, IndexedColumnsSetOrigin) {
  std::istringstream in("index,value\r\n-2,0.5\r\n-1,1e-3\r\n0,+4\r\n");
  const auto c = parse_curve_csv(in, 0.25);
  EXPECT_EQ(c.origin(), -2);
  EXPECT_EQ(c.size(), 3u);
  EXPECT_EQ(c.values()[1], 1e-3);
  EXPECT_EQ(c.base_spacing(), 0.25);
}

TEST(Ingest, ErrorsCarryLineNumbers) {
  const auto expect_error = [](const std::string& text, const std::string& needle) {
    std::istringstream in(text);
    try {
      (void)parse_curve_csv(in, 1.0, "f.csv");
      ADD_FAILURE() << "no error for: " << text;
    } catch (const ParseError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  expect_error("value\n1\nabc\n", "f.csv:3");
  expect_error("value\n1\ninf\n", "f.csv:3: non-finite");
  expect_error("index,value\n0,1\n2,1\n", "f.csv:3: indices must be consecutive");
  expect_error("value\n", "no data rows");
  expect_error("1\n2,3\n", "f.csv:2");
}

TEST(Ingest, Builtins) {
  const auto step = sample_builtin(builtin_sampler("step"), 0.1);
  for (std::size_t k = 0; k < step.size(); ++k) {
    EXPECT_EQ(step.values()[k], step.abscissa(k) < 0 ? 0.0 : 1.0);
  }
  const auto e = sample_builtin(builtin_sampler("eq21"), 1.0 / 32);
  ASSERT_EQ(e.size(), 32u);
  for (std::size_t k = 0; k < e.size(); ++k) {
    const double x = (static_cast<double>(k) + 0.5) / 32.0;
    EXPECT_DOUBLE_EQ(e.values()[k], x <= 0.5 ? std::sin(M_PI * x) : -std::sin(M_PI * x));
  }
  const auto q = sample_builtin(builtin_sampler("quadratic:1,0,-1"), 0.5);
  EXPECT_DOUBLE_EQ(q.values()[0], 0.25 * 0.25 - 1.0);
  const auto d = sample_builtin(builtin_sampler("delta:9"), 1.0);
  EXPECT_EQ(d.size(), 9u);
  EXPECT_EQ(d.values()[4], 1.0);
  EXPECT_THROW((void)builtin_sampler("nope"), ConfigError);
  EXPECT_THROW((void)builtin_sampler("quadratic:1,2"), ConfigError);
  EXPECT_THROW((void)builtin_sampler("delta:0"), ConfigError);
}

TEST(Csv, AbscissaColumnRoundTripsExactly) {
  const SampledCurve c({0.1, 0.2, 0.3, 0.4}, 7, 0.3, -11);
  std::istringstream in(curve_to_csv(c));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,value");
  for (std::size_t k = 0; k < c.size(); ++k) {
    ASSERT_TRUE(std::getline(in, line));
    const auto comma = line.find(',');
    EXPECT_EQ(*parse_real(line.substr(0, comma)), c.abscissa(k));
    EXPECT_EQ(*parse_real(line.substr(comma + 1)), c.values()[k]);
  }
}

TEST(Csv, CompareRowsJoinOnSharedAbscissae) {
  const SampledCurve a({1, 2, 3, 4}, 1, 1.0, 2);
  const SampledCurve b({10, 20, 30}, 1, 1.0, 4);
  EXPECT_EQ(aligned_csv(a, b, "p", "q"), "x,p,q\n1.75,3,10\n2.25,4,20\n");
  EXPECT_THROW((void)aligned_csv(a, SampledCurve({1.0}, 2, 1.0, 0), "p", "q"), InvariantError);
}

TEST(Config, JsonRoundTrip) {
  cli::RunConfig c;
  c.command = "gibbs";
  c.scheme = SchemeKind::Chaikin;
  c.boundary = BoundaryPolicy::Periodic;
  c.h = 0.1;
  c.domain = {-0.3, 0.7};
  c.h_list = {0.1, 1.0 / 3.0};
  c.k = {2};
  c.seed = 18446744073709551557ull;
  c.eps = 1.0 / 7.0;
  const nlohmann::json j = c;
  EXPECT_EQ(cli::config_from_json(nlohmann::json::parse(j.dump())), c);
  EXPECT_EQ(cli::config_from_json(nlohmann::json::object()), cli::RunConfig{});
  EXPECT_THROW((void)cli::config_from_json({{"bogus", 1}}), ConfigError);
  EXPECT_THROW((void)cli::config_from_json({{"scheme", "eno"}}), ConfigError);
  EXPECT_THROW((void)cli::config_from_json({{"levels", "many"}}), ConfigError);
}

// -- run --------------------------------------------------------------------

TEST_F(CliTest, RefineStepStaysInUnitInterval) {
  const auto out = tmp_ / "r.csv";
  ASSERT_EQ(run({"refine", "--builtin", "step", "--h", "0.125", "--scheme", "ppha", "--levels",
                 "6", "--out", out.string()}),
            0)
      << err_.str();
  std::istringstream in(slurp(out));
  std::string line;
  std::getline(in, line);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    const double v = *parse_real(line.substr(line.find(',') + 1));
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    ++rows;
  }
  EXPECT_GT(rows, 100u);
}

TEST_F(CliTest, GibbsReportsBothSchemes) {
  const auto out = tmp_ / "g.json";
  ASSERT_EQ(run({"gibbs", "--builtin", "eq21", "--h", "0.015625", "--levels", "3", "--out",
                 out.string(), "--curves-out", (tmp_ / "g").string()}),
            0)
      << err_.str();
  const auto j = nlohmann::json::parse(slurp(out));
  EXPECT_EQ(j["reports"]["ppha"]["overshoot"].get<double>(), 0.0);
  EXPECT_GT(j["reports"]["linear4"]["overshoot"].get<double>(), 0.03);
  EXPECT_TRUE(fs::exists(tmp_ / "g_ppha.csv"));
  EXPECT_TRUE(fs::exists(tmp_ / "g_linear4.csv"));
}

TEST_F(CliTest, RegularityBetaOneRow) {
  const auto out = tmp_ / "reg.json";
  ASSERT_EQ(run({"regularity", "--scheme", "ppha", "--jmin", "5", "--jmax", "10", "--builtin",
                 "delta", "--out", out.string()}),
            0)
      << err_.str();
  const auto j = nlohmann::json::parse(slurp(out));
  for (std::size_t i = 0; i < j["levels"].size(); ++i) {
    if (j["levels"][i].get<int>() >= 7) {
      EXPECT_NEAR(j["beta1"][i].get<double>(), 1.0, 0.01);
    }
  }
  EXPECT_EQ(j["protocol"]["initial_data"], "delta");
}

TEST_F(CliTest, ConfigFileWithFlagOverride) {
  const auto cfg = tmp_ / "c.json";
  std::ofstream(cfg) << R"({"command": "refine", "builtin": "exp", "levels": 1, "h": 0.125})";
  const auto a = tmp_ / "a.csv", b = tmp_ / "b.csv";
  ASSERT_EQ(run({"--config", cfg.string(), "refine", "--out", a.string()}), 0) << err_.str();
  ASSERT_EQ(run({"--config", cfg.string(), "refine", "--levels", "2", "--out", b.string()}), 0);
  const auto rows = [&](const fs::path& p) {
    const auto s = slurp(p);
    return std::count(s.begin(), s.end(), '\n') - 1;
  };
  EXPECT_EQ(rows(a), 2 * (8 - 3));
  EXPECT_EQ(rows(b), 2 * (10 - 3));

  // dumped config reloads to the same effective config
  const auto dumped = tmp_ / "d.json";
  ASSERT_EQ(run({"--config", cfg.string(), "refine", "--levels", "3", "--dump-config",
                 dumped.string()}),
            0);
  const auto reloaded = cli::load_config_file(dumped.string());
  EXPECT_EQ(reloaded.levels, 3);
  EXPECT_EQ(reloaded.builtin, "exp");
  EXPECT_EQ(reloaded.command, "refine");
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run({"refine", "--scheme", "eno", "--builtin", "exp"}), cli::kConfigError);
  EXPECT_EQ(run({"refine"}), cli::kConfigError);
  EXPECT_EQ(run({"frobnicate"}), cli::kConfigError);
  EXPECT_EQ(run({"refine", "--builtin", "nope"}), cli::kConfigError);
  const auto bad = tmp_ / "bad.csv";
  std::ofstream(bad) << "value\n1\nx\n";
  EXPECT_EQ(run({"refine", "--input", bad.string()}), cli::kInputError);
  EXPECT_NE(err_.str().find(":3:"), std::string::npos) << err_.str();
  EXPECT_EQ(run({"refine", "--input", (tmp_ / "missing.csv").string()}), cli::kInputError);
  EXPECT_EQ(run({"refine", "--input", "data/step5.csv", "--levels", "5"}), cli::kInsufficientData);
  const auto one = tmp_ / "one.csv";
  std::ofstream(one) << "value\n1\n";
  EXPECT_EQ(run({"refine", "--input", one.string(), "--boundary", "periodic"}),
            cli::kInsufficientData);
  EXPECT_EQ(run({"--help"}), cli::kOk);
}

TEST_F(CliTest, FailedRunLeavesNoPartialOutputs) {
  const auto out = tmp_ / "never.csv";
  EXPECT_EQ(run({"refine", "--input", "data/step5.csv", "--levels", "5", "--out", out.string()}),
            cli::kInsufficientData);
  EXPECT_FALSE(fs::exists(out));
  // second artifact cannot be opened: the first must be removed again
  const auto json = tmp_ / "g.json";
  EXPECT_NE(run({"gibbs", "--builtin", "step", "--h", "0.25", "--levels", "1", "--out",
                 json.string(), "--curves-out", (tmp_ / "no_such_dir" / "c").string()}),
            0);
  EXPECT_FALSE(fs::exists(json));
}

// -- golden files and determinism -------------------------------------------

TEST_F(CliTest, GoldenFilesAndByteDeterminism) {
  const bool update = std::getenv("PPHA_UPDATE_GOLDEN") != nullptr;
  for (const auto& gc : golden::cases()) {
    std::vector<std::string> outputs;
    for (int rep = 0; rep < 2; ++rep) {
      const auto stem = tmp_ / (gc.name + "_" + std::to_string(rep));
      auto args = gc.args;
      args.insert(args.end(), {"--out", stem.string() + gc.ext});
      if (!gc.extra.empty()) args.insert(args.end(), {"--curves-out", stem.string()});
      ASSERT_EQ(run(args), 0) << gc.name << ": " << err_.str();
      std::string all = slurp(stem.string() + gc.ext);
      for (const auto& e : gc.extra) all += "\n--- " + e + "\n" + slurp(stem.string() + e);
      outputs.push_back(all);
    }
    EXPECT_EQ(outputs[0], outputs[1]) << gc.name << " is not deterministic";
    const fs::path golden_path = fs::path("golden") / (gc.name + ".golden");
    if (update) {
      std::ofstream(golden_path, std::ios::binary) << outputs[0];
    } else {
      ASSERT_TRUE(fs::exists(golden_path)) << golden_path;
      EXPECT_EQ(outputs[0], slurp(golden_path)) << gc.name << " differs from " << golden_path;
    }
  }
}

#ifdef PPHA_CLI_PATH
TEST_F(CliTest, BinaryExitStatus) {
  const std::string bin = PPHA_CLI_PATH;
  const auto status = [](const std::string& cmd) {
    const int s = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  EXPECT_EQ(status(bin + " refine --builtin exp --levels 1 --out " + (tmp_ / "o.csv").string()), 0);
  EXPECT_EQ(status(bin + " refine --input data/step5.csv --levels 5"), 4);
  EXPECT_EQ(status(bin + " order --builtin delta"), 2);
}
#endif

}  // namespace
