#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "allocsim/engine.hpp"
#include "allocsim/errors.hpp"
#include "allocsim/io.hpp"
#include "allocsim/version.hpp"

using allocsim::ConfigError;
using allocsim::DesignKind;
using allocsim::EndpointKind;
using allocsim::Estimator;
using allocsim::MetricsSummary;
using allocsim::ScenarioConfig;
using allocsim::SequenceProcedure;

namespace {

const char* kFullConfig = R"({
  "endpoint": "binary",
  "arms": {"control": {"p": 0.05}, "treatment": {"p": 0.3}},
  "null_arms": {"control": {"p": 0.05}, "treatment": {"p": 0.05}},
  "n_total": 60,
  "alpha": 0.05,
  "designs": [
    {"kind": "er"},
    {"kind": "fur", "ratio": [1, 2], "procedure": "permuted_block", "block_size": 6},
    {"kind": "rar", "burn_in": 12, "gamma": 0.25, "estimator": "mle"}
  ],
  "replications": 2500,
  "seed": 20250822
})";

void expect_config_error(const std::string& text, const std::string& needle) {
  try {
    allocsim::parse_config(text);
    FAIL_CHECK("expected ConfigError for: " << needle);
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CAPTURE(what);
    CHECK(what.find(needle) != std::string::npos);
  }
}

std::filesystem::path fresh_dir(const char* name) {
  const std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "allocsim_io_tests" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("a full config document parses field by field") {
  const ScenarioConfig cfg = allocsim::parse_config(kFullConfig);
  CHECK(cfg.endpoint == EndpointKind::Binary);
  CHECK(cfg.arms_alt.control.p == 0.05);
  CHECK(cfg.arms_alt.treatment.p == 0.3);
  CHECK(cfg.arms_null.treatment.p == 0.05);
  CHECK(cfg.n_total == 60);
  CHECK(cfg.alpha == 0.05);
  CHECK(cfg.replications == 2500);
  CHECK(cfg.master_seed == 20250822);
  REQUIRE(cfg.designs.size() == 3);
  CHECK(cfg.designs[0].kind == DesignKind::Er);
  CHECK(cfg.designs[1].kind == DesignKind::Fur);
  CHECK(cfg.designs[1].ratio0 == 1);
  CHECK(cfg.designs[1].ratio1 == 2);
  CHECK(cfg.designs[1].procedure == SequenceProcedure::PermutedBlock);
  CHECK(cfg.designs[1].block_size == 6);
  CHECK(cfg.designs[2].kind == DesignKind::Rar);
  CHECK(cfg.designs[2].burn_in == 12);
  CHECK(cfg.designs[2].gamma == 0.25);
  CHECK(cfg.designs[2].estimator == Estimator::Mle);
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("optional keys default") {
  const ScenarioConfig cfg = allocsim::parse_config(R"({
    "endpoint": "continuous",
    "arms": {"control": {"mu": 0, "sigma": 0.5}, "treatment": {"mu": 0.5, "sigma": 2}},
    "null_arms": {"control": {"mu": 0, "sigma": 0.5}, "treatment": {"mu": 0, "sigma": 0.5}},
    "n_total": 350,
    "designs": [{"kind": "er"}]
  })");
  CHECK(cfg.alpha == 0.05);
  CHECK(cfg.replications == 100000);
  CHECK(cfg.master_seed == 0);
  CHECK(cfg.arms_alt.treatment.sigma == 2.0);
}

TEST_CASE("diagnostics name the offending key") {
  expect_config_error("{", "config is not valid JSON");
  expect_config_error("[1,2]", "config must be a JSON object");
  expect_config_error(R"({"endpoint": "binary", "frobnicate": 1})", "frobnicate");
  expect_config_error(R"({"arms": {}})", "\"endpoint\"");
  expect_config_error(R"({"endpoint": "ordinal"})",
                      "endpoint must be \"binary\" or \"continuous\"");

  const std::string base = R"({
    "endpoint": "binary",
    "arms": {"control": {"p": 0.05}, "treatment": {"p": 0.3}},
    "null_arms": {"control": {"p": 0.05}, "treatment": {"p": 0.05}},
    "n_total": 60,
    "designs": [{"kind": "er"}]
  })";

  auto with = [&](const std::string& needle, const std::string& replacement) {
    std::string text = base;
    text.replace(text.find(needle), needle.size(), replacement);
    return text;
  };

  // A binary arm cannot carry normal parameters, and vice versa.
  expect_config_error(with(R"("control": {"p": 0.05})", R"("control": {"mu": 0})"),
                      "arms.control: unknown key \"mu\"");
  expect_config_error(with(R"({"kind": "er"})", R"({"kind": "spin"})"),
                      "designs[0].kind must be \"er\", \"fur\" or \"rar\"");
  expect_config_error(with(R"({"kind": "er"})", R"({"kind": "fur"})"),
                      "designs[0]: missing key \"ratio\"");
  expect_config_error(with(R"({"kind": "er"})", R"({"kind": "fur", "ratio": [1]})"),
                      "ratio must be a two-element array");
  expect_config_error(with(R"({"kind": "er"})", R"({"kind": "rar"})"),
                      "designs[0]: missing key \"burn_in\"");
  expect_config_error(
      with(R"({"kind": "er"})", R"({"kind": "rar", "burn_in": 12, "estimator": "map"})"),
      "estimator must be \"shrunk\" or \"mle\"");
  expect_config_error(with(R"({"kind": "er"})", R"({"kind": "er", "block_size": 4})"),
                      "block_size requires procedure \"permuted_block\"");
  expect_config_error(with(R"({"kind": "er"})",
                           R"({"kind": "er", "procedure": "permuted_block"})"),
                      "designs[0]: missing key \"block_size\"");
  expect_config_error(with(R"("n_total": 60,)", R"("n_total": 60, "seed": -4,)"),
                      "seed must be a non-negative integer");
  expect_config_error(with(R"("n_total": 60,)", R"("n_total": 60.5,)"),
                      "n_total must be an integer");
  expect_config_error(
      with(R"("p": 0.3)", R"("p": 1.3)"), "arms.treatment");
}

TEST_CASE("config serialization round-trips") {
  const ScenarioConfig cfg = allocsim::parse_config(kFullConfig);
  const ScenarioConfig back = allocsim::parse_config(allocsim::config_to_json(cfg));
  CHECK(back.endpoint == cfg.endpoint);
  CHECK(back.arms_alt.control.p == cfg.arms_alt.control.p);
  CHECK(back.arms_alt.treatment.p == cfg.arms_alt.treatment.p);
  CHECK(back.arms_null.control.p == cfg.arms_null.control.p);
  CHECK(back.n_total == cfg.n_total);
  CHECK(back.alpha == cfg.alpha);
  CHECK(back.replications == cfg.replications);
  CHECK(back.master_seed == cfg.master_seed);
  REQUIRE(back.designs.size() == cfg.designs.size());
  for (size_t i = 0; i < cfg.designs.size(); ++i) {
    CHECK(back.designs[i].kind == cfg.designs[i].kind);
    CHECK(back.designs[i].ratio0 == cfg.designs[i].ratio0);
    CHECK(back.designs[i].ratio1 == cfg.designs[i].ratio1);
    CHECK(back.designs[i].procedure == cfg.designs[i].procedure);
    CHECK(back.designs[i].block_size == cfg.designs[i].block_size);
    CHECK(back.designs[i].burn_in == cfg.designs[i].burn_in);
    CHECK(back.designs[i].gamma == cfg.designs[i].gamma);
    CHECK(back.designs[i].estimator == cfg.designs[i].estimator);
  }
}

TEST_CASE("CSV layouts are fixed") {
  MetricsSummary row{};
  row.design = "ER";
  row.alternative = false;
  row.rejection_rate = 0.051234567;
  row.rejection_mcse = 0.00069717;
  row.mean_prop_arm1 = 0.5;
  row.mean_outcome = 10.4994;
  row.replications = 100000;
  const auto summary = lines_of(allocsim::summary_csv({row}));
  REQUIRE(summary.size() == 2);
  CHECK(summary[0] ==
        "design,hypothesis,rejection_rate,rejection_mcse,mean_prop_arm1,mean_outcome,"
        "replications");
  CHECK(summary[1] == "ER,null,0.0512346,0.00069717,0.5,10.4994,100000");

  const auto curve = lines_of(allocsim::neyman_curve_csv(allocsim::neyman_curve(
      0.05, {0.3})));
  REQUIRE(curve.size() == 2);
  CHECK(curve[0] == "p1,rho_n1,rho_er");
  CHECK(curve[1] == "0.3,0.677693,0.5");

  const auto scan = lines_of(allocsim::power_scan_csv(
      {{1, 2, 0.815, 0.0012256, 13.0021}}));
  REQUIRE(scan.size() == 2);
  CHECK(scan[0] == "ratio,power,mcse,mean_outcome");
  CHECK(scan[1] == "1:2,0.815,0.0012256,13.0021");
}

TEST_CASE("the manifest reproduces the run") {
  ScenarioConfig cfg = allocsim::parse_config(kFullConfig);
  cfg.replications = 200;
  const auto rows = allocsim::run_monte_carlo(cfg, 2);
  const std::string text = allocsim::manifest_json(cfg, rows, 1.25);

  const nlohmann::json root = nlohmann::json::parse(text);
  CHECK(root.at("tool") == "allocsim");
  CHECK(root.at("version") == allocsim::version);
  CHECK(root.at("seed") == 20250822);
  CHECK(root.at("duration_seconds") == 1.25);

  const ScenarioConfig echoed = allocsim::parse_config(root.at("config").dump());
  CHECK(echoed.replications == 200);
  CHECK(echoed.master_seed == cfg.master_seed);
  CHECK(echoed.designs.size() == cfg.designs.size());

  REQUIRE(root.at("results").size() == rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto& r = root.at("results").at(i);
    CHECK(r.at("design") == rows[i].design);
    CHECK(r.at("hypothesis") == (rows[i].alternative ? "alternative" : "null"));
    CHECK(r.at("rejection_rate") == rows[i].rejection_rate);
    CHECK(r.at("mean_prop_arm1") == rows[i].mean_prop_arm1);
    CHECK(r.at("mean_outcome") == rows[i].mean_outcome);
    CHECK(r.at("replications") == rows[i].replications);
    CHECK(r.at("type1_inflated").is_boolean());
  }
}

TEST_CASE("simulate subcommand writes its outputs and repeats exactly") {
  const auto dir = fresh_dir("simulate");
  const std::string config_path = (dir / "config.json").string();
  allocsim::write_file(config_path, kFullConfig);

  allocsim::SimulateOptions opt;
  opt.config_path = config_path;
  opt.replications = 500;
  opt.seed = 7;
  opt.out_dir = (dir / "a").string();
  opt.threads = 2;

  std::ostringstream out, err;
  REQUIRE(allocsim::cmd_simulate(opt, out, err) == 0);
  CHECK(err.str().empty());
  CHECK(out.str().find("ER null") != std::string::npos);
  CHECK(std::filesystem::exists(dir / "a" / "summary.csv"));
  CHECK(std::filesystem::exists(dir / "a" / "manifest.json"));

  allocsim::SimulateOptions again = opt;
  again.out_dir = (dir / "b").string();
  std::ostringstream out2, err2;
  REQUIRE(allocsim::cmd_simulate(again, out2, err2) == 0);
  CHECK(allocsim::read_file((dir / "a" / "summary.csv").string()) ==
        allocsim::read_file((dir / "b" / "summary.csv").string()));
  CHECK(out.str() == out2.str());

  // Overrides land in the manifest echo, so the manifest alone reproduces
  // the run.
  const nlohmann::json manifest =
      nlohmann::json::parse(allocsim::read_file((dir / "a" / "manifest.json").string()));
  CHECK(manifest.at("config").at("replications") == 500);
  CHECK(manifest.at("config").at("seed") == 7);
  CHECK(manifest.at("seed") == 7);
  CHECK(manifest.at("duration_seconds").get<double>() >= 0.0);
}

TEST_CASE("simulate subcommand reports config problems on stderr") {
  const auto dir = fresh_dir("simulate_errors");

  allocsim::SimulateOptions opt;
  opt.config_path = (dir / "missing.json").string();
  std::ostringstream out, err;
  CHECK(allocsim::cmd_simulate(opt, out, err) == 2);
  CHECK(err.str().rfind("config error:", 0) == 0);
  CHECK(err.str().find("cannot read config file") != std::string::npos);

  const std::string bad_path = (dir / "bad.json").string();
  allocsim::write_file(bad_path, "{ not json");
  opt.config_path = bad_path;
  std::ostringstream out2, err2;
  CHECK(allocsim::cmd_simulate(opt, out2, err2) == 2);
  CHECK(err2.str().find("config is not valid JSON") != std::string::npos);

  const std::string good_path = (dir / "good.json").string();
  allocsim::write_file(good_path, kFullConfig);
  opt.config_path = good_path;
  opt.replications = 0;
  std::ostringstream out3, err3;
  CHECK(allocsim::cmd_simulate(opt, out3, err3) == 2);
  CHECK(err3.str().find("replications must be ≥ 1") != std::string::npos);
}

TEST_CASE("curve subcommand writes the default grid") {
  const auto dir = fresh_dir("curve");
  allocsim::NeymanCurveOptions opt;
  opt.p0 = 0.05;
  opt.out_dir = dir.string();
  std::ostringstream out, err;
  REQUIRE(allocsim::cmd_neyman_curve(opt, out, err) == 0);

  const auto lines = lines_of(allocsim::read_file((dir / "neyman_curve.csv").string()));
  REQUIRE(lines.size() == 100);  // header + 99 grid points
  CHECK(lines[0] == "p1,rho_n1,rho_er");
  CHECK(lines[1].rfind("0.01,", 0) == 0);
  CHECK(lines[99].rfind("0.99,", 0) == 0);

  allocsim::NeymanCurveOptions bad = opt;
  bad.p0 = 1.5;
  std::ostringstream out2, err2;
  CHECK(allocsim::cmd_neyman_curve(bad, out2, err2) == 2);
  CHECK(err2.str().find("p0 must be in (0,1)") != std::string::npos);
}

TEST_CASE("curve rows reflect when both rates flip") {
  const auto lo = fresh_dir("curve_lo");
  const auto hi = fresh_dir("curve_hi");
  std::ostringstream sink;
  allocsim::NeymanCurveOptions opt;
  opt.p0 = 0.01;
  opt.out_dir = lo.string();
  REQUIRE(allocsim::cmd_neyman_curve(opt, sink, sink) == 0);
  opt.p0 = 0.99;
  opt.out_dir = hi.string();
  REQUIRE(allocsim::cmd_neyman_curve(opt, sink, sink) == 0);

  const auto a = lines_of(allocsim::read_file((lo / "neyman_curve.csv").string()));
  const auto b = lines_of(allocsim::read_file((hi / "neyman_curve.csv").string()));
  REQUIRE(a.size() == 100);
  REQUIRE(b.size() == 100);
  for (int k = 1; k <= 99; ++k) {
    // row for p1 = k/100 against p0 = 0.01 pairs with p1 = (100-k)/100
    // against p0 = 0.99
    const std::string& row_a = a[k];
    const std::string& row_b = b[100 - k];
    const double rho_a = std::strtod(row_a.c_str() + row_a.find(',') + 1, nullptr);
    const double rho_b = std::strtod(row_b.c_str() + row_b.find(',') + 1, nullptr);
    CHECK(std::fabs(rho_a - rho_b) < 2e-6);
  }
}

TEST_CASE("scan subcommand mirrors the simulate cell for the same design slot") {
  const auto dir = fresh_dir("scan");
  const std::string config_path = (dir / "config.json").string();
  // designs[0] is ER, so a lone 1:1 scan row replays design slot 0 under the
  // alternative and the printed rates must agree to the last digit.
  allocsim::write_file(config_path, R"({
    "endpoint": "binary",
    "arms": {"control": {"p": 0.05}, "treatment": {"p": 0.3}},
    "null_arms": {"control": {"p": 0.05}, "treatment": {"p": 0.05}},
    "n_total": 60,
    "designs": [{"kind": "er"}],
    "replications": 500,
    "seed": 11
  })");

  allocsim::PowerScanOptions scan_opt;
  scan_opt.config_path = config_path;
  scan_opt.ratios = {{1, 1}};
  scan_opt.out_dir = (dir / "scan_out").string();
  std::ostringstream out, err;
  REQUIRE(allocsim::cmd_power_scan(scan_opt, out, err) == 0);

  allocsim::SimulateOptions sim_opt;
  sim_opt.config_path = config_path;
  sim_opt.out_dir = (dir / "sim_out").string();
  std::ostringstream out2, err2;
  REQUIRE(allocsim::cmd_simulate(sim_opt, out2, err2) == 0);

  const auto scan_lines =
      lines_of(allocsim::read_file((dir / "scan_out" / "power_scan.csv").string()));
  const auto sim_lines =
      lines_of(allocsim::read_file((dir / "sim_out" / "summary.csv").string()));
  REQUIRE(scan_lines.size() == 2);
  REQUIRE(sim_lines.size() == 3);
  CHECK(scan_lines[0] == "ratio,power,mcse,mean_outcome");
  CHECK(scan_lines[1].rfind("1:1,", 0) == 0);

  // summary row: design,hypothesis,rate,... ; scan row: ratio,power,...
  const std::string alt_row = sim_lines[2];
  std::istringstream alt(alt_row);
  std::string field;
  std::getline(alt, field, ',');
  CHECK(field == "ER");
  std::getline(alt, field, ',');
  CHECK(field == "alternative");
  std::getline(alt, field, ',');
  const std::string rate = field;

  std::istringstream scan_row(scan_lines[1]);
  std::getline(scan_row, field, ',');
  std::getline(scan_row, field, ',');
  CHECK(field == rate);

  allocsim::PowerScanOptions empty = scan_opt;
  empty.ratios.clear();
  std::ostringstream out3, err3;
  CHECK(allocsim::cmd_power_scan(empty, out3, err3) == 2);
  CHECK(err3.str().find("ratio list must not be empty") != std::string::npos);
}
