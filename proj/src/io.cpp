#include "allocsim/io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "allocsim/version.hpp"

namespace allocsim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw ConfigError(message); }

void ensure_object(const json& v, const std::string& where) {
  if (!v.is_object()) fail(where + " must be a JSON object");
}

void reject_unknown_keys(const json& obj, const std::string& where,
                         std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) fail(where + ": unknown key \"" + item.key() + "\"");
  }
}

const json& require_key(const json& obj, const std::string& where, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(where + ": missing key \"" + key + "\"");
  return *it;
}

double get_number(const json& v, const std::string& where) {
  if (!v.is_number()) fail(where + " must be a number");
  return v.get<double>();
}

long long get_integer(const json& v, const std::string& where) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    fail(where + " must be an integer");
  }
  return v.get<long long>();
}

int get_int(const json& v, const std::string& where) {
  const long long n = get_integer(v, where);
  if (n < std::numeric_limits<int>::min() || n > std::numeric_limits<int>::max()) {
    fail(where + " is out of range");
  }
  return static_cast<int>(n);
}

EndpointModel parse_arm(EndpointKind kind, const json& v, const std::string& where) {
  ensure_object(v, where);
  try {
    if (kind == EndpointKind::Binary) {
      reject_unknown_keys(v, where, {"p"});
      return EndpointModel::binary(get_number(require_key(v, where, "p"), where + ".p"));
    }
    reject_unknown_keys(v, where, {"mu", "sigma"});
    return EndpointModel::continuous(
        get_number(require_key(v, where, "mu"), where + ".mu"),
        get_number(require_key(v, where, "sigma"), where + ".sigma"));
  } catch (const std::invalid_argument& e) {
    fail(where + ": " + e.what());
  }
}

ArmPair parse_arm_pair(EndpointKind kind, const json& v, const std::string& where) {
  ensure_object(v, where);
  reject_unknown_keys(v, where, {"control", "treatment"});
  return {parse_arm(kind, require_key(v, where, "control"), where + ".control"),
          parse_arm(kind, require_key(v, where, "treatment"), where + ".treatment")};
}

void parse_procedure(const json& v, const std::string& where, DesignSpec& d) {
  if (const auto it = v.find("procedure"); it != v.end()) {
    const std::string name = it->is_string() ? it->get<std::string>() : "";
    if (name == "random_allocation") {
      d.procedure = SequenceProcedure::RandomAllocation;
    } else if (name == "permuted_block") {
      d.procedure = SequenceProcedure::PermutedBlock;
      d.block_size = get_int(require_key(v, where, "block_size"), where + ".block_size");
    } else {
      fail(where + ".procedure must be \"random_allocation\" or \"permuted_block\"");
    }
  } else if (v.contains("block_size")) {
    fail(where + ".block_size requires procedure \"permuted_block\"");
  }
}

DesignSpec parse_design(const json& v, const std::string& where) {
  ensure_object(v, where);
  const json& kind_value = require_key(v, where, "kind");
  const std::string kind = kind_value.is_string() ? kind_value.get<std::string>() : "";
  if (kind == "er") {
    reject_unknown_keys(v, where, {"kind", "procedure", "block_size"});
    DesignSpec d = DesignSpec::er();
    parse_procedure(v, where, d);
    return d;
  }
  if (kind == "fur") {
    reject_unknown_keys(v, where, {"kind", "ratio", "procedure", "block_size"});
    const json& ratio = require_key(v, where, "ratio");
    if (!ratio.is_array() || ratio.size() != 2) {
      fail(where + ".ratio must be a two-element array [r0, r1]");
    }
    DesignSpec d = DesignSpec::fur(get_int(ratio[0], where + ".ratio[0]"),
                                   get_int(ratio[1], where + ".ratio[1]"));
    parse_procedure(v, where, d);
    return d;
  }
  if (kind == "rar") {
    reject_unknown_keys(v, where, {"kind", "burn_in", "gamma", "estimator"});
    DesignSpec d = DesignSpec::rar(
        get_int(require_key(v, where, "burn_in"), where + ".burn_in"));
    if (const auto it = v.find("gamma"); it != v.end()) {
      d.gamma = get_number(*it, where + ".gamma");
    }
    if (const auto it = v.find("estimator"); it != v.end()) {
      const std::string name = it->is_string() ? it->get<std::string>() : "";
      if (name == "shrunk") {
        d.estimator = Estimator::Shrunk;
      } else if (name == "mle") {
        d.estimator = Estimator::Mle;
      } else {
        fail(where + ".estimator must be \"shrunk\" or \"mle\"");
      }
    }
    return d;
  }
  fail(where + ".kind must be \"er\", \"fur\" or \"rar\"");
}

json arm_to_json(const EndpointModel& m) {
  if (m.kind == EndpointKind::Binary) return json{{"p", m.p}};
  return json{{"mu", m.mu}, {"sigma", m.sigma}};
}

json arm_pair_to_json(const ArmPair& arms) {
  return json{{"control", arm_to_json(arms.control)},
              {"treatment", arm_to_json(arms.treatment)}};
}

json design_to_json(const DesignSpec& d) {
  json v;
  switch (d.kind) {
    case DesignKind::Er:
      v["kind"] = "er";
      break;
    case DesignKind::Fur:
      v["kind"] = "fur";
      v["ratio"] = json::array({d.ratio0, d.ratio1});
      break;
    case DesignKind::Rar:
      v["kind"] = "rar";
      v["burn_in"] = d.burn_in;
      v["gamma"] = d.gamma;
      if (d.estimator == Estimator::Mle) v["estimator"] = "mle";
      return v;
  }
  if (d.procedure == SequenceProcedure::PermutedBlock) {
    v["procedure"] = "permuted_block";
    v["block_size"] = d.block_size;
  }
  return v;
}

std::string format_g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

ScenarioConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("config is not valid JSON: ") + e.what());
  }
  ensure_object(root, "config");
  reject_unknown_keys(root, "config",
                      {"endpoint", "arms", "null_arms", "n_total", "alpha", "designs",
                       "replications", "seed"});

  ScenarioConfig cfg;
  const json& endpoint = require_key(root, "config", "endpoint");
  const std::string kind = endpoint.is_string() ? endpoint.get<std::string>() : "";
  if (kind == "binary") {
    cfg.endpoint = EndpointKind::Binary;
  } else if (kind == "continuous") {
    cfg.endpoint = EndpointKind::Continuous;
  } else {
    fail("endpoint must be \"binary\" or \"continuous\"");
  }

  cfg.arms_alt = parse_arm_pair(cfg.endpoint, require_key(root, "config", "arms"), "arms");
  cfg.arms_null =
      parse_arm_pair(cfg.endpoint, require_key(root, "config", "null_arms"), "null_arms");
  cfg.n_total = get_int(require_key(root, "config", "n_total"), "n_total");

  if (const auto it = root.find("alpha"); it != root.end()) {
    cfg.alpha = get_number(*it, "alpha");
  }
  if (const auto it = root.find("replications"); it != root.end()) {
    cfg.replications = get_integer(*it, "replications");
  }
  if (const auto it = root.find("seed"); it != root.end()) {
    const long long seed = get_integer(*it, "seed");
    if (seed < 0) fail("seed must be a non-negative integer");
    cfg.master_seed = static_cast<std::uint64_t>(seed);
  }

  const json& designs = require_key(root, "config", "designs");
  if (!designs.is_array()) fail("designs must be an array");
  for (size_t i = 0; i < designs.size(); ++i) {
    cfg.designs.push_back(parse_design(designs[i], "designs[" + std::to_string(i) + "]"));
  }
  return cfg;
}

ScenarioConfig load_config(const std::string& path) { return parse_config(read_file(path)); }

std::string config_to_json(const ScenarioConfig& config) {
  json root;
  root["endpoint"] = config.endpoint == EndpointKind::Binary ? "binary" : "continuous";
  root["arms"] = arm_pair_to_json(config.arms_alt);
  root["null_arms"] = arm_pair_to_json(config.arms_null);
  root["n_total"] = config.n_total;
  root["alpha"] = config.alpha;
  root["designs"] = json::array();
  for (const DesignSpec& d : config.designs) root["designs"].push_back(design_to_json(d));
  root["replications"] = config.replications;
  root["seed"] = config.master_seed;
  return root.dump(2) + "\n";
}

std::string summary_csv(const std::vector<MetricsSummary>& rows) {
  std::string out =
      "design,hypothesis,rejection_rate,rejection_mcse,mean_prop_arm1,mean_outcome,"
      "replications\n";
  for (const MetricsSummary& r : rows) {
    out += r.design;
    out += r.alternative ? ",alternative," : ",null,";
    out += format_g(r.rejection_rate);
    out += ',';
    out += format_g(r.rejection_mcse);
    out += ',';
    out += format_g(r.mean_prop_arm1);
    out += ',';
    out += format_g(r.mean_outcome);
    out += ',';
    out += std::to_string(r.replications);
    out += '\n';
  }
  return out;
}

std::string neyman_curve_csv(const std::vector<NeymanPoint>& rows) {
  std::string out = "p1,rho_n1,rho_er\n";
  for (const NeymanPoint& r : rows) {
    out += format_g(r.p1);
    out += ',';
    out += format_g(r.rho_n1);
    out += ',';
    out += format_g(r.rho_er);
    out += '\n';
  }
  return out;
}

std::string power_scan_csv(const std::vector<PowerScanRow>& rows) {
  std::string out = "ratio,power,mcse,mean_outcome\n";
  for (const PowerScanRow& r : rows) {
    out += std::to_string(r.ratio0);
    out += ':';
    out += std::to_string(r.ratio1);
    out += ',';
    out += format_g(r.power);
    out += ',';
    out += format_g(r.mcse);
    out += ',';
    out += format_g(r.mean_outcome);
    out += '\n';
  }
  return out;
}

std::string manifest_json(const ScenarioConfig& config,
                          const std::vector<MetricsSummary>& rows,
                          double duration_seconds) {
  json root;
  root["tool"] = "allocsim";
  root["version"] = version;
  root["seed"] = config.master_seed;
  root["duration_seconds"] = duration_seconds;
  root["config"] = json::parse(config_to_json(config));
  root["results"] = json::array();
  for (const MetricsSummary& r : rows) {
    root["results"].push_back({{"design", r.design},
                               {"hypothesis", r.alternative ? "alternative" : "null"},
                               {"rejection_rate", r.rejection_rate},
                               {"rejection_mcse", r.rejection_mcse},
                               {"mean_prop_arm1", r.mean_prop_arm1},
                               {"mean_outcome", r.mean_outcome},
                               {"replications", r.replications},
                               {"type1_inflated", r.type1_inflated}});
  }
  return root.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot read config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

namespace {

void apply_overrides(ScenarioConfig& cfg, const std::optional<std::uint64_t>& seed,
                     const std::optional<long long>& replications) {
  if (seed) cfg.master_seed = *seed;
  if (replications) cfg.replications = *replications;
}

std::string output_path(const std::string& out_dir, const char* name) {
  std::filesystem::create_directories(out_dir);
  return (std::filesystem::path(out_dir) / name).string();
}

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    body();
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int cmd_simulate(const SimulateOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ScenarioConfig cfg = load_config(options.config_path);
    apply_overrides(cfg, options.seed, options.replications);
    cfg.validate();

    const auto start = std::chrono::steady_clock::now();
    const std::vector<MetricsSummary> rows = run_monte_carlo(cfg, options.threads);
    const double duration =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    write_file(output_path(options.out_dir, "summary.csv"), summary_csv(rows));
    write_file(output_path(options.out_dir, "manifest.json"),
               manifest_json(cfg, rows, duration));

    for (const MetricsSummary& r : rows) {
      out << r.design << ' ' << (r.alternative ? "alternative" : "null")
          << ": rejection_rate=" << format_g(r.rejection_rate)
          << " mean_prop_arm1=" << format_g(r.mean_prop_arm1)
          << " mean_outcome=" << format_g(r.mean_outcome) << '\n';
      if (r.type1_inflated) {
        out << "warning: " << r.design << " null rejection rate "
            << format_g(100.0 * r.rejection_rate) << "% exceeds alpha "
            << format_g(100.0 * cfg.alpha) << "% (type-I error inflation)\n";
      }
    }
  });
}

int cmd_neyman_curve(const NeymanCurveOptions& options, std::ostream& out,
                     std::ostream& err) {
  return guarded(err, [&] {
    if (!(options.p0 > 0.0 && options.p0 < 1.0)) fail("p0 must be in (0,1)");
    if (!(options.grid_step > 0.0)) fail("grid step must be > 0");
    if (!(options.grid_min > 0.0 && options.grid_max < 1.0 &&
          options.grid_min <= options.grid_max)) {
      fail("grid must satisfy 0 < min <= max < 1");
    }

    std::vector<double> grid;
    if (options.grid_min == 0.01 && options.grid_max == 0.99 &&
        options.grid_step == 0.01) {
      grid = default_p_grid();
    } else {
      const int count = static_cast<int>(
          std::floor((options.grid_max - options.grid_min) / options.grid_step + 1e-9));
      for (int i = 0; i <= count; ++i) grid.push_back(options.grid_min + i * options.grid_step);
    }

    const std::vector<NeymanPoint> rows = neyman_curve(options.p0, grid);
    const std::string path = output_path(options.out_dir, "neyman_curve.csv");
    write_file(path, neyman_curve_csv(rows));
    out << "wrote " << rows.size() << " grid points to " << path << '\n';
  });
}

int cmd_power_scan(const PowerScanOptions& options, std::ostream& out,
                   std::ostream& err) {
  return guarded(err, [&] {
    ScenarioConfig cfg = load_config(options.config_path);
    apply_overrides(cfg, options.seed, options.replications);

    const std::vector<PowerScanRow> rows =
        power_scan(cfg, options.ratios, options.threads);
    const std::string path = output_path(options.out_dir, "power_scan.csv");
    write_file(path, power_scan_csv(rows));
    for (const PowerScanRow& r : rows) {
      out << r.ratio0 << ':' << r.ratio1 << " power=" << format_g(r.power)
          << " mean_outcome=" << format_g(r.mean_outcome) << '\n';
    }
  });
}

}
