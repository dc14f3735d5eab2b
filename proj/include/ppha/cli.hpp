#pragma once

// Command-line front end. `execute` turns a RunConfig into in-memory
// artifacts; `run` parses argv, executes and writes the files, mapping
// library errors to exit codes.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ppha/analysis.hpp"
#include "ppha/error.hpp"
#include "ppha/io.hpp"
#include "ppha/schemes.hpp"

namespace ppha::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kInputError = 3,
  kInsufficientData = 4,
  kInternalError = 5,
};

struct RunConfig {
  std::string command;                            // refine|regularity|order|gibbs|stability|compare
  SchemeKind scheme = SchemeKind::PPHA;           // also scheme A for compare
  SchemeKind scheme_b = SchemeKind::LinearShifted4pt;
  int levels = 4;
  BoundaryPolicy boundary = BoundaryPolicy::Shrink;
  std::string input;                              // CSV path
  std::string builtin;                            // sampler name
  double h = 1.0 / 32.0;
  std::vector<double> domain;                     // empty: sampler default
  std::string out;                                // empty: stdout
  std::string curves_out;                         // gibbs CSV prefix
  std::uint64_t seed = 1;
  std::vector<int> k;                             // empty: both orders
  int jmin = 5;
  int jmax = 10;
  std::vector<double> h_list = {1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0};
  double eps = 1e-6;
  int trials = 100;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(RunConfig, command, scheme, scheme_b, levels, boundary, input,
                                   builtin, h, domain, out, curves_out, seed, k, jmin, jmax, h_list,
                                   eps, trials)

/// Strict load: unknown keys and unknown enum names are config errors.
[[nodiscard]] inline RunConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  const nlohmann::json defaults = RunConfig{};
  nlohmann::json merged = defaults;
  for (const auto& [key, value] : j.items()) {
    if (!defaults.contains(key)) throw ConfigError("config: unknown key '" + key + "'");
    merged[key] = value;
  }
  for (const char* key : {"scheme", "scheme_b"}) {
    if (!parse_scheme(merged[key].get<std::string>())) {
      throw ConfigError("config: unknown scheme '" + merged[key].get<std::string>() + "'");
    }
  }
  if (!parse_boundary_policy(merged["boundary"].get<std::string>())) {
    throw ConfigError("config: unknown boundary '" + merged["boundary"].get<std::string>() + "'");
  }
  try {
    return merged.get<RunConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

[[nodiscard]] inline RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  try {
    return config_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config: " + path + ": " + e.what());
  }
}

struct Artifact {
  std::string path;  // empty: stdout
  std::string content;
};

namespace detail {

struct LoadedInput {
  SampledCurve curve;
  std::optional<BuiltinSampler> sampler;
};

inline LoadedInput load_input(const RunConfig& cfg) {
  if (!cfg.input.empty() && !cfg.builtin.empty()) {
    throw ConfigError("give either --input or --builtin, not both");
  }
  if (!(cfg.h > 0.0)) throw ConfigError("--h must be positive");
  if (!cfg.input.empty()) return {read_curve_csv(cfg.input, cfg.h), std::nullopt};
  if (cfg.builtin.empty()) throw ConfigError("no input: give --input FILE or --builtin NAME");
  auto s = builtin_sampler(cfg.builtin);
  std::optional<std::pair<double, double>> dom;
  if (!cfg.domain.empty()) {
    if (cfg.domain.size() != 2 || !(cfg.domain[0] <= cfg.domain[1])) {
      throw ConfigError("--domain expects LO,HI with LO <= HI");
    }
    dom = std::pair{cfg.domain[0], cfg.domain[1]};
  }
  auto curve = sample_builtin(s, cfg.h, dom);
  return {std::move(curve), std::move(s)};
}

inline void require_finite(const SampledCurve& c, const char* what) {
  for (double v : c.values()) {
    if (!std::isfinite(v)) throw InvariantError(std::string(what) + ": non-finite refined value");
  }
}

inline std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

inline nlohmann::json input_protocol(const RunConfig& cfg, const SampledCurve& c) {
  return {{"source", cfg.input.empty() ? "builtin:" + cfg.builtin : "file:" + cfg.input},
          {"h", cfg.h},
          {"samples", c.size()},
          {"origin", c.origin()}};
}

}  // namespace detail

/// Runs one command; nothing is written here.
[[nodiscard]] inline std::vector<Artifact> execute(const RunConfig& cfg) {
  using detail::load_input;
  if (cfg.levels < 0) throw ConfigError("--levels must be nonnegative");
  const std::string& cmd = cfg.command;

  if (cmd == "refine") {
    const auto in = load_input(cfg);
    const auto out = refine_to_level(in.curve, cfg.scheme, cfg.boundary, cfg.levels);
    detail::require_finite(out, "refine");
    return {{cfg.out, curve_to_csv(out)}};
  }

  if (cmd == "compare") {
    const auto in = load_input(cfg);
    const auto a = refine_to_level(in.curve, cfg.scheme, cfg.boundary, cfg.levels);
    const auto b = refine_to_level(in.curve, cfg.scheme_b, cfg.boundary, cfg.levels);
    detail::require_finite(a, "compare");
    detail::require_finite(b, "compare");
    return {{cfg.out, aligned_csv(a, b, to_string(cfg.scheme), to_string(cfg.scheme_b))}};
  }

  if (cmd == "regularity") {
    const auto in = load_input(cfg);
    std::vector<int> orders = cfg.k.empty() ? std::vector<int>{1, 2} : cfg.k;
    const std::string tag = cfg.input.empty() ? cfg.builtin : "file:" + cfg.input;
    const auto rep = regularity_report(in.curve, cfg.scheme, cfg.jmin, cfg.jmax, orders, tag);
    nlohmann::json j = rep;
    j["protocol"]["input"] = detail::input_protocol(cfg, in.curve);
    return {{cfg.out, detail::dump(j)}};
  }

  if (cmd == "order") {
    const auto in = load_input(cfg);
    if (!in.sampler || !in.sampler->function) {
      throw ConfigError("order needs a function builtin (exp, sinpi, quadratic:...)");
    }
    const double lo = cfg.domain.empty() ? in.sampler->domain_lo : cfg.domain[0];
    const double hi = cfg.domain.empty() ? in.sampler->domain_hi : cfg.domain[1];
    for (double h : cfg.h_list) {
      if (!(h > 0.0)) throw ConfigError("--h-list entries must be positive");
    }
    const auto rep =
        approximation_order(in.sampler->function, lo, hi, cfg.scheme, cfg.h_list, cfg.builtin);
    return {{cfg.out, detail::dump(rep)}};
  }

  if (cmd == "gibbs") {
    const auto in = load_input(cfg);
    if (!in.sampler || !in.sampler->function) {
      throw ConfigError("gibbs needs a function builtin (step, eq21, ...)");
    }
    std::vector<SchemeKind> schemes{cfg.scheme};
    if (cfg.scheme != SchemeKind::LinearShifted4pt) schemes.push_back(SchemeKind::LinearShifted4pt);

    nlohmann::json j;
    j["protocol"] = detail::input_protocol(cfg, in.curve);
    j["protocol"]["levels"] = cfg.levels;
    j["protocol"]["reference"] = "builtin function evaluated at refined abscissae";
    j["protocol"]["far_field"] = "|x - xi| >= 9h/2, xi = midpoint of the straddling samples";
    std::vector<Artifact> arts;
    for (auto s : schemes) {
      j["reports"][std::string(to_string(s))] =
          gibbs_report(in.curve, in.sampler->function, s, cfg.levels);
      if (!cfg.curves_out.empty()) {
        const auto c = refine_to_level(in.curve, s, BoundaryPolicy::Shrink, cfg.levels);
        detail::require_finite(c, "gibbs");
        arts.push_back({cfg.curves_out + "_" + std::string(to_string(s)) + ".csv", curve_to_csv(c)});
      }
    }
    arts.insert(arts.begin(), Artifact{cfg.out, detail::dump(j)});
    return arts;
  }

  if (cmd == "stability") {
    const auto in = load_input(cfg);
    const auto rep =
        stability_probe(in.curve.values(), cfg.eps, cfg.scheme, cfg.levels, cfg.trials, cfg.seed);
    nlohmann::json j = rep;
    j["protocol"]["input"] = detail::input_protocol(cfg, in.curve);
    return {{cfg.out, detail::dump(j)}};
  }

  throw ConfigError(cmd.empty() ? "no command given" : "unknown command '" + cmd + "'");
}

/// Writes every artifact; on failure removes what was already written.
inline void write_artifacts(const std::vector<Artifact>& arts, std::ostream& stdout_sink) {
  std::vector<std::string> written;
  try {
    for (const auto& a : arts) {
      if (a.path.empty() || a.path == "-") {
        stdout_sink << a.content;
        continue;
      }
      std::ofstream f(a.path, std::ios::binary | std::ios::trunc);
      if (!f) throw ParseError("cannot open output " + a.path);
      written.push_back(a.path);
      f << a.content;
      f.close();
      if (!f) throw ParseError("failed writing " + a.path);
    }
  } catch (...) {
    std::error_code ec;
    for (const auto& p : written) std::filesystem::remove(p, ec);
    throw;
  }
}

namespace detail {

inline std::vector<std::string> scheme_names() {
  std::vector<std::string> v;
  for (auto k : kAllSchemes) v.emplace_back(to_string(k));
  return v;
}

inline std::vector<std::string> boundary_names() {
  std::vector<std::string> v;
  for (auto p : {BoundaryPolicy::Shrink, BoundaryPolicy::Constant,
                 BoundaryPolicy::LinearExtrapolate, BoundaryPolicy::Periodic}) {
    v.emplace_back(to_string(p));
  }
  return v;
}

// Value of --config in argv, if any (needed before option binding so that
// flags given on the command line override file values).
inline std::optional<std::string> find_config_arg(int argc, const char* const* argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string_view a = argv[i];
    if (a == "--config" && i + 1 < argc) return std::string(argv[i + 1]);
    if (a.starts_with("--config=")) return std::string(a.substr(9));
  }
  return std::nullopt;
}

}  // namespace detail

/// Full CLI entry point. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  RunConfig cfg;
  try {
    if (auto path = detail::find_config_arg(argc, argv)) cfg = load_config_file(*path);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  CLI::App app{"Nonlinear subdivision (PPH, quarter-shift) refinement and analysis"};
  app.set_help_flag("--help", "print this help and exit");  // --h is the spacing
  app.fallthrough();
  app.require_subcommand(0, 1);
  std::string config_path, dump_config;
  app.add_option("--config", config_path, "JSON run config; command-line flags override it");
  app.add_option("--dump-config", dump_config, "write the effective config as JSON and exit");

  // Enum-valued flags are parsed as names and resolved after parsing.
  std::string scheme_name(to_string(cfg.scheme)), scheme_b_name(to_string(cfg.scheme_b));
  std::string boundary_name(to_string(cfg.boundary));
  const auto scheme_opt = [&](CLI::App* sub, const std::string& flag, std::string& target) {
    sub->add_option(flag, target, "ppha | chaikin | linear4 | ppha-arith")
        ->check(CLI::IsMember(detail::scheme_names()));
  };
  const auto boundary_opt = [&](CLI::App* sub) {
    sub->add_option("--boundary", boundary_name, "shrink | constant | linext | periodic")
        ->check(CLI::IsMember(detail::boundary_names()));
  };
  const auto input_opts = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.input, "CSV with `index,value` or `value` column");
    sub->add_option("--builtin", cfg.builtin,
                    "step | eq21 | exp | sinpi | delta[:N] | quadratic:a,b,c");
    sub->add_option("--h", cfg.h, "level-0 spacing");
    sub->add_option("--domain", cfg.domain, "sampling interval LO,HI")->delimiter(',')->expected(2);
  };

  auto* refine = app.add_subcommand("refine", "refine a curve and write x,value CSV");
  scheme_opt(refine, "--scheme", scheme_name);
  refine->add_option("--levels", cfg.levels);
  boundary_opt(refine);
  input_opts(refine);
  refine->add_option("--out", cfg.out);

  auto* regularity = app.add_subcommand("regularity", "Hölder exponent estimates per level");
  scheme_opt(regularity, "--scheme", scheme_name);
  regularity->add_option("--k", cfg.k, "difference order(s), 1 and/or 2")
      ->check(CLI::IsMember({1, 2}))
      ->delimiter(',');
  regularity->add_option("--jmin", cfg.jmin);
  regularity->add_option("--jmax", cfg.jmax);
  input_opts(regularity);
  regularity->add_option("--out", cfg.out);

  auto* order = app.add_subcommand("order", "one-step approximation order");
  scheme_opt(order, "--scheme", scheme_name);
  input_opts(order);
  order->add_option("--h-list", cfg.h_list, "spacings H1,H2,...")->delimiter(',');
  order->add_option("--out", cfg.out);

  auto* gibbs = app.add_subcommand("gibbs", "overshoot and far-field error near a jump");
  scheme_opt(gibbs, "--scheme", scheme_name);
  input_opts(gibbs);
  gibbs->add_option("--levels", cfg.levels);
  gibbs->add_option("--out", cfg.out);
  gibbs->add_option("--curves-out", cfg.curves_out, "prefix for per-scheme CSV curves");

  auto* stability = app.add_subcommand("stability", "empirical perturbation amplification");
  scheme_opt(stability, "--scheme", scheme_name);
  input_opts(stability);
  stability->add_option("--eps", cfg.eps);
  stability->add_option("--trials", cfg.trials);
  stability->add_option("--levels", cfg.levels);
  stability->add_option("--seed", cfg.seed);
  stability->add_option("--out", cfg.out);

  auto* compare = app.add_subcommand("compare", "two schemes on the same input, x-aligned CSV");
  scheme_opt(compare, "--scheme-a", scheme_name);
  scheme_opt(compare, "--scheme-b", scheme_b_name);
  boundary_opt(compare);
  input_opts(compare);
  compare->add_option("--levels", cfg.levels);
  compare->add_option("--out", cfg.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }
  for (const auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
  cfg.scheme = *parse_scheme(scheme_name);
  cfg.scheme_b = *parse_scheme(scheme_b_name);
  cfg.boundary = *parse_boundary_policy(boundary_name);

  try {
    if (!dump_config.empty()) {
      write_artifacts({{dump_config == "-" ? "" : dump_config,
                        nlohmann::json(cfg).dump(2) + "\n"}},
                      out);
      return kOk;
    }
    write_artifacts(execute(cfg), out);
    return kOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const LengthError& e) {
    err << "error: " << e.what() << "\n";
    return kInsufficientData;
  } catch (const PolicyError& e) {
    err << "error: " << e.what() << "\n";
    return kInsufficientData;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << "\n";
    return kInternalError;
  }
}

}  // namespace ppha::cli
