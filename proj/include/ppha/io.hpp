#pragma once

// Built-in samplers, CSV ingest/emit and JSON serialization of reports.

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "ppha/analysis.hpp"
#include "ppha/error.hpp"
#include "ppha/grid.hpp"
#include "ppha/schemes.hpp"

namespace ppha {

NLOHMANN_JSON_SERIALIZE_ENUM(SchemeKind, {{SchemeKind::LinearShifted4pt, "linear4"},
                                          {SchemeKind::Chaikin, "chaikin"},
                                          {SchemeKind::PPHA, "ppha"},
                                          {SchemeKind::PPHAArithmetic, "ppha-arith"}})

NLOHMANN_JSON_SERIALIZE_ENUM(BoundaryPolicy, {{BoundaryPolicy::Shrink, "shrink"},
                                              {BoundaryPolicy::Constant, "constant"},
                                              {BoundaryPolicy::LinearExtrapolate, "linext"},
                                              {BoundaryPolicy::Periodic, "periodic"}})

// ---------------------------------------------------------------------------
// Number formatting

/// Shortest-safe text for a double: 17 significant digits, '.' decimal point,
/// no locale. Round-trips exactly through std::from_chars.
[[nodiscard]] inline std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

[[nodiscard]] inline std::optional<double> parse_real(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

// ---------------------------------------------------------------------------
// Built-in samplers

struct BuiltinSampler {
  std::string name;
  RealFunction function;  // empty for index-based data (delta)
  double domain_lo = 0.0;
  double domain_hi = 1.0;
  std::size_t window = 0;  // delta only
};

/// Sine with a jump: sin(pi x) up to 1/2, -sin(pi x) after.
[[nodiscard]] inline double sin_with_jump(double x) {
  return x <= 0.5 ? std::sin(std::numbers::pi * x) : -std::sin(std::numbers::pi * x);
}

/// Known names: step, eq21, exp, sinpi, delta[:N], quadratic:a,b,c
/// (a x^2 + b x + c).
[[nodiscard]] inline BuiltinSampler builtin_sampler(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string_view name = spec.substr(0, colon);
  const std::string_view args = colon == std::string_view::npos ? "" : spec.substr(colon + 1);

  std::vector<double> params;
  if (!args.empty()) {
    std::string_view rest = args;
    while (true) {
      const auto comma = rest.find(',');
      const auto v = parse_real(rest.substr(0, comma));
      if (!v) throw ConfigError("builtin '" + std::string(spec) + "': bad parameter list");
      params.push_back(*v);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
  }
  const auto expect_params = [&](std::size_t n) {
    if (params.size() != n) {
      throw ConfigError("builtin '" + std::string(name) + "' takes " + std::to_string(n) +
                        " parameter(s)");
    }
  };

  BuiltinSampler s;
  s.name = std::string(spec);
  if (name == "step") {
    expect_params(0);
    s.function = [](double x) { return x < 0.0 ? 0.0 : 1.0; };
    s.domain_lo = -1.0;
    s.domain_hi = 1.0;
  } else if (name == "eq21") {
    expect_params(0);
    s.function = sin_with_jump;
  } else if (name == "exp") {
    expect_params(0);
    s.function = [](double x) { return std::exp(x); };
  } else if (name == "sinpi") {
    // [0, 2] puts a curvature sign change at x = 1.
    expect_params(0);
    s.function = [](double x) { return std::sin(std::numbers::pi * x); };
    s.domain_hi = 2.0;
  } else if (name == "quadratic") {
    expect_params(3);
    const double a = params[0], b = params[1], c = params[2];
    s.function = [a, b, c](double x) { return (a * x + b) * x + c; };
  } else if (name == "delta") {
    if (params.size() > 1) throw ConfigError("builtin 'delta' takes at most 1 parameter");
    const double n = params.empty() ? 16.0 : params[0];
    if (!(n >= 1.0) || n != std::floor(n)) throw ConfigError("delta window must be a positive integer");
    s.window = static_cast<std::size_t>(n);
  } else {
    throw ConfigError("unknown builtin '" + std::string(name) + "'");
  }
  return s;
}

/// Level-0 samples of a builtin. Function samplers use the (n - 1/2) h grid
/// over [lo, hi]; the delta is a unit impulse in the middle of its window.
[[nodiscard]] inline SampledCurve sample_builtin(const BuiltinSampler& s, double h,
                                                 std::optional<std::pair<double, double>> domain = {}) {
  if (!s.function) {
    std::vector<double> v(s.window, 0.0);
    v[s.window / 2] = 1.0;
    return SampledCurve(std::move(v), 0, h, 0);
  }
  const auto [lo, hi] = domain.value_or(std::pair{s.domain_lo, s.domain_hi});
  return sample_function(s.function, lo, hi, h);
}

// ---------------------------------------------------------------------------
// CSV ingest

/// Parses `index,value` or single-column `value` CSV (header optional).
/// Indices, when present, must be consecutive; the first one becomes the
/// origin. Without an index column the origin is 0.
[[nodiscard]] inline SampledCurve parse_curve_csv(std::istream& in, double h = 1.0,
                                                  const std::string& source = "<input>") {
  std::vector<double> values;
  std::optional<std::int64_t> first_index;
  std::optional<bool> indexed;
  std::string line;
  std::size_t lineno = 0;
  const auto fail = [&](const std::string& what) {
    throw ParseError(source + ":" + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto comma = line.find(',');
    if (values.empty() && !indexed) {
      std::string hdr = line;
      std::erase_if(hdr, [](char c) { return c == ' ' || c == '\t'; });
      if (hdr == "value") { indexed = false; continue; }
      if (hdr == "index,value") { indexed = true; continue; }
    }
    const bool has_index = comma != std::string::npos;
    if (!indexed) indexed = has_index;
    if (*indexed != has_index) fail("inconsistent column count");
    const std::string_view sv(line);
    const auto v = parse_real(has_index ? sv.substr(comma + 1) : sv);
    if (!v) fail("cannot parse value '" + std::string(has_index ? sv.substr(comma + 1) : sv) + "'");
    if (!std::isfinite(*v)) fail("non-finite value");
    if (has_index) {
      const auto idx = parse_real(sv.substr(0, comma));
      if (!idx || *idx != std::floor(*idx) || std::abs(*idx) > 9.0e15) fail("bad index");
      const auto n = static_cast<std::int64_t>(*idx);
      if (!first_index) first_index = n;
      if (n != *first_index + static_cast<std::int64_t>(values.size())) {
        fail("indices must be consecutive");
      }
    }
    values.push_back(*v);
  }
  if (values.empty()) throw ParseError(source + ": no data rows");
  return SampledCurve(std::move(values), 0, h, first_index.value_or(0));
}

[[nodiscard]] inline SampledCurve read_curve_csv(const std::string& path, double h = 1.0) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open");
  return parse_curve_csv(in, h, path);
}

// ---------------------------------------------------------------------------
// CSV emit

[[nodiscard]] inline std::string curve_to_csv(const SampledCurve& c) {
  std::string out = "x,value\n";
  for (std::size_t k = 0; k < c.size(); ++k) {
    out += format_real(c.abscissa(k));
    out += ',';
    out += format_real(c.values()[k]);
    out += '\n';
  }
  return out;
}

/// Rows at abscissae present in both curves; both must share level and spacing.
[[nodiscard]] inline std::string aligned_csv(const SampledCurve& a, const SampledCurve& b,
                                             std::string_view name_a, std::string_view name_b) {
  if (a.level() != b.level() || a.base_spacing() != b.base_spacing()) {
    throw InvariantError("aligned_csv: curves live on different grids");
  }
  std::string out = "x," + std::string(name_a) + "," + std::string(name_b) + "\n";
  const std::int64_t lo = std::max(a.origin(), b.origin());
  const std::int64_t hi = std::min(a.origin() + static_cast<std::int64_t>(a.size()),
                                   b.origin() + static_cast<std::int64_t>(b.size()));
  for (std::int64_t n = lo; n < hi; ++n) {
    out += format_real(a.abscissa_of_index(n));
    out += ',';
    out += format_real(a.values()[static_cast<std::size_t>(n - a.origin())]);
    out += ',';
    out += format_real(b.values()[static_cast<std::size_t>(n - b.origin())]);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace detail {
inline nlohmann::json opt_to_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}
}  // namespace detail

inline void to_json(nlohmann::json& j, const RegularityReport& r) {
  nlohmann::json b1 = nlohmann::json::array(), b2 = nlohmann::json::array();
  for (const auto& v : r.beta1) b1.push_back(detail::opt_to_json(v));
  for (const auto& v : r.beta2) b2.push_back(detail::opt_to_json(v));
  j = {{"scheme", r.scheme},
       {"levels", r.levels},
       {"orders", r.orders},
       {"beta1", b1},
       {"beta2", b2},
       {"protocol",
        {{"initial_data", r.initial_data},
         {"window", r.window},
         {"boundary", BoundaryPolicy::Shrink},
         {"norm", "sup over Shrink-valid entries of the undivided (k+1)-th difference"},
         {"estimator", "-log2(2^k |D^{k+1} S^{j+1} f| / |D^{k+1} S^j f|)"}}}};
}

inline void to_json(nlohmann::json& j, const OrderReport& r) {
  j = {{"scheme", r.scheme},
       {"spacings", r.spacings},
       {"errors", r.errors},
       {"protocol",
        {{"function", r.function},
         {"domain", {r.domain_lo, r.domain_hi}},
         {"sampling", "f_n = g((n - 1/2) h)"},
         {"norm", "sup over Shrink-valid children against g at child abscissae"}}}};
  if (r.orders.empty()) {
    j["orders"] = nullptr;
  } else {
    j["orders"] = r.orders;
  }
}

inline void to_json(nlohmann::json& j, const GibbsReport& r) {
  j = {{"scheme", r.scheme},
       {"levels", r.levels},
       {"h", r.h},
       {"jump_detected", r.jump_detected},
       {"overshoot", r.overshoot},
       {"far_error", r.far_error},
       {"far_radius", r.far_radius},
       {"data_range", {r.data_min, r.data_max}}};
  if (r.jump_detected) {
    j["jump_location"] = r.jump_location;
    j["near_band"] = {r.near_lo, r.near_hi};
  } else {
    j["jump_location"] = nullptr;
    j["near_band"] = nullptr;
  }
}

inline void to_json(nlohmann::json& j, const StabilityReport& r) {
  j = {{"scheme", r.scheme},
       {"ratios", r.ratios},
       {"c_emp", r.c_emp},
       {"branch_mismatches", r.branch_mismatches},
       {"protocol",
        {{"eps", r.eps},
         {"levels", r.levels},
         {"trials", r.trials},
         {"seed", r.seed},
         {"generator", r.generator},
         {"noise", "uniform in [-eps, eps] per entry"},
         {"norm", "sup over Shrink-valid entries"}}}};
}

}  // namespace ppha
