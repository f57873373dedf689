// Copyright 2026 The orlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

/// \file
/// Batch runner behind the command-line tool: validated run configs, one
/// dispatcher per subcommand, and deterministic JSON/CSV reports.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "orlab/cesaro.hpp"
#include "orlab/counterexample.hpp"
#include "orlab/dhtest.hpp"
#include "orlab/errors.hpp"
#include "orlab/io.hpp"
#include "orlab/orlicz.hpp"
#include "orlab/simple_function.hpp"

namespace orlab::run {

using nlohmann::json;

inline constexpr const char* kToolName = "orlab";
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kVerdictFailure = 2, kInputError = 3, kNumericalError = 4 };

/// Bad config or flags. Always names the offending parameter.
class ConfigError : public DomainError {
 public:
  ConfigError(const std::string& param, const std::string& what)
      : DomainError("parameter '" + param + "': " + what), param_(param) {}
  const std::string& param() const { return param_; }

 private:
  std::string param_;
};

// ---------------------------------------------------------------------------
// command table

enum class ParamType { real, count, text, function, blocks, any };

struct ParamSpec {
  std::string name;
  ParamType type = ParamType::real;
  json fallback;  // null: no default
  bool required = false;
  bool positive = false;
  std::string help;
};

struct CommandSpec {
  std::string name;
  /// "required", "optional" or "none".
  std::string phi;
  std::vector<ParamSpec> params;
  std::string help;
};

inline const std::vector<CommandSpec>& command_table() {
  using T = ParamType;
  static const std::vector<ParamSpec> sequence_params = {
      {"sequence", T::text, nullptr, true, false,
       "zero | geometric-constant | dyadic-normalized | random-steps | random-disjoint-blocks | counterexample-copies"},
      {"seed", T::count, nullptr, false, false, "seed for random sequences"},
      {"seq_p", T::real, 2.0, false, true, "exponent of dyadic-normalized"},
      {"seq_c", T::real, 1.0, false, true, "scale of dyadic-normalized"},
      {"nmax", T::count, 30, false, true, "certificate depth for counterexample-copies"},
      {"pieces", T::count, 3, false, true, "certificate pieces kept by counterexample-copies"},
  };
  auto with_sequence = [&](std::vector<ParamSpec> extra) {
    std::vector<ParamSpec> all = sequence_params;
    all.insert(all.end(), extra.begin(), extra.end());
    return all;
  };
  static const std::vector<CommandSpec> table = {
      {"orlicz conjugate", "required",
       {{"s", T::real, nullptr, true, false, "dual argument s >= 0"},
        {"tol", T::real, kDefaultTol, false, true, "search tolerance"},
        {"t_cap", T::real, 1e8, false, true, "slope probe cap"}},
       "Fenchel conjugate phi*(s)"},
      {"orlicz validate", "required",
       {{"grid", T::count, 100, false, true, "grid size"},
        {"t_max", T::real, 10.0, false, true, "grid end"},
        {"tol", T::real, kDefaultTol, false, true, "tolerance"}},
       "check convexity, monotonicity and phi(0) = 0"},
      {"orlicz delta2", "required",
       {{"t0", T::real, 1.0, false, false, "start of the probed range"},
        {"tmax", T::real, 1e6, false, true, "end of the probed range"},
        {"grid", T::count, 400, false, true, "grid size"},
        {"fail_threshold", T::real, 1e6, false, true, "ratio that counts as a failure witness"}},
       "Delta_2 probe with C estimate"},
      {"orlicz kr-probe", "required",
       {{"L", T::real, 2.0, false, true, "dilation L > 1"},
        {"t_floor", T::real, 0.0, false, false, "search starts above this t"},
        {"t_cap", T::real, 1e6, false, true, "search cap"},
        {"ratio", T::real, kGridRatio, false, true, "grid ratio"}},
       "search for phi(t) > phi(Lt)/(2L)"},
      {"fn rearrange", "optional",
       {{"f", T::function, nullptr, true, false, "pieces 'end:value,...' with rational ends"}},
       "decreasing rearrangement"},
      {"fn norm", "required",
       {{"f", T::function, nullptr, true, false, "pieces 'end:value,...'"},
        {"tol", T::real, kDefaultTol, false, true, "bisection tolerance"}},
       "Luxemburg norm"},
      {"fn modular", "required",
       {{"f", T::function, nullptr, true, false, "pieces 'end:value,...'"},
        {"scale", T::real, 1.0, false, true, "evaluate integral phi(|f|/scale)"}},
       "modular"},
      {"cesaro diagnose", "required",
       with_sequence({{"N", T::count, 16, false, true, "number of terms"},
                      {"tol", T::real, kDefaultTol, false, true, "norm tolerance"}}),
       "order-boundedness trend of the Cesaro running sup"},
      {"cesaro supineq", "none",
       with_sequence({{"K", T::count, 16, false, true, "number of terms"},
                      {"N", T::count, 4, false, true, "modulus"},
                      {"value_tol", T::real, 1e-12, false, true, "pointwise tolerance"}}),
       "pointwise sup-Cesaro inequality"},
      {"cesaro pconvex", "required",
       with_sequence({{"n", T::count, 2, false, true, "lower index"},
                      {"m", T::count, 8, false, true, "upper index"},
                      {"tol", T::real, kDefaultTol, false, true, "norm tolerance"}}),
       "disjoint p-convex Cesaro bound"},
      {"cesaro closedbound", "required",
       with_sequence({{"K", T::count, 16, false, true, "number of terms"},
                      {"N", T::count, 4, false, true, "modulus"},
                      {"tol", T::real, kDefaultTol, false, true, "tolerance"}}),
       "closed-Cesaro modular chain"},
      {"counterexample build", "required",
       {{"nmax", T::count, nullptr, true, true, "certificate depth"},
        {"ratio", T::real, kGridRatio, false, true, "search grid ratio"},
        {"max_steps", T::count, 2000, false, true, "search steps per index"},
        {"a_start", T::real, 1.0, false, true, "search floor for a_1"},
        {"tail_extension", T::count, 0, false, false, "indices searched past nmax (0: nmax)"}},
       "build the norm-divergence certificate"},
      {"counterexample verify", "optional",
       {{"certificate", T::text, nullptr, false, false, "certificate or build report to verify"},
        {"nmax", T::count, nullptr, false, true, "build and verify when no certificate is given"}},
       "re-check every certificate invariant"},
      {"counterexample bounds", "required",
       {{"nmax", T::count, nullptr, true, true, "certificate depth"},
        {"n", T::any, "1,2,5,10,20", false, false, "indices, comma list or array"}},
       "certified modular and norm lower bounds"},
      {"counterexample mc", "required",
       {{"nmax", T::count, 50, false, true, "certificate depth"},
        {"n", T::count, 2, false, true, "Cesaro index (<= 20)"},
        {"samples", T::count, 100000, false, true, "sample count (>= 1e4)"},
        {"seed", T::count, nullptr, true, false, "sampling seed"}},
       "Monte Carlo check of the modular bound"},
      {"dh table", "required",
       {{"blocks", T::blocks, "singleton-powers", false, false, "builtin name or block list"},
        {"N", T::count, 8, false, true, "rows"},
        {"M", T::count, 16, false, true, "columns"},
        {"stab_tol", T::real, 1e-9, false, true, "stabilization tolerance"}},
       "b_{n,m} table"},
      {"dh test", "required",
       {{"blocks", T::blocks, "singleton-powers", false, false, "builtin name or block list"},
        {"N", T::count, 8, false, true, "rows used for b_m"},
        {"M", T::count, 1024, false, true, "series length"},
        {"stab_tol", T::real, 1e-9, false, true, "stabilization tolerance"},
        {"epsilon", T::real, 0.05, false, true, "weak-null threshold"}},
       "series test on sum b_m/m and weak-null criterion"},
      {"dh realize", "required",
       {{"blocks", T::blocks, "singleton-powers", false, false, "builtin name or block list"},
        {"K", T::count, 4, false, false, "number of functions"},
        {"max_den", T::count, 1000000000, false, true, "denominator cap for measures"}},
       "realize blocks as disjoint unit-norm simple functions"},
      {"dh crosscheck", "required",
       {{"blocks", T::blocks, "singleton-powers", false, false, "builtin name or block list"},
        {"K", T::count, 8, false, false, "number of functions"},
        {"tol", T::real, 1e-9, false, true, "agreement tolerance before rounding"}},
       "integral phi(sum f_n/n) against sum b_{n,n}/n"},
      {"sweep", "none",
       {{"base", T::any, nullptr, false, false, "config shared by every row"},
        {"vary", T::any, nullptr, false, false, "parameter -> list of values (cartesian product)"},
        {"configs", T::any, nullptr, false, false, "explicit list of configs"}},
       "run a homogeneous list of configs into one table"},
  };
  return table;
}

inline const CommandSpec& command_spec(const std::string& name) {
  for (const auto& c : command_table()) {
    if (c.name == name) return c;
  }
  throw ConfigError("command", "unknown command '" + name + "'");
}

// ---------------------------------------------------------------------------
// config

struct OutputSpec {
  std::string format = "json";
  std::string path;
};

struct RunConfig {
  std::string command;
  json phi;  // null when absent
  json params = json::object();
  OutputSpec output;
};

namespace detail {

inline json coerce(const ParamSpec& spec, const json& v) {
  const std::string& name = spec.name;
  switch (spec.type) {
    case ParamType::real: {
      double x = 0.0;
      if (v.is_number()) {
        x = v.get<double>();
      } else if (v.is_string()) {
        try {
          std::size_t used = 0;
          x = std::stod(v.get<std::string>(), &used);
          if (used != v.get<std::string>().size()) throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
          throw ConfigError(name, "expected a number, got '" + v.get<std::string>() + "'");
        }
      } else {
        throw ConfigError(name, "expected a number");
      }
      if (!std::isfinite(x)) throw ConfigError(name, "must be finite");
      if (spec.positive && !(x > 0.0)) throw ConfigError(name, "must be positive");
      if (!spec.positive && x < 0.0) throw ConfigError(name, "must be nonnegative");
      return x;
    }
    case ParamType::count: {
      std::uint64_t n = 0;
      if (v.is_number_unsigned()) {
        n = v.get<std::uint64_t>();
      } else if (v.is_number_integer()) {
        if (v.get<std::int64_t>() < 0) throw ConfigError(name, "must be nonnegative");
        n = static_cast<std::uint64_t>(v.get<std::int64_t>());
      } else if (v.is_number_float()) {
        const double x = v.get<double>();
        if (!(x >= 0.0) || x != std::floor(x) || x > 1.8e19) throw ConfigError(name, "expected a nonnegative integer");
        n = static_cast<std::uint64_t>(x);
      } else if (v.is_string()) {
        const std::string s = v.get<std::string>();
        try {
          std::size_t used = 0;
          const double x = std::stod(s, &used);
          if (used != s.size() || !(x >= 0.0) || x != std::floor(x) || x > 1.8e19) throw std::invalid_argument(s);
          n = s.find_first_of(".eE") == std::string::npos ? std::stoull(s) : static_cast<std::uint64_t>(x);
        } catch (const std::exception&) {
          throw ConfigError(name, "expected a nonnegative integer, got '" + s + "'");
        }
      } else {
        throw ConfigError(name, "expected a nonnegative integer");
      }
      if (spec.positive && n == 0) throw ConfigError(name, "must be positive");
      return n;
    }
    case ParamType::text:
      if (!v.is_string()) throw ConfigError(name, "expected a string");
      return v;
    case ParamType::function:
    case ParamType::blocks:
      if (!v.is_string() && !v.is_array()) throw ConfigError(name, "expected a string or a list");
      return v;
    case ParamType::any:
      return v;
  }
  return v;
}

}  // namespace detail

/// Validates a config document: unknown fields are rejected, parameters are
/// type-checked and defaults filled in.
inline RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config", "must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (key != "command" && key != "phi" && key != "params" && key != "output") {
      throw ConfigError(key, "unknown config field");
    }
  }
  RunConfig cfg;
  if (!j.contains("command") || !j.at("command").is_string()) throw ConfigError("command", "missing or not a string");
  cfg.command = j.at("command").get<std::string>();
  const CommandSpec& spec = command_spec(cfg.command);

  if (j.contains("phi") && !j.at("phi").is_null()) {
    if (spec.phi == "none") throw ConfigError("phi", "not used by '" + cfg.command + "'");
    try {
      cfg.phi = io::to_json(io::phi_from_json(j.at("phi")));
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError("phi", e.what());
    }
  } else if (spec.phi == "required") {
    throw ConfigError("phi", "'" + cfg.command + "' needs an Orlicz function (--family)");
  }

  const json params = j.value("params", json::object());
  if (!params.is_object()) throw ConfigError("params", "must be an object");
  for (const auto& [key, _] : params.items()) {
    const bool known = std::any_of(spec.params.begin(), spec.params.end(), [&](const ParamSpec& p) { return p.name == key; });
    if (!known) throw ConfigError(key, "unknown parameter for '" + cfg.command + "'");
  }
  for (const auto& p : spec.params) {
    if (params.contains(p.name) && !params.at(p.name).is_null()) {
      cfg.params[p.name] = detail::coerce(p, params.at(p.name));
    } else if (p.required) {
      throw ConfigError(p.name, "required by '" + cfg.command + "'");
    } else if (!p.fallback.is_null()) {
      cfg.params[p.name] = p.fallback;
    }
  }

  if (j.contains("output")) {
    const json& out = j.at("output");
    if (!out.is_object()) throw ConfigError("output", "must be an object");
    for (const auto& [key, value] : out.items()) {
      if (key == "format") {
        if (!value.is_string() || (value != "json" && value != "csv")) throw ConfigError("output.format", "json or csv");
        cfg.output.format = value.get<std::string>();
      } else if (key == "path") {
        if (!value.is_string()) throw ConfigError("output.path", "must be a string");
        cfg.output.path = value.get<std::string>();
      } else {
        throw ConfigError("output." + key, "unknown output field");
      }
    }
  }
  return cfg;
}

inline json canonical(const RunConfig& cfg) {
  json j{{"command", cfg.command}, {"params", cfg.params}, {"output", {{"format", cfg.output.format}}}};
  if (!cfg.phi.is_null()) j["phi"] = cfg.phi;
  return j;
}

/// FNV-1a over the canonical config (sorted keys, no output path).
inline std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical(cfg).dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

// ---------------------------------------------------------------------------
// outcomes and reports

struct Outcome {
  int exit_code = kOk;
  std::string summary;
  json result = json::object();
};

namespace detail {

class Params {
 public:
  explicit Params(const json& j) : j_(j) {}
  bool has(const std::string& k) const { return j_.contains(k); }
  double real(const std::string& k) const { return j_.at(k).get<double>(); }
  std::size_t count(const std::string& k) const { return static_cast<std::size_t>(j_.at(k).get<std::uint64_t>()); }
  std::uint64_t seed(const std::string& why) const {
    if (!has("seed")) throw ConfigError("seed", "mandatory for " + why);
    return j_.at("seed").get<std::uint64_t>();
  }
  std::string text(const std::string& k) const { return j_.at(k).get<std::string>(); }
  const json& raw(const std::string& k) const { return j_.at(k); }

 private:
  const json& j_;
};

inline std::string fmt(double x, int digits = 6) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

inline json table(std::vector<std::string> columns, json rows) {
  return {{"columns", std::move(columns)}, {"rows", std::move(rows)}};
}

inline json load_json_file(const std::string& path, const std::string& param) {
  std::ifstream in(path);
  if (!in) throw ConfigError(param, "cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(param, std::string("malformed JSON in '") + path + "': " + e.what());
  }
}

inline SimpleFunction function_param(const Params& p, const std::string& name) {
  try {
    return io::simple_function_from_json(p.raw(name));
  } catch (const Error& e) {
    throw ConfigError(name, e.what());
  }
}

inline dh::EligibleSequence blocks_param(const Params& p, std::size_t count) {
  const json& v = p.raw("blocks");
  try {
    if (v.is_array()) return io::eligible_from_json(v);
    const std::string name = v.get<std::string>();
    if (name.size() > 5 && name.substr(name.size() - 5) == ".json") {
      return io::eligible_from_json(load_json_file(name, "blocks"));
    }
    return dh::builtin_sequence(name, count);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("blocks", e.what());
  }
}

inline cesaro::FunctionSequence sequence_param(const Params& p, const std::optional<OrliczFunction>& phi) {
  const std::string name = p.text("sequence");
  if (name == "zero") return cesaro::FunctionSequence::zero();
  if (name == "geometric-constant") return cesaro::FunctionSequence::geometric_constant();
  if (name == "dyadic-normalized") return cesaro::FunctionSequence::dyadic_normalized(p.real("seq_p"), p.real("seq_c"));
  if (name == "random-steps") return cesaro::FunctionSequence::random_steps(p.seed("sequence " + name));
  if (name == "random-disjoint-blocks") return cesaro::FunctionSequence::random_disjoint_blocks(p.seed("sequence " + name));
  if (name == "counterexample-copies") {
    const OrliczFunction base = phi.value_or(OrliczFunction::linear());
    const auto cert = counterexample::build_certificate(base, p.count("nmax"));
    return cesaro::FunctionSequence::independent_copies(counterexample::derived_profile(cert, p.count("pieces")));
  }
  throw ConfigError("sequence", "unknown sequence '" + name + "'");
}

inline std::vector<std::size_t> index_list(const json& v, const std::string& param) {
  std::vector<std::size_t> out;
  auto push = [&](double x) {
    if (!(x >= 1.0) || x != std::floor(x)) throw ConfigError(param, "indices must be positive integers");
    out.push_back(static_cast<std::size_t>(x));
  };
  if (v.is_number()) {
    push(v.get<double>());
  } else if (v.is_array()) {
    for (const auto& x : v) {
      if (!x.is_number()) throw ConfigError(param, "indices must be numbers");
      push(x.get<double>());
    }
  } else if (v.is_string()) {
    std::stringstream ss(v.get<std::string>());
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        push(std::stod(item));
      } catch (const std::invalid_argument&) {
        throw ConfigError(param, "malformed index '" + item + "'");
      }
    }
  } else {
    throw ConfigError(param, "expected an index, a list or a comma string");
  }
  if (out.empty()) throw ConfigError(param, "no indices given");
  return out;
}

inline json nullable(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

// ---- orlicz ----

inline Outcome orlicz_conjugate(const OrliczFunction& phi, const Params& p) {
  const double s = p.real("s");
  const auto c = conjugate(phi, s, p.real("tol"), p.real("t_cap"));
  Outcome o;
  o.result = {{"s", s}, {"infinite", c.infinite}, {"value", c.infinite ? json(nullptr) : json(c.value)},
              {"argmax", nullable(c.argmax)}};
  o.summary = "phi*(" + fmt(s) + ") = " + (c.infinite ? std::string("+inf") : fmt(c.value, 12));
  return o;
}

inline Outcome orlicz_validate(const OrliczFunction& phi, const Params& p) {
  const auto v = validate(phi, p.count("grid"), p.real("t_max"), p.real("tol"));
  Outcome o;
  o.result = {{"pass", v.pass}, {"violation", v.violation}, {"at_t", nullable(v.at_t)},
              {"knot", v.knot ? json(*v.knot) : json(nullptr)}, {"detail", v.detail}};
  o.exit_code = v.pass ? kOk : kVerdictFailure;
  o.summary = v.pass ? phi.name() + " is a valid Orlicz function" : phi.name() + ": " + v.violation + " " + v.detail;
  return o;
}

inline Outcome orlicz_delta2(const OrliczFunction& phi, const Params& p) {
  const auto r = delta2_check(phi, p.real("t0"), p.real("tmax"), p.count("grid"), p.real("fail_threshold"));
  Outcome o;
  o.result = {{"verdict", to_string(r.verdict)}, {"c_est", r.c_est},           {"max_ratio", r.max_ratio},
              {"t_lo", r.t_lo},                  {"t_hi", r.t_hi},             {"witness_t", nullable(r.witness_t)},
              {"note", r.note}};
  o.summary = "delta2 " + to_string(r.verdict) + ", C_est = " + fmt(r.c_est);
  return o;
}

inline Outcome orlicz_kr_probe(const OrliczFunction& phi, const Params& p) {
  const auto r = kr_dual_delta2_probe(phi, p.real("L"), p.real("t_floor"), p.real("t_cap"), p.real("ratio"));
  Outcome o;
  o.result = {{"status", r.status}, {"witness_t", nullable(r.witness_t)}, {"points_checked", r.points_checked},
              {"ties", r.ties}, {"L", p.real("L")}, {"t_cap", p.real("t_cap")}};
  o.summary = r.witness_t ? "witness at t = " + fmt(*r.witness_t) : "no witness up to t = " + fmt(p.real("t_cap"));
  return o;
}

// ---- fn ----

inline Outcome fn_rearrange(const std::optional<OrliczFunction>& phi, const Params& p) {
  const SimpleFunction f = function_param(p, "f");
  const SimpleFunction r = rearrange(f);
  const auto df = distribution(f);
  const auto dr = distribution(r);
  json thresholds = df.thresholds;
  json measures = json::array();
  for (const auto& m : df.measures) measures.push_back(format_rational(m));
  Outcome o;
  o.result = {{"input", io::to_json(f)},
              {"rearranged", io::to_json(r)},
              {"distribution", {{"thresholds", thresholds}, {"measures", measures}}},
              {"equimeasurable", df.thresholds == dr.thresholds && df.measures == dr.measures}};
  if (phi) {
    const double nf = luxemburg_norm(*phi, f);
    const double nr = luxemburg_norm(*phi, r);
    o.result["norm_input"] = nf;
    o.result["norm_rearranged"] = nr;
  }
  json rows = json::array();
  for (std::size_t i = 0; i < r.size(); ++i) {
    rows.push_back({format_rational(r.start(i)), format_rational(r.pieces()[i].end), r.pieces()[i].value});
  }
  o.result["table"] = table({"start", "end", "value"}, rows);
  const bool eq = o.result["equimeasurable"].get<bool>();
  o.exit_code = eq ? kOk : kVerdictFailure;
  o.summary = std::to_string(r.size()) + " pieces, equimeasurable = " + (eq ? "yes" : "no");
  return o;
}

inline Outcome fn_norm(const OrliczFunction& phi, const Params& p) {
  const SimpleFunction f = function_param(p, "f");
  const double n = luxemburg_norm(phi, f, p.real("tol"));
  Outcome o;
  o.result = {{"norm", n}, {"modular_at_norm", f.is_zero() ? 0.0 : modular(phi, divide(f, n))}};
  o.summary = "||f|| = " + fmt(n, 12);
  return o;
}

inline Outcome fn_modular(const OrliczFunction& phi, const Params& p) {
  const SimpleFunction f = function_param(p, "f");
  const double s = p.real("scale");
  const double m = modular(phi, divide(f, s));
  Outcome o;
  o.result = {{"modular", m}, {"scale", s}};
  o.summary = "modular = " + fmt(m, 12);
  return o;
}

// ---- cesaro ----

inline Outcome cesaro_diagnose(const OrliczFunction& phi, const Params& p) {
  const auto seq = sequence_param(p, phi);
  cesaro::DiagnosticsOptions opt;
  opt.tol = p.real("tol");
  const auto d = cesaro::diagnose_order_boundedness(phi, seq, p.count("N"), opt);
  json rows = json::array();
  for (std::size_t n = 1; n <= d.sup_norms.size(); ++n) rows.push_back({n, d.sup_norms[n - 1], d.cauchy_gaps[n - 1]});
  Outcome o;
  o.result = {{"sequence", seq.kind()},       {"N", d.N},
              {"sup_norms", d.sup_norms},     {"cauchy_gaps", d.cauchy_gaps},
              {"fitted_slope", d.fitted_slope}, {"growth_ratio", d.growth_ratio},
              {"verdict", to_string(d.verdict)}, {"note", d.note},
              {"table", table({"n", "sup_norm", "cauchy_gap"}, rows)}};
  o.summary = seq.kind() + ": " + to_string(d.verdict) + " (slope " + fmt(d.fitted_slope) + ")";
  return o;
}

inline Outcome cesaro_supineq(const Params& p) {
  const auto seq = sequence_param(p, std::nullopt);
  const auto fs = seq.prefix(p.count("K"));
  const auto r = cesaro::sup_ces_inequality_check(fs, p.count("N"), p.real("value_tol"));
  Outcome o;
  o.result = {{"sequence", seq.kind()}, {"K", r.K}, {"N", r.N}, {"holds", r.holds},
              {"max_excess", r.max_excess}, {"violating_pieces", r.violating_pieces},
              {"lhs", io::to_json(r.lhs)}, {"rhs", io::to_json(r.rhs)}};
  o.exit_code = r.holds ? kOk : kVerdictFailure;
  o.summary = std::string("sup-Cesaro inequality ") + (r.holds ? "holds" : "violated") + ", max excess " + fmt(r.max_excess);
  return o;
}

inline Outcome cesaro_pconvex(const OrliczFunction& phi, const Params& p) {
  const auto seq = sequence_param(p, phi);
  const auto r = cesaro::disjoint_p_convex_bound_check(phi, seq, p.count("n"), p.count("m"), p.real("tol"));
  Outcome o;
  o.result = {{"sequence", seq.kind()}, {"n", r.n}, {"m", r.m}, {"p", r.p}, {"lhs", r.lhs}, {"rhs", r.rhs},
              {"slack", r.slack}, {"holds", r.holds}, {"identity_holds", r.identity_holds},
              {"max_identity_error", r.max_identity_error}};
  o.exit_code = r.holds && r.identity_holds ? kOk : kVerdictFailure;
  o.summary = "p-convex bound " + std::string(r.holds ? "holds" : "fails") + ": " + fmt(r.lhs) + " <= " + fmt(r.rhs);
  return o;
}

inline Outcome cesaro_closedbound(const OrliczFunction& phi, const Params& p) {
  const auto seq = sequence_param(p, phi);
  const auto fs = seq.prefix(p.count("K"));
  const auto r = cesaro::closed_cesaro_modular_check(phi, fs, p.count("N"), p.real("tol"));
  Outcome o;
  o.result = {{"sequence", seq.kind()}, {"K", r.K}, {"N", r.N}, {"class_modulars", r.class_modulars},
              {"premise_met", r.premise_met}, {"lhs", r.lhs}, {"combined", r.combined},
              {"sum_of_parts", r.sum_of_parts}, {"additivity_holds", r.additivity_holds},
              {"bound_holds", r.bound_holds}, {"slack", r.slack}};
  if (!r.premise_met) {
    o.summary = "premise not met (a class modular exceeds 1); chain not applicable";
  } else {
    o.exit_code = r.bound_holds && r.additivity_holds ? kOk : kVerdictFailure;
    o.summary = "closed-Cesaro chain " + std::string(r.bound_holds ? "holds" : "fails") + ": " + fmt(r.lhs) +
                " <= " + fmt(r.combined) + " <= " + std::to_string(r.N);
  }
  return o;
}

// ---- counterexample ----

inline counterexample::SearchOptions search_options(const Params& p) {
  counterexample::SearchOptions s;
  if (p.has("ratio")) {
    s.ratio = p.real("ratio");
    if (!(s.ratio > 1.0)) throw ConfigError("ratio", "must exceed 1");
  }
  if (p.has("max_steps")) s.max_steps = p.count("max_steps");
  if (p.has("a_start")) s.a_start = p.real("a_start");
  if (p.has("tail_extension")) s.tail_extension = p.count("tail_extension");
  return s;
}

inline Outcome exhausted(const counterexample::SearchExhausted& e) {
  Outcome o;
  o.exit_code = kVerdictFailure;
  o.result = {{"status", "search-exhausted"}, {"n", e.n()}, {"witness", e.witness()}};
  o.summary = "search-exhausted at n = " + std::to_string(e.n());
  return o;
}

inline Outcome counterexample_build(const OrliczFunction& phi, const Params& p) {
  try {
    const auto cert = counterexample::build_certificate(phi, p.count("nmax"), search_options(p));
    Outcome o;
    o.result = {{"status", "built"}, {"certificate", io::to_json(cert)}};
    o.summary = "certificate n_max = " + std::to_string(cert.n_max) + ", d in [" + fmt(cert.d_lower, 10) + ", " +
                fmt(cert.d_upper, 10) + "]";
    return o;
  } catch (const counterexample::SearchExhausted& e) {
    return exhausted(e);
  }
}

inline Outcome counterexample_verify(const std::optional<OrliczFunction>& phi, const Params& p) {
  counterexample::Certificate cert;
  if (p.has("certificate")) {
    json j = load_json_file(p.text("certificate"), "certificate");
    if (j.contains("result") && j.at("result").contains("certificate")) j = j.at("result").at("certificate");
    try {
      cert = io::certificate_from_json(j);
    } catch (const Error& e) {
      throw ConfigError("certificate", e.what());
    }
  } else {
    if (!p.has("nmax")) throw ConfigError("certificate", "give a certificate file or nmax");
    if (!phi) throw ConfigError("phi", "needed to build a certificate");
    try {
      cert = counterexample::build_certificate(*phi, p.count("nmax"));
    } catch (const counterexample::SearchExhausted& e) {
      return exhausted(e);
    }
  }
  const auto rep = counterexample::verify_certificate(cert);
  Outcome o;
  o.result = io::to_json(rep);
  o.exit_code = rep.all_pass() ? kOk : kVerdictFailure;
  std::size_t passed = 0;
  for (const auto& c : rep.checks) passed += c.pass ? 1 : 0;
  o.summary = "certificate checks " + std::to_string(passed) + "/" + std::to_string(rep.checks.size()) + " pass";
  return o;
}

inline Outcome counterexample_bounds(const OrliczFunction& phi, const Params& p) {
  counterexample::Certificate cert;
  try {
    cert = counterexample::build_certificate(phi, p.count("nmax"));
  } catch (const counterexample::SearchExhausted& e) {
    return exhausted(e);
  }
  const auto ns = index_list(p.raw("n"), "n");
  json rows = json::array();
  bool monotone_in_d = true;
  for (std::size_t n : ns) {
    counterexample::ModularBound mb;
    try {
      mb = counterexample::certify_modular_lower_bound(cert, n);
    } catch (const PreconditionError& e) {
      throw ConfigError("n", e.what());
    }
    const auto nb = counterexample::norm_lower_bound(cert, n);
    const auto at_lower = counterexample::modular_bound_at(cert, n, cert.d_lower);
    monotone_in_d = monotone_in_d && at_lower.truncated >= mb.truncated && at_lower.with_tail >= mb.with_tail;
    rows.push_back({n, mb.direct, mb.truncated, mb.with_tail, nb.value, nb.epsilon, nb.basis});
  }
  Outcome o;
  o.result = {{"n_max", cert.n_max},
              {"d_lower", cert.d_lower},
              {"d_upper", cert.d_upper},
              {"tail_premise", cert.tail.established()},
              {"tail_basis", cert.tail.basis},
              {"monotone_in_d", monotone_in_d},
              {"table", table({"n", "modular_direct", "modular_truncated", "modular_with_tail", "norm_lower", "epsilon",
                               "basis"},
                              rows)}};
  o.exit_code = monotone_in_d ? kOk : kVerdictFailure;
  const auto& last = rows.back();
  o.summary = "norm lower bound at n = " + std::to_string(last[0].get<std::size_t>()) + ": " +
              fmt(last[4].get<double>(), 10);
  return o;
}

inline Outcome counterexample_mc(const OrliczFunction& phi, const Params& p) {
  counterexample::Certificate cert;
  try {
    cert = counterexample::build_certificate(phi, p.count("nmax"));
  } catch (const counterexample::SearchExhausted& e) {
    return exhausted(e);
  }
  const std::size_t n = p.count("n");
  if (n >= cert.n_max) throw ConfigError("n", "must be below nmax");
  counterexample::McReport r;
  try {
    r = counterexample::mc_sanity_check(cert, n, p.count("samples"), p.seed("mc"));
  } catch (const PreconditionError& e) {
    throw ConfigError(n > 20 ? "n" : "samples", e.what());
  }
  Outcome o;
  o.result = {{"n", n},
              {"samples", r.estimate.samples},
              {"estimate", r.estimate.mean},
              {"stderr", r.estimate.stderr_},
              {"certified_truncated", r.certified_truncated},
              {"certified_with_tail", r.certified_with_tail},
              {"direct", r.direct},
              {"consistent", r.consistent},
              {"exact", nullable(r.exact)},
              {"matches_exact", r.matches_exact ? json(*r.matches_exact) : json(nullptr)}};
  const bool ok = r.consistent && r.matches_exact.value_or(true);
  o.exit_code = ok ? kOk : kVerdictFailure;
  o.summary = "MC " + fmt(r.estimate.mean) + " +- " + fmt(r.estimate.stderr_) + " vs certified " +
              fmt(r.certified_truncated) + (ok ? " (consistent)" : " (INCONSISTENT)");
  return o;
}

// ---- dh ----

inline Outcome dh_table(const OrliczFunction& phi, const Params& p) {
  const std::size_t N = p.count("N");
  const std::size_t M = p.count("M");
  const auto F = blocks_param(p, N);
  const auto tab = dh::b_table(phi, F, N, M, p.real("stab_tol"));
  std::vector<std::string> cols{"n"};
  for (std::size_t m = 1; m <= M; ++m) cols.push_back("m=" + std::to_string(m));
  json rows = json::array();
  for (std::size_t n = 1; n <= N; ++n) {
    json row = json::array({n});
    for (double v : tab.entries[n - 1]) row.push_back(v);
    rows.push_back(row);
  }
  json stab = json::array();
  for (bool b : tab.stabilized) stab.push_back(b);
  Outcome o;
  o.result = {{"blocks", F.label()},      {"N", N},
              {"M", M},                   {"limits", tab.limits},
              {"stabilized", stab},       {"monotone", tab.monotone},
              {"table", table(cols, rows)}};
  if (!tab.monotone) {
    o.result["violation"] = {{"n", tab.violation_n}, {"m", tab.violation_m}};
    o.exit_code = kVerdictFailure;
  }
  o.summary = "b table " + std::to_string(N) + "x" + std::to_string(M) + ", b_{N,M} = " + fmt(tab.at(N, M), 10) +
              (tab.monotone ? "" : ", MONOTONICITY VIOLATED");
  return o;
}

inline Outcome dh_test(const OrliczFunction& phi, const Params& p) {
  const std::size_t N = p.count("N");
  const std::size_t M = p.count("M");
  const auto F = blocks_param(p, N);
  dh::SeriesOptions opt;
  opt.stab_tol = p.real("stab_tol");
  dh::SeriesReport s;
  try {
    s = dh::dh_series_test(phi, F, N, M, opt);
  } catch (const PreconditionError& e) {
    throw ConfigError("N", e.what());
  }
  const auto tab = dh::b_table(phi, F, N, std::min<std::size_t>(M, 64), opt.stab_tol);
  const auto wn = dh::weak_null_criterion(tab, p.real("epsilon"));
  json rows = json::array();
  for (std::size_t m = 1; m <= M; ++m) rows.push_back({m, s.partial_sums[m - 1]});
  Outcome o;
  o.result = {{"blocks", F.label()},
              {"N", N},
              {"M", M},
              {"partial_sum", s.partial_sums.back()},
              {"dyadic_blocks", s.dyadic_blocks},
              {"block_ratios", s.block_ratios},
              {"harmonic_constant", s.harmonic_constant},
              {"harmonic_deviation", s.harmonic_deviation},
              {"verdict", to_string(s.verdict)},
              {"note", s.note},
              {"weak_null",
               {{"verdict", to_string(wn.verdict)},
                {"epsilon", wn.epsilon},
                {"quadrant_entries", wn.quadrant_entries},
                {"quadrant_min", wn.quadrant_min},
                {"quadrant_max", wn.quadrant_max},
                {"note", wn.note}}},
              {"table", table({"m", "partial_sum"}, rows)}};
  o.summary = "series " + to_string(s.verdict) + ", partial sum " + fmt(s.partial_sums.back(), 10) + "; weak-null " +
              to_string(wn.verdict);
  return o;
}

inline Outcome dh_realize(const OrliczFunction& phi, const Params& p) {
  const std::size_t K = p.count("K");
  const auto F = blocks_param(p, K);
  dh::Realization r;
  try {
    r = dh::realize(phi, F, K, BigInt(p.count("max_den")));
  } catch (const PreconditionError& e) {
    throw ConfigError("blocks", e.what());
  }
  json fns = json::array();
  json norms = json::array();
  double worst = 0.0;
  for (const auto& f : r.functions) {
    fns.push_back(io::to_json(f));
    const double n = luxemburg_norm(phi, f);
    norms.push_back(n);
    worst = std::max(worst, std::fabs(n - 1.0));
  }
  json log = json::array();
  for (const auto& e : r.rounding) {
    log.push_back({{"block", e.block}, {"t", e.t}, {"target", e.target}, {"measure", format_rational(e.measure)},
                   {"abs_error", e.abs_error}});
  }
  Outcome o;
  o.result = {{"blocks", F.label()}, {"K", K}, {"functions", fns}, {"norms", norms}, {"max_norm_error", worst},
              {"rounding", log}, {"max_abs_rounding", r.max_abs_rounding},
              {"total_measure", format_rational(r.total_measure)}, {"pairwise_disjoint", cesaro::supports_disjoint(r.functions)}};
  o.summary = std::to_string(K) + " disjoint functions, max | ||f_n|| - 1 | = " + fmt(worst);
  return o;
}

inline Outcome dh_crosscheck(const OrliczFunction& phi, const Params& p) {
  const std::size_t K = p.count("K");
  const auto F = blocks_param(p, K);
  dh::CrossCheckReport r;
  try {
    r = dh::cross_check_series_identity(phi, F, K, p.real("tol"));
  } catch (const PreconditionError& e) {
    throw ConfigError("blocks", e.what());
  }
  Outcome o;
  o.result = {{"blocks", F.label()},          {"K", K},
              {"lhs", r.lhs},                 {"rhs", r.rhs},
              {"difference", r.difference},   {"rounding_bound", r.rounding_bound},
              {"tolerance", r.tolerance},     {"pass", r.pass},
              {"norms", r.norms},             {"max_norm_error", r.max_norm_error},
              {"max_abs_rounding", r.max_abs_rounding}};
  o.exit_code = r.pass ? kOk : kVerdictFailure;
  o.summary = "lhs = " + fmt(r.lhs, 10) + ", rhs = " + fmt(r.rhs, 10) + (r.pass ? " (agree)" : " (DISAGREE)");
  return o;
}

}  // namespace detail

inline Outcome execute(const RunConfig& cfg);

namespace detail {

/// Expands a sweep into child configs, each tagged with its varied values.
inline std::vector<std::pair<json, json>> sweep_rows(const Params& p) {
  std::vector<std::pair<json, json>> rows;
  if (p.has("configs")) {
    if (p.has("base") || p.has("vary")) throw ConfigError("configs", "use either configs or base/vary");
    const json& list = p.raw("configs");
    if (!list.is_array()) throw ConfigError("configs", "must be a list");
    for (const auto& c : list) rows.emplace_back(c, json::object());
    return rows;
  }
  if (!p.has("base")) return rows;
  const json& base = p.raw("base");
  if (!base.is_object()) throw ConfigError("base", "must be a config object");
  std::vector<std::pair<std::string, json>> axes;
  if (p.has("vary")) {
    const json& vary = p.raw("vary");
    if (!vary.is_object()) throw ConfigError("vary", "must map parameter names to lists");
    for (const auto& [k, v] : vary.items()) {
      if (!v.is_array() || v.empty()) throw ConfigError("vary." + k, "must be a nonempty list");
      axes.emplace_back(k, v);
    }
  }
  std::vector<std::size_t> idx(axes.size(), 0);
  for (;;) {
    json cfg = base;
    json tags = json::object();
    for (std::size_t a = 0; a < axes.size(); ++a) {
      const auto& [key, values] = axes[a];
      const json& v = values[idx[a]];
      tags[key] = v;
      if (key == "family" || key == "p" || key == "knots") {
        cfg["phi"][key] = v;
      } else {
        cfg["params"][key] = v;
      }
    }
    rows.emplace_back(cfg, tags);
    std::size_t a = axes.size();
    while (a > 0) {
      --a;
      if (++idx[a] < axes[a].second.size()) break;
      idx[a] = 0;
      if (a == 0) return rows;
    }
    if (axes.empty()) return rows;
  }
}

inline std::string cell(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

inline Outcome sweep(const Params& p) {
  const auto rows = sweep_rows(p);
  std::string command;
  std::vector<std::string> tag_cols;
  std::vector<std::string> result_cols;
  std::vector<json> tags;
  std::vector<Outcome> outs;
  for (const auto& row : rows) {
    const json& c = row.first;
    if (!c.is_object() || !c.contains("command") || !c.at("command").is_string()) continue;
    const std::string name = c.at("command").get<std::string>();
    if (name == "sweep") throw ConfigError("configs", "nested sweeps are not supported");
    if (command.empty()) command = name;
    if (name != command) throw ConfigError("configs", "sweep rows must share one command");
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Outcome child;
    try {
      child = execute(parse_config(rows[i].first));
    } catch (const counterexample::SearchExhausted& e) {
      child = exhausted(e);
    } catch (const NumericalError& e) {
      child.exit_code = kNumericalError;
      child.summary = e.what();
    } catch (const DegenerateError& e) {
      child.exit_code = kNumericalError;
      child.summary = e.what();
    } catch (const Error& e) {
      child.exit_code = kInputError;
      child.summary = e.what();
    }
    for (const auto& [k, _] : rows[i].second.items()) {
      if (std::find(tag_cols.begin(), tag_cols.end(), k) == tag_cols.end()) tag_cols.push_back(k);
    }
    for (const auto& [k, v] : child.result.items()) {
      if (v.is_primitive() && std::find(result_cols.begin(), result_cols.end(), k) == result_cols.end()) {
        result_cols.push_back(k);
      }
    }
    tags.push_back(rows[i].second);
    outs.push_back(std::move(child));
  }
  std::sort(result_cols.begin(), result_cols.end());
  std::vector<std::string> cols{"index"};
  cols.insert(cols.end(), tag_cols.begin(), tag_cols.end());
  cols.push_back("exit_code");
  cols.push_back("summary");
  cols.insert(cols.end(), result_cols.begin(), result_cols.end());
  json table_rows = json::array();
  json details = json::array();
  bool all_ok = true;
  for (std::size_t i = 0; i < outs.size(); ++i) {
    json row = json::array({i});
    for (const auto& k : tag_cols) row.push_back(tags[i].value(k, json(nullptr)));
    row.push_back(outs[i].exit_code);
    row.push_back(outs[i].summary);
    for (const auto& k : result_cols) row.push_back(outs[i].result.value(k, json(nullptr)));
    table_rows.push_back(row);
    details.push_back({{"index", i}, {"varied", tags[i]}, {"exit_code", outs[i].exit_code}, {"result", outs[i].result}});
    all_ok = all_ok && outs[i].exit_code == kOk;
  }
  Outcome o;
  o.result = {{"command", command}, {"rows", details}, {"table", table(cols, table_rows)}};
  o.exit_code = all_ok ? kOk : kVerdictFailure;
  std::size_t failed = 0;
  for (const auto& c : outs) failed += c.exit_code == kOk ? 0 : 1;
  o.summary = "sweep of " + std::to_string(outs.size()) + " rows, " + std::to_string(failed) + " failed";
  return o;
}

}  // namespace detail

/// Runs one validated config. Library errors propagate; see run().
inline Outcome execute(const RunConfig& cfg) {
  const detail::Params p(cfg.params);
  std::optional<OrliczFunction> phi;
  if (!cfg.phi.is_null()) phi = io::phi_from_json(cfg.phi);
  const std::string& c = cfg.command;
  if (c == "orlicz conjugate") return detail::orlicz_conjugate(*phi, p);
  if (c == "orlicz validate") return detail::orlicz_validate(*phi, p);
  if (c == "orlicz delta2") return detail::orlicz_delta2(*phi, p);
  if (c == "orlicz kr-probe") return detail::orlicz_kr_probe(*phi, p);
  if (c == "fn rearrange") return detail::fn_rearrange(phi, p);
  if (c == "fn norm") return detail::fn_norm(*phi, p);
  if (c == "fn modular") return detail::fn_modular(*phi, p);
  if (c == "cesaro diagnose") return detail::cesaro_diagnose(*phi, p);
  if (c == "cesaro supineq") return detail::cesaro_supineq(p);
  if (c == "cesaro pconvex") return detail::cesaro_pconvex(*phi, p);
  if (c == "cesaro closedbound") return detail::cesaro_closedbound(*phi, p);
  if (c == "counterexample build") return detail::counterexample_build(*phi, p);
  if (c == "counterexample verify") return detail::counterexample_verify(phi, p);
  if (c == "counterexample bounds") return detail::counterexample_bounds(*phi, p);
  if (c == "counterexample mc") return detail::counterexample_mc(*phi, p);
  if (c == "dh table") return detail::dh_table(*phi, p);
  if (c == "dh test") return detail::dh_test(*phi, p);
  if (c == "dh realize") return detail::dh_realize(*phi, p);
  if (c == "dh crosscheck") return detail::dh_crosscheck(*phi, p);
  if (c == "sweep") return detail::sweep(p);
  throw ConfigError("command", "unknown command '" + c + "'");
}

// ---------------------------------------------------------------------------
// report files

inline std::string csv_projection(const json& result) {
  std::ostringstream os;
  auto emit = [&](const json& v) {
    if (v.is_number_float()) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
      os << buf;
    } else {
      std::string s = detail::cell(v);
      if (s.find_first_of(",\"\n") != std::string::npos) {
        std::string q;
        for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        s = "\"" + q + "\"";
      }
      os << s;
    }
  };
  if (result.contains("table")) {
    const json& t = result.at("table");
    for (std::size_t i = 0; i < t.at("columns").size(); ++i) {
      if (i) os << ',';
      emit(t.at("columns")[i]);
    }
    os << '\n';
    for (const auto& row : t.at("rows")) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) os << ',';
        emit(row[i]);
      }
      os << '\n';
    }
    return os.str();
  }
  os << "key,value\n";
  for (const auto& [k, v] : result.items()) {
    if (!v.is_primitive()) continue;
    os << k << ',';
    emit(v);
    os << '\n';
  }
  return os.str();
}

inline std::string default_path(const RunConfig& cfg) {
  std::string stem = cfg.command;
  std::replace(stem.begin(), stem.end(), ' ', '-');
  const char* dir = std::getenv("ORLAB_OUT_DIR");
  std::string base = dir && *dir ? std::string(dir) : std::string(".");
  if (base.back() != '/') base += '/';
  return base + stem + "." + cfg.output.format;
}

inline json report(const RunConfig& cfg, const Outcome& o, const std::string& error = {}) {
  json r{{"tool", kToolName},
         {"version", kToolVersion},
         {"command", cfg.command},
         {"config", canonical(cfg)},
         {"config_hash", config_hash(cfg)},
         {"exit_code", o.exit_code},
         {"status", o.exit_code == kOk ? "ok" : (error.empty() ? "failed" : "error")},
         {"summary", o.summary},
         {"result", o.result}};
  if (!error.empty()) r["error"] = error;
  return r;
}

inline void write_report(const RunConfig& cfg, const Outcome& o, const std::string& error = {}) {
  const std::string path = cfg.output.path.empty() ? default_path(cfg) : cfg.output.path;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("output.path", "cannot write '" + path + "'");
  if (cfg.output.format == "csv") {
    out << "# tool=" << kToolName << " version=" << kToolVersion << " config_hash=" << config_hash(cfg)
        << " exit_code=" << o.exit_code << '\n';
    out << csv_projection(o.result);
  } else {
    out << report(cfg, o, error).dump(2) << '\n';
  }
}

/// Executes a config, writes its report file and returns the exit code.
/// `summary` receives the one-line summary.
inline int run(const RunConfig& cfg, std::string* summary = nullptr) {
  Outcome o;
  std::string error;
  try {
    o = execute(cfg);
  } catch (const counterexample::SearchExhausted& e) {
    o = detail::exhausted(e);
  } catch (const NumericalError& e) {
    o.exit_code = kNumericalError;
    error = e.what();
  } catch (const DegenerateError& e) {
    o.exit_code = kNumericalError;
    error = e.what();
  } catch (const Error& e) {
    o.exit_code = kInputError;
    error = e.what();
  }
  if (!error.empty()) o.summary = "error: " + error;
  write_report(cfg, o, error);
  if (summary) *summary = o.summary;
  return o.exit_code;
}

}  // namespace orlab::run
