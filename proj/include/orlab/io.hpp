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
/// JSON encodings. Rationals travel as "p/q" strings so that big
/// denominators survive; doubles rely on the shortest round-trip form.

#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "orlab/counterexample.hpp"
#include "orlab/dhtest.hpp"
#include "orlab/errors.hpp"
#include "orlab/orlicz.hpp"
#include "orlab/rational.hpp"
#include "orlab/simple_function.hpp"

namespace orlab::io {

using nlohmann::json;

namespace detail {

inline const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw DomainError(std::string("missing field '") + name + "'");
  return j.at(name);
}

inline double number(const json& j, const char* name) {
  const json& v = field(j, name);
  if (!v.is_number()) throw DomainError(std::string("field '") + name + "' must be a number");
  return v.get<double>();
}

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline double parse_real(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw DomainError("malformed number '" + text + "' in " + what);
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Orlicz functions

/// "0:0,1:1,2:3" -> knots.
inline std::vector<Knot> parse_knots(const std::string& text) {
  std::vector<Knot> knots;
  for (const auto& item : detail::split(text, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw DomainError("knot '" + item + "' is not t:value");
    knots.push_back({detail::parse_real(item.substr(0, colon), "knots"), detail::parse_real(item.substr(colon + 1), "knots")});
  }
  return knots;
}

inline json to_json(const OrliczFunction& phi) {
  json j{{"family", family_name(phi.family())}};
  if (phi.family() == Family::power || phi.family() == Family::power_log) j["p"] = phi.exponent();
  if (phi.family() == Family::piecewise_linear) {
    json ks = json::array();
    for (const auto& k : phi.knots()) ks.push_back({k.t, k.value});
    j["knots"] = ks;
  }
  return j;
}

inline OrliczFunction phi_from_json(const json& j) {
  if (!j.is_object()) throw DomainError("phi must be an object");
  for (const auto& [key, _] : j.items()) {
    if (key != "family" && key != "p" && key != "knots") throw DomainError("unknown field 'phi." + key + "'");
  }
  const json& fam = detail::field(j, "family");
  if (!fam.is_string()) throw DomainError("field 'phi.family' must be a string");
  const Family family = parse_family(fam.get<std::string>());
  auto need_p = [&]() {
    if (!j.contains("p")) throw DomainError("missing field 'phi.p' for family " + fam.get<std::string>());
    return detail::number(j, "p");
  };
  switch (family) {
    case Family::power: return OrliczFunction::power(need_p());
    case Family::power_log: return OrliczFunction::power_log(need_p());
    case Family::exp_minus_linear: return OrliczFunction::exp_minus_linear();
    case Family::linear: return OrliczFunction::linear();
    case Family::piecewise_linear: {
      const json& ks = detail::field(j, "knots");
      if (ks.is_string()) return OrliczFunction::piecewise_linear(parse_knots(ks.get<std::string>()));
      std::vector<Knot> knots;
      for (const auto& k : ks) {
        if (!k.is_array() || k.size() != 2) throw DomainError("field 'phi.knots' needs [t, value] pairs");
        knots.push_back({k[0].get<double>(), k[1].get<double>()});
      }
      return OrliczFunction::piecewise_linear(std::move(knots));
    }
  }
  throw DomainError("unsupported family");
}

// ---------------------------------------------------------------------------
// Simple functions

inline json to_json(const SimpleFunction& f) {
  json pieces = json::array();
  for (std::size_t i = 0; i < f.size(); ++i) {
    pieces.push_back({{"start", format_rational(f.start(i))},
                      {"end", format_rational(f.pieces()[i].end)},
                      {"value", f.pieces()[i].value}});
  }
  return pieces;
}

inline SimpleFunction simple_function_from_json(const json& j) {
  if (j.is_string()) {
    // "end:value,..." with rational ends, e.g. "1/4:2,1:0".
    std::vector<Piece> pieces;
    for (const auto& item : detail::split(j.get<std::string>(), ',')) {
      const auto colon = item.find(':');
      if (colon == std::string::npos) throw DomainError("piece '" + item + "' is not end:value");
      pieces.push_back({parse_rational(item.substr(0, colon)), detail::parse_real(item.substr(colon + 1), "pieces")});
    }
    return SimpleFunction::from_pieces(std::move(pieces));
  }
  if (!j.is_array()) throw DomainError("a simple function is a piece list or an 'end:value,...' string");
  std::vector<Piece> pieces;
  for (const auto& p : j) {
    const json& end = detail::field(p, "end");
    if (!end.is_string()) throw DomainError("piece 'end' must be a \"p/q\" string");
    pieces.push_back({parse_rational(end.get<std::string>()), detail::number(p, "value")});
  }
  return SimpleFunction::from_pieces(std::move(pieces));
}

// ---------------------------------------------------------------------------
// Eligible sequences

inline json to_json(const dh::EligibleSequence& F) {
  json blocks = json::array();
  for (const auto& b : F.blocks()) {
    json weights = json::array();
    for (const auto& w : b.weights) weights.push_back(format_rational(w));
    blocks.push_back({{"values", b.values}, {"weights", weights}});
  }
  return blocks;
}

inline dh::EligibleSequence eligible_from_json(const json& j) {
  if (!j.is_array()) throw DomainError("an eligible sequence is a list of blocks");
  std::vector<dh::Block> blocks;
  for (const auto& b : j) {
    for (const auto& [key, _] : b.items()) {
      if (key != "values" && key != "weights") throw DomainError("unknown block field '" + key + "'");
    }
    dh::Block block;
    for (const auto& v : detail::field(b, "values")) block.values.push_back(v.get<double>());
    for (const auto& w : detail::field(b, "weights")) {
      if (!w.is_string()) throw DomainError("weights must be \"p/q\" strings");
      block.weights.push_back(parse_rational(w.get<std::string>()));
    }
    blocks.push_back(std::move(block));
  }
  return dh::EligibleSequence(std::move(blocks));
}

// ---------------------------------------------------------------------------
// Certificates

inline json to_json(const counterexample::Certificate& c) {
  json bounds = json::array();
  for (const auto& b : c.bounds) {
    bounds.push_back({{"n", b.n},
                      {"modular_truncated", b.modular_truncated},
                      {"modular_lower", b.modular_lower},
                      {"norm_lower", b.norm_lower}});
  }
  return {{"phi", to_json(c.phi)},
          {"n_max", c.n_max},
          {"search",
           {{"ratio", c.search.ratio},
            {"max_steps", c.search.max_steps},
            {"a_start", c.search.a_start},
            {"tail_extension", c.search.tail_extension}}},
          {"C", c.C},
          {"S", c.S},
          {"a", c.a},
          {"delta", c.delta},
          {"d", c.d},
          {"d_lower", c.d_lower},
          {"d_upper", c.d_upper},
          {"beta", c.beta},
          {"f", to_json(c.f)},
          {"remainder_measure", c.remainder_measure},
          {"tail",
           {{"proved", c.tail.proved},
            {"verified_to", c.tail.verified_to},
            {"target", c.tail.target},
            {"basis", c.tail.basis}}},
          {"bounds", bounds}};
}

inline counterexample::Certificate certificate_from_json(const json& j) {
  try {
    counterexample::Certificate c;
    c.phi = phi_from_json(detail::field(j, "phi"));
    c.n_max = j.at("n_max").get<std::size_t>();
    const json& s = j.at("search");
    c.search.ratio = s.at("ratio").get<double>();
    c.search.max_steps = s.at("max_steps").get<std::size_t>();
    c.search.a_start = s.at("a_start").get<double>();
    c.search.tail_extension = s.at("tail_extension").get<std::size_t>();
    c.C = j.at("C").get<std::vector<double>>();
    c.S = j.at("S").get<std::vector<double>>();
    c.a = j.at("a").get<std::vector<double>>();
    c.delta = j.at("delta").get<std::vector<double>>();
    c.d = j.at("d").get<std::vector<double>>();
    c.d_lower = j.at("d_lower").get<double>();
    c.d_upper = j.at("d_upper").get<double>();
    c.beta = j.at("beta").get<std::vector<double>>();
    c.f = simple_function_from_json(j.at("f"));
    c.remainder_measure = j.at("remainder_measure").get<double>();
    const json& t = j.at("tail");
    c.tail.proved = t.at("proved").get<bool>();
    c.tail.verified_to = t.at("verified_to").get<std::size_t>();
    c.tail.target = t.at("target").get<std::size_t>();
    c.tail.basis = t.at("basis").get<std::string>();
    for (const auto& b : j.at("bounds")) {
      c.bounds.push_back({b.at("n").get<std::size_t>(), b.at("modular_truncated").get<double>(),
                          b.at("modular_lower").get<double>(), b.at("norm_lower").get<double>()});
    }
    return c;
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed certificate: ") + e.what());
  }
}

inline json to_json(const counterexample::VerificationReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return {{"all_pass", r.all_pass()}, {"checks", checks}};
}

}  // namespace orlab::io
