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
/// Orlicz functions: convex increasing maps phi on [0, inf) with phi(0) = 0,
/// together with their Legendre-Fenchel conjugate and growth probes.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "orlab/errors.hpp"
#include "orlab/numeric.hpp"

namespace orlab {

enum class Family { power, power_log, exp_minus_linear, linear, piecewise_linear };

inline std::string family_name(Family f) {
  switch (f) {
    case Family::power: return "power";
    case Family::power_log: return "power-log";
    case Family::exp_minus_linear: return "exp-minus-linear";
    case Family::linear: return "linear";
    case Family::piecewise_linear: return "piecewise-linear";
  }
  return "unknown";
}

inline Family parse_family(const std::string& name) {
  if (name == "power") return Family::power;
  if (name == "power-log") return Family::power_log;
  if (name == "exp-minus-linear") return Family::exp_minus_linear;
  if (name == "linear") return Family::linear;
  if (name == "piecewise-linear") return Family::piecewise_linear;
  throw DomainError("unknown Orlicz family '" + name + "'");
}

struct Knot {
  double t = 0.0;
  double value = 0.0;
};

/// An Orlicz function from one of the builtin parametric families or given by
/// piecewise-linear knots. Construction checks only well-formedness; the
/// Orlicz axioms (convexity, monotonicity, phi(0)=0) are checked by
/// validate(), which is what downstream constructions require.
class OrliczFunction {
 public:
  /// t -> t^p, p >= 1.
  static OrliczFunction power(double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) {
      throw DomainError("power family needs a finite exponent p >= 1");
    }
    return OrliczFunction(Family::power, p, {});
  }
  /// t -> t^p log(1 + t), p >= 1.
  static OrliczFunction power_log(double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) {
      throw DomainError("power-log family needs a finite exponent p >= 1");
    }
    return OrliczFunction(Family::power_log, p, {});
  }
  /// t -> e^t - t - 1.
  static OrliczFunction exp_minus_linear() {
    return OrliczFunction(Family::exp_minus_linear, 0.0, {});
  }
  static OrliczFunction linear() { return OrliczFunction(Family::linear, 1.0, {}); }
  /// Linear interpolation between knots, linear extension past the last one.
  /// The first knot must sit at t = 0.
  static OrliczFunction piecewise_linear(std::vector<Knot> knots) {
    if (knots.size() < 2) throw DomainError("piecewise-linear needs at least two knots");
    if (knots.front().t != 0.0) throw DomainError("piecewise-linear: first knot must be at t = 0");
    for (std::size_t i = 0; i < knots.size(); ++i) {
      if (!std::isfinite(knots[i].t) || !std::isfinite(knots[i].value)) {
        throw DomainError("piecewise-linear: non-finite knot");
      }
      if (i > 0 && !(knots[i].t > knots[i - 1].t)) {
        throw DomainError("piecewise-linear: knot abscissae must be strictly increasing");
      }
    }
    return OrliczFunction(Family::piecewise_linear, 0.0, std::move(knots));
  }

  Family family() const { return family_; }
  double exponent() const { return p_; }
  const std::vector<Knot>& knots() const { return knots_; }

  std::string name() const {
    std::ostringstream os;
    os << family_name(family_);
    if (family_ == Family::power || family_ == Family::power_log) os << "(" << p_ << ")";
    if (family_ == Family::piecewise_linear) os << "[" << knots_.size() << " knots]";
    return os.str();
  }

  double operator()(double t) const { return eval(t); }

  double eval(double t) const {
    if (!(t >= 0.0) || !std::isfinite(t)) {
      throw DomainError("Orlicz function evaluated at negative or non-finite t");
    }
    switch (family_) {
      case Family::power:
        return p_ == 1.0 ? t : std::pow(t, p_);
      case Family::power_log:
        return (p_ == 1.0 ? t : std::pow(t, p_)) * std::log1p(t);
      case Family::exp_minus_linear:
        return exp_minus_linear_eval(t);
      case Family::linear:
        return t;
      case Family::piecewise_linear:
        return piecewise_eval(t);
    }
    return 0.0;
  }

  /// m * phi(t/m) / phi(t). Power families use the exact homogeneity m^(1-p)
  /// instead of dividing two rounded values.
  double scaled_ratio(double t, double m) const {
    if (!(m > 0.0)) throw DomainError("scaled_ratio needs m > 0");
    if (family_ == Family::linear || (family_ == Family::power && p_ == 1.0)) return 1.0;
    if (family_ == Family::power) return std::pow(m, 1.0 - p_);
    if (family_ == Family::exp_minus_linear && t > 30.0) {
      // Divide through by e^t so that t past the overflow point still works.
      if (m == 1.0) return 1.0;
      const double u = t / m;
      const double num = std::exp(u - t) - (u + 1.0) * std::exp(-t);
      return m * num / (1.0 - (t + 1.0) * std::exp(-t));
    }
    if (family_ == Family::piecewise_linear && convex_knots()) {
      // Convex phi is the max of its affine pieces s_j u + c_j, so
      // m phi(t/m) = max_j (s_j t + m c_j): each term, hence the max, is
      // nonincreasing in m even after rounding.
      double num = 0.0;
      double den = 0.0;
      for (std::size_t j = 0; j + 1 < knots_.size(); ++j) {
        const double sj = segment_slope(j);
        const double cj = knots_[j].value - sj * knots_[j].t;
        num = std::max(num, sj * t + m * cj);
        den = std::max(den, sj * t + cj);
      }
      if (!(den > 0.0)) throw DegenerateError("phi(t) = 0, ratio undefined");
      return num / den;
    }
    const double denom = eval(t);
    if (!(denom > 0.0)) throw DegenerateError("phi(t) = 0, ratio undefined");
    if (!std::isfinite(denom)) throw NumericalError("phi(t) overflows at t = " + std::to_string(t));
    return m * eval(t / m) / denom;
  }

  bool convex_knots() const {
    for (std::size_t j = 1; j + 1 < knots_.size(); ++j) {
      if (segment_slope(j) < segment_slope(j - 1)) return false;
    }
    return true;
  }

  /// Slope of the segment starting at knot i (the last one extends to infinity).
  double segment_slope(std::size_t i) const {
    const std::size_t j = std::min(i, knots_.size() - 2);
    return (knots_[j + 1].value - knots_[j].value) / (knots_[j + 1].t - knots_[j].t);
  }

 private:
  OrliczFunction(Family f, double p, std::vector<Knot> knots)
      : family_(f), p_(p), knots_(std::move(knots)) {}

  static double exp_minus_linear_eval(double t) {
    if (t < 0.1) {
      // Taylor tail sum_{k>=2} t^k/k!; expm1(t) - t cancels badly here.
      double term = t * t / 2.0;
      double sum = 0.0;
      for (int k = 3; k < 20 && term > 0.0; ++k) {
        sum += term;
        term *= t / k;
      }
      return sum;
    }
    return std::expm1(t) - t;
  }

  double piecewise_eval(double t) const {
    auto it = std::upper_bound(knots_.begin(), knots_.end(), t,
                               [](double x, const Knot& k) { return x < k.t; });
    std::size_t i = static_cast<std::size_t>(it - knots_.begin());
    i = (i == 0) ? 0 : i - 1;
    if (i >= knots_.size() - 1) i = knots_.size() - 2;
    const Knot& a = knots_[i];
    return a.value + segment_slope(i) * (t - a.t);
  }

  Family family_;
  double p_;
  std::vector<Knot> knots_;
};

// ---------------------------------------------------------------------------
// validate

struct ValidationReport {
  bool pass = true;
  /// One of "", "phi(0) != 0", "not nondecreasing", "not convex", "constant".
  std::string violation;
  std::optional<double> at_t;
  std::optional<std::size_t> knot;
  std::string detail;
};

inline ValidationReport validate(const OrliczFunction& phi, std::size_t grid_size = 100,
                                 double t_max = 10.0, double tol = kDefaultTol) {
  if (grid_size < 3) throw DomainError("validate: grid_size must be >= 3");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw DomainError("validate: t_max must be > 0");
  auto fail = [](std::string what, double t, std::string detail) {
    ValidationReport r;
    r.pass = false;
    r.violation = std::move(what);
    r.at_t = t;
    r.detail = std::move(detail);
    return r;
  };

  const double at_zero = phi(0.0);
  if (at_zero != 0.0) return fail("phi(0) != 0", 0.0, "phi(0) = " + std::to_string(at_zero));

  if (phi.family() == Family::piecewise_linear) {
    const auto& k = phi.knots();
    double prev_slope = 0.0;
    for (std::size_t i = 0; i + 1 < k.size(); ++i) {
      const double slope = phi.segment_slope(i);
      if (slope < 0.0) {
        auto r = fail("not nondecreasing", k[i].t,
                      "segment from knot " + std::to_string(i) + " has negative slope");
        r.knot = i;
        return r;
      }
      if (i > 0 && slope < prev_slope) {
        std::ostringstream os;
        os << "slope drops " << prev_slope << " -> " << slope << " at knot " << i;
        auto r = fail("not convex", k[i].t, os.str());
        r.knot = i;
        return r;
      }
      prev_slope = slope;
    }
    if (!(prev_slope > 0.0)) return fail("constant", k.back().t, "final slope is zero");
    return {};
  }

  const auto grid = geometric_grid_down(t_max, grid_size);
  double prev_t = 0.0;
  double prev_v = 0.0;
  for (double t : grid) {
    const double v = phi(t);
    if (v + tol * std::max(1.0, std::fabs(prev_v)) < prev_v) {
      return fail("not nondecreasing", t, "value drops on the grid");
    }
    for (double lo : {0.0, prev_t}) {
      const double mid = 0.5 * (lo + t);
      const double avg = 0.5 * (phi(lo) + v);
      if (phi(mid) > avg + tol * std::max(1.0, avg)) {
        return fail("not convex", mid, "midpoint convexity fails");
      }
    }
    prev_t = t;
    prev_v = v;
  }
  if (!(phi(t_max) > 0.0)) return fail("constant", t_max, "phi vanishes on the probe grid");
  return {};
}

// ---------------------------------------------------------------------------
// conjugate

struct ConjugateValue {
  double value = 0.0;
  bool infinite = false;
  /// Maximizer of t -> s t - phi(t) (absent when infinite).
  std::optional<double> argmax;
};

/// Asymptotic slope lim phi(t)/t estimated by a finite difference at t_cap.
inline double asymptotic_slope_estimate(const OrliczFunction& phi, double t_cap) {
  const double hi = phi(2.0 * t_cap);
  if (!std::isfinite(hi)) return std::numeric_limits<double>::infinity();
  return (hi - phi(t_cap)) / t_cap;
}

/// phi*(s) = sup{ s t - phi(t) : t >= 0 }.
inline ConjugateValue conjugate(const OrliczFunction& phi, double s, double tol = kDefaultTol,
                                double t_cap = 1e8) {
  if (!(s >= 0.0) || !std::isfinite(s)) throw DomainError("conjugate: s must be finite and >= 0");
  if (!(tol > 0.0)) throw DomainError("conjugate: tol must be > 0");
  const double slope = asymptotic_slope_estimate(phi, t_cap);
  if (s > slope * (1.0 + 1e-6)) return {std::numeric_limits<double>::infinity(), true, {}};

  auto gain = [&](double t) { return s * t - phi(t); };
  double hi = 1.0;
  while (gain(2.0 * hi) > gain(hi)) {
    hi *= 2.0;
    if (hi > 1e300) return {std::numeric_limits<double>::infinity(), true, {}};
  }
  // Concave gain, non-increasing beyond hi: the maximum lies in [0, 2 hi].
  double a = 0.0;
  double b = 2.0 * hi;
  for (int iter = 0; iter < 400 && (b - a) > tol * std::max(1.0, b); ++iter) {
    const double m1 = a + (b - a) / 3.0;
    const double m2 = b - (b - a) / 3.0;
    if (gain(m1) < gain(m2)) {
      a = m1;
    } else {
      b = m2;
    }
  }
  const double t_star = 0.5 * (a + b);
  const double value = gain(t_star);
  if (value <= 0.0) return {0.0, false, 0.0};
  return {value, false, t_star};
}

// ---------------------------------------------------------------------------
// Delta_2 probes

enum class Delta2Verdict { holds, fails, inconclusive };

inline std::string to_string(Delta2Verdict v) {
  switch (v) {
    case Delta2Verdict::holds: return "holds";
    case Delta2Verdict::fails: return "fails";
    case Delta2Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

struct Delta2Report {
  Delta2Verdict verdict = Delta2Verdict::inconclusive;
  /// max phi(2t)/phi(t) over grid points t > t0 with phi(t) > 0.
  double c_est = 0.0;
  double max_ratio = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::optional<double> witness_t;
  std::string note;
};

inline Delta2Report delta2_check(const OrliczFunction& phi, double t0, double t_max,
                                 std::size_t grid_size = 400, double fail_threshold = 1e6) {
  if (!(t0 >= 0.0) || !(t_max > t0) || !std::isfinite(t_max)) {
    throw DomainError("delta2_check: need 0 <= t0 < t_max");
  }
  if (grid_size < 2) throw DomainError("delta2_check: grid_size must be >= 2");
  if (!(fail_threshold > 1.0)) throw DomainError("delta2_check: fail_threshold must be > 1");

  const auto grid =
      t0 > 0.0 ? geometric_grid_between(t0, t_max, grid_size) : geometric_grid_down(t_max, grid_size);
  std::vector<std::pair<double, double>> ratios;
  for (double t : grid) {
    const double v = phi(t);
    if (v > 0.0 && std::isfinite(v)) ratios.emplace_back(t, phi(2.0 * t) / v);
  }
  if (ratios.empty()) throw DegenerateError("delta2_check: phi vanishes on the whole grid");

  Delta2Report rep;
  rep.t_lo = grid.front();
  rep.t_hi = grid.back();
  for (const auto& [t, r] : ratios) {
    if (!(r <= rep.max_ratio)) rep.max_ratio = r;
    if (!rep.witness_t && !(r <= fail_threshold)) rep.witness_t = t;
  }
  rep.c_est = rep.max_ratio;
  rep.note =
      "finite-truncation heuristic: the condition quantifies over all t > t0, a finite grid can "
      "only refute it or support it";
  if (rep.witness_t) {
    rep.verdict = Delta2Verdict::fails;
    return rep;
  }

  std::size_t first_top = ratios.size();
  while (first_top > 0 && ratios[first_top - 1].first >= t_max / 10.0) --first_top;
  if (ratios.size() - first_top < 2) first_top = ratios.size() >= 2 ? ratios.size() - 2 : 0;

  bool non_increasing = true;
  double top_max = 0.0;
  for (std::size_t i = first_top; i < ratios.size(); ++i) {
    top_max = std::max(top_max, ratios[i].second);
    if (i > first_top && ratios[i].second > ratios[i - 1].second * (1.0 + 1e-9)) {
      non_increasing = false;
    }
  }
  double lower_max = 0.0;
  for (std::size_t i = 0; i < first_top; ++i) lower_max = std::max(lower_max, ratios[i].second);
  const bool no_new_record = first_top > 0 && top_max <= lower_max * (1.0 + 1e-9);
  rep.verdict = (non_increasing || no_new_record) ? Delta2Verdict::holds : Delta2Verdict::inconclusive;
  return rep;
}

struct KrProbeReport {
  std::optional<double> witness_t;
  std::size_t points_checked = 0;
  /// Grid points where phi(t) == phi(L t)/(2L) exactly (not witnesses: the
  /// criterion is strict).
  std::size_t ties = 0;
  std::string status;
};

/// Searches t in (t_floor, t_cap] for phi(t) > phi(L t)/(2L). Repeated
/// witnesses over escalating (L, t_floor) are evidence that the conjugate
/// fails Delta_2; a miss is inconclusive at this cap.
inline KrProbeReport kr_dual_delta2_probe(const OrliczFunction& phi, double L, double t_floor,
                                          double t_cap, double ratio = kGridRatio) {
  if (!(L > 1.0) || !std::isfinite(L)) throw DomainError("kr probe: L must be > 1");
  if (!(t_floor >= 0.0) || !(t_cap > t_floor) || !std::isfinite(t_cap)) {
    throw DomainError("kr probe: need 0 <= t_floor < t_cap");
  }
  KrProbeReport rep;
  double t = t_floor > 0.0 ? t_floor * ratio : std::min(1e-6, t_cap);
  for (; t <= t_cap; t *= ratio) {
    ++rep.points_checked;
    const double lhs = phi(t);
    const double rhs = phi(L * t) / (2.0 * L);
    if (lhs > rhs) {
      rep.witness_t = t;
      rep.status = "witness";
      return rep;
    }
    if (lhs == rhs) ++rep.ties;
  }
  rep.status = "inconclusive-at-cap";
  return rep;
}

}  // namespace orlab
