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
/// Step functions on [0,1) with exact rational breakpoints, their lattice
/// operations, decreasing rearrangement, modular and Luxemburg norm.

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "orlab/errors.hpp"
#include "orlab/numeric.hpp"
#include "orlab/orlicz.hpp"
#include "orlab/rational.hpp"

namespace orlab {

/// Piece i covers [end_{i-1}, end_i) with end_{-1} = 0.
struct Piece {
  Rational end;
  double value = 0.0;

  friend bool operator==(const Piece&, const Piece&) = default;
};

class SimpleFunction {
 public:
  /// The zero function.
  SimpleFunction() { pieces_.push_back({Rational(1), 0.0}); }

  static SimpleFunction constant(double c) {
    SimpleFunction f;
    f.pieces_.front().value = c;
    return f;
  }

  /// Builds from (end, value) pairs. Ends must be strictly increasing in
  /// (0, 1] and finish at exactly 1; values must be finite.
  static SimpleFunction from_pieces(std::vector<Piece> pieces) {
    if (pieces.empty()) throw DomainError("simple function needs at least one piece");
    Rational prev(0);
    for (const auto& p : pieces) {
      if (!(p.end > prev)) throw DomainError("simple function breakpoints must be strictly increasing in (0,1]");
      if (!std::isfinite(p.value)) throw DomainError("simple function values must be finite");
      prev = p.end;
    }
    if (prev != 1) throw DomainError("simple function: last breakpoint must be exactly 1");
    SimpleFunction f;
    f.pieces_ = std::move(pieces);
    f.canonicalize();
    return f;
  }

  /// value on [a, b), zero elsewhere.
  static SimpleFunction indicator(const Rational& a, const Rational& b, double value = 1.0) {
    if (!(a >= 0) || !(b > a) || !(b <= 1)) throw DomainError("indicator needs 0 <= a < b <= 1");
    std::vector<Piece> pieces;
    if (a > 0) pieces.push_back({a, 0.0});
    pieces.push_back({b, value});
    if (b < 1) pieces.push_back({Rational(1), 0.0});
    return from_pieces(std::move(pieces));
  }

  const std::vector<Piece>& pieces() const { return pieces_; }
  std::size_t size() const { return pieces_.size(); }

  Rational start(std::size_t i) const { return i == 0 ? Rational(0) : pieces_[i - 1].end; }
  Rational measure(std::size_t i) const { return pieces_[i].end - start(i); }

  bool is_zero() const { return pieces_.size() == 1 && pieces_.front().value == 0.0; }

  double value_at(const Rational& x) const {
    if (x < 0 || x >= 1) throw DomainError("value_at: x outside [0,1)");
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), x,
                               [](const Rational& v, const Piece& p) { return v < p.end; });
    return it->value;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& p : pieces_) m = std::max(m, std::fabs(p.value));
    return m;
  }

  /// Applies `op` to every value.
  template <typename Op>
  SimpleFunction transform(Op op) const {
    SimpleFunction out;
    out.pieces_ = pieces_;
    for (auto& p : out.pieces_) p.value = op(p.value);
    out.canonicalize();
    return out;
  }

  /// Pointwise `op(f(x), g(x))` on the common refinement.
  template <typename Op>
  static SimpleFunction combine(const SimpleFunction& f, const SimpleFunction& g, Op op) {
    SimpleFunction out;
    out.pieces_.clear();
    out.pieces_.reserve(f.size() + g.size());
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < f.size() && j < g.size()) {
      const auto& a = f.pieces_[i];
      const auto& b = g.pieces_[j];
      double v = op(a.value, b.value);
      if (v == 0.0) v = 0.0;
      const int cmp = a.end.compare(b.end);
      const Rational& end = cmp <= 0 ? a.end : b.end;
      if (!out.pieces_.empty() && out.pieces_.back().value == v) {
        out.pieces_.back().end = end;
      } else {
        out.pieces_.push_back({end, v});
      }
      if (cmp <= 0) ++i;
      if (cmp >= 0) ++j;
    }
    return out;
  }

  friend bool operator==(const SimpleFunction&, const SimpleFunction&) = default;

  /// Weighted values (|v|, measure as double) of the nonzero pieces.
  std::vector<std::pair<double, double>> abs_weighted_values() const {
    std::vector<std::pair<double, double>> out;
    out.reserve(pieces_.size());
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
      if (pieces_[i].value != 0.0) out.emplace_back(std::fabs(pieces_[i].value), to_double(measure(i)));
    }
    return out;
  }

 private:
  void canonicalize() {
    std::vector<Piece> merged;
    merged.reserve(pieces_.size());
    for (auto& p : pieces_) {
      if (p.value == 0.0) p.value = 0.0;  // drop the sign of -0.0
      if (!merged.empty() && merged.back().value == p.value) {
        merged.back().end = std::move(p.end);
      } else {
        merged.push_back(std::move(p));
      }
    }
    pieces_ = std::move(merged);
  }

  std::vector<Piece> pieces_;
};

// ---------------------------------------------------------------------------
// lattice operations

inline SimpleFunction lattice_abs(const SimpleFunction& f) {
  return f.transform([](double v) { return std::fabs(v); });
}
inline SimpleFunction lattice_sup(const SimpleFunction& f, const SimpleFunction& g) {
  return SimpleFunction::combine(f, g, [](double a, double b) { return std::max(a, b); });
}
inline SimpleFunction lattice_inf(const SimpleFunction& f, const SimpleFunction& g) {
  return SimpleFunction::combine(f, g, [](double a, double b) { return std::min(a, b); });
}
inline SimpleFunction add(const SimpleFunction& f, const SimpleFunction& g) {
  return SimpleFunction::combine(f, g, [](double a, double b) { return a + b; });
}
inline SimpleFunction subtract(const SimpleFunction& f, const SimpleFunction& g) {
  return SimpleFunction::combine(f, g, [](double a, double b) { return a - b; });
}
inline SimpleFunction scale(double c, const SimpleFunction& f) {
  return f.transform([c](double v) { return c * v; });
}
/// f / c, computed as a division of each value (not multiplication by 1/c).
inline SimpleFunction divide(const SimpleFunction& f, double c) {
  return f.transform([c](double v) { return v / c; });
}

/// Pointwise f <= g + tol everywhere.
inline bool pointwise_le(const SimpleFunction& f, const SimpleFunction& g, double tol = 0.0) {
  const auto slack = SimpleFunction::combine(
      f, g, [tol](double a, double b) { return a <= b + tol ? 0.0 : 1.0; });
  return slack.is_zero();
}

// ---------------------------------------------------------------------------
// distribution and rearrangement

/// Distribution function of |f| sampled at its distinct absolute values.
struct DistributionProfile {
  /// Distinct |values| in increasing order.
  std::vector<double> thresholds;
  /// measures[k] = |{ |f| > thresholds[k] }|.
  std::vector<Rational> measures;
  /// |{ f != 0 }|.
  Rational support;

  friend bool operator==(const DistributionProfile&, const DistributionProfile&) = default;
};

inline DistributionProfile distribution(const SimpleFunction& f) {
  std::vector<std::pair<double, Rational>> mass;
  mass.reserve(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) mass.emplace_back(std::fabs(f.pieces()[i].value), f.measure(i));
  std::sort(mass.begin(), mass.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  DistributionProfile d;
  for (const auto& [v, m] : mass) {
    if (d.thresholds.empty() || d.thresholds.back() != v) d.thresholds.push_back(v);
    if (v != 0.0) d.support += m;
  }
  d.measures.assign(d.thresholds.size(), Rational(0));
  Rational above(0);
  std::size_t i = mass.size();
  for (std::size_t k = d.thresholds.size(); k-- > 0;) {
    d.measures[k] = above;
    while (i > 0 && mass[i - 1].first == d.thresholds[k]) above += mass[--i].second;
  }
  return d;
}

/// Measure of { |f| > lambda } for arbitrary lambda.
inline Rational measure_above(const DistributionProfile& d, double lambda) {
  auto it = std::upper_bound(d.thresholds.begin(), d.thresholds.end(), lambda);
  if (it == d.thresholds.begin()) return lambda < 0.0 ? Rational(1) : d.support;
  const auto k = static_cast<std::size_t>(it - d.thresholds.begin()) - 1;
  return d.measures[k];
}

/// Decreasing rearrangement f*: nonincreasing and equimeasurable with |f|.
inline SimpleFunction rearrange(const SimpleFunction& f) {
  std::vector<std::pair<double, Rational>> mass;
  mass.reserve(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) mass.emplace_back(std::fabs(f.pieces()[i].value), f.measure(i));
  std::stable_sort(mass.begin(), mass.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<Piece> pieces;
  pieces.reserve(mass.size());
  Rational end(0);
  for (auto& [v, m] : mass) {
    end += m;
    pieces.push_back({end, v});
  }
  return SimpleFunction::from_pieces(std::move(pieces));
}

// ---------------------------------------------------------------------------
// modular and Luxemburg norm

/// integral of phi(|f|) over [0,1].
inline double modular(const OrliczFunction& phi, const SimpleFunction& f) {
  CompensatedSum s;
  for (const auto& [v, m] : f.abs_weighted_values()) s += phi(v) * m;
  return s.value();
}

namespace detail {

inline double modular_at_scale(const OrliczFunction& phi,
                               std::span<const std::pair<double, double>> terms, double lambda) {
  CompensatedSum s;
  for (const auto& [v, m] : terms) s += phi(v / lambda) * m;
  return s.value();
}

inline constexpr double kBracketCap = 1e300;

inline double luxemburg_from_terms(const OrliczFunction& phi,
                                   std::span<const std::pair<double, double>> terms, double tol) {
  if (!(tol > 0.0)) throw DomainError("luxemburg_norm: tol must be > 0");
  if (terms.empty()) return 0.0;
  double vmax = 0.0;
  for (const auto& t : terms) vmax = std::max(vmax, t.first);
  auto over = [&](double lambda) { return !(modular_at_scale(phi, terms, lambda) <= 1.0); };

  // Invariant after bracketing: modular(f/lo) > 1 >= modular(f/hi).
  double lo = vmax;
  double hi = vmax;
  if (over(vmax)) {
    hi = 2.0 * vmax;
    while (over(hi)) {
      lo = hi;
      hi *= 2.0;
      if (hi > kBracketCap) throw NumericalError("luxemburg_norm: bracket expansion exceeded 1e300");
    }
  } else {
    lo = 0.5 * vmax;
    while (!over(lo)) {
      hi = lo;
      lo *= 0.5;
      if (lo < 1.0 / kBracketCap) throw NumericalError("luxemburg_norm: bracket shrink fell below 1e-300");
    }
  }
  for (int iter = 0; iter < 4000 && hi - lo > tol * std::min(1.0, hi); ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (over(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// inf{ lambda > 0 : integral phi(|f|/lambda) <= 1 } by bisection.
inline double luxemburg_norm(const OrliczFunction& phi, const SimpleFunction& f,
                             double tol = kDefaultTol) {
  const auto terms = f.abs_weighted_values();
  return detail::luxemburg_from_terms(phi, terms, tol);
}

}  // namespace orlab
