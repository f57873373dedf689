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
/// Cesaro averages of function sequences, finite-truncation order-boundedness
/// diagnostics, and pointwise/modular checks of the sup-of-Cesaro-means
/// inequalities.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "orlab/errors.hpp"
#include "orlab/numeric.hpp"
#include "orlab/orlicz.hpp"
#include "orlab/rational.hpp"
#include "orlab/simple_function.hpp"

namespace orlab::cesaro {

/// Left-to-right dyadic block I_k = [1 - 2^-(k-1), 1 - 2^-k), k >= 1.
inline std::pair<Rational, Rational> dyadic_block(std::size_t k) {
  if (k == 0) throw DomainError("dyadic blocks are indexed from 1");
  const Rational width = Rational(1) / Rational(BigInt(1) << static_cast<unsigned>(k));
  const Rational end = Rational(1) - width;
  return {end - width, end};
}

/// A deterministic rule producing the k-th function (k >= 1) on demand.
class FunctionSequence {
 public:
  using Generator = std::function<SimpleFunction(std::size_t)>;

  FunctionSequence(std::string kind, Generator gen, bool declared_disjoint)
      : kind_(std::move(kind)), gen_(std::move(gen)), declared_disjoint_(declared_disjoint) {}

  const std::string& kind() const { return kind_; }
  bool declared_disjoint() const { return declared_disjoint_; }

  SimpleFunction at(std::size_t k) const {
    if (k == 0) throw DomainError("function sequences are indexed from 1");
    return gen_(k);
  }

  std::vector<SimpleFunction> prefix(std::size_t count) const {
    std::vector<SimpleFunction> out;
    out.reserve(count);
    for (std::size_t k = 1; k <= count; ++k) out.push_back(at(k));
    return out;
  }

  static FunctionSequence explicit_list(std::vector<SimpleFunction> fs, bool declared_disjoint) {
    auto data = std::make_shared<const std::vector<SimpleFunction>>(std::move(fs));
    return FunctionSequence(
        "explicit",
        [data](std::size_t k) {
          if (k > data->size()) throw PreconditionError("explicit sequence has only " + std::to_string(data->size()) + " terms");
          return (*data)[k - 1];
        },
        declared_disjoint);
  }

  static FunctionSequence zero() {
    return FunctionSequence("zero", [](std::size_t) { return SimpleFunction(); }, true);
  }

  /// f_k = 2^-k on [0,1).
  static FunctionSequence geometric_constant() {
    return FunctionSequence(
        "geometric-constant", [](std::size_t k) { return SimpleFunction::constant(std::ldexp(1.0, -static_cast<int>(k))); },
        false);
  }

  /// f_k = c |I_k|^(-1/p) on the k-th dyadic block, so that
  /// integral |f_k|^p = c^p.
  static FunctionSequence dyadic_normalized(double p, double c) {
    return FunctionSequence(
        "dyadic-normalized",
        [p, c](std::size_t k) {
          auto [a, b] = dyadic_block(k);
          return SimpleFunction::indicator(a, b, c * std::pow(2.0, static_cast<double>(k) / p));
        },
        true);
  }

  /// Random step functions on the grid of sixteenths, values in [-1, 1].
  static FunctionSequence random_steps(std::uint64_t seed, std::size_t max_pieces = 4) {
    return FunctionSequence(
        "random-steps",
        [seed, max_pieces](std::size_t k) {
          const CounterRng rng{seed};
          const std::size_t pieces = 1 + rng.below(max_pieces, k, 0);
          std::vector<int> cuts;
          for (std::uint64_t draw = 1; cuts.size() + 1 < pieces && draw < 64; ++draw) {
            const int c = 1 + static_cast<int>(rng.below(15, k, draw));
            if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
          }
          std::sort(cuts.begin(), cuts.end());
          cuts.push_back(16);
          std::vector<Piece> out;
          for (std::size_t i = 0; i < cuts.size(); ++i) {
            out.push_back({Rational(cuts[i], 16), 2.0 * rng.uniform(k, 100 + i) - 1.0});
          }
          return SimpleFunction::from_pieces(std::move(out));
        },
        false);
  }

  /// f_k supported in the k-th dyadic block, split into up to three parts at
  /// random eighths of the block, values in [-2, 2].
  static FunctionSequence random_disjoint_blocks(std::uint64_t seed) {
    return FunctionSequence(
        "random-disjoint-blocks",
        [seed](std::size_t k) {
          const CounterRng rng{seed};
          auto [a, b] = dyadic_block(k);
          const Rational eighth = (b - a) / 8;
          const std::size_t parts = 1 + rng.below(3, k, 0);
          std::vector<int> cuts;
          for (std::uint64_t draw = 1; cuts.size() + 1 < parts && draw < 64; ++draw) {
            const int c = 1 + static_cast<int>(rng.below(7, k, draw));
            if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
          }
          std::sort(cuts.begin(), cuts.end());
          cuts.push_back(8);
          std::vector<Piece> out;
          if (a > 0) out.push_back({a, 0.0});
          for (std::size_t i = 0; i < cuts.size(); ++i) {
            double v = 4.0 * rng.uniform(k, 100 + i) - 2.0;
            if (v == 0.0) v = 1.0;
            out.push_back({a + eighth * cuts[i], v});
          }
          out.push_back({Rational(1), 0.0});
          return SimpleFunction::from_pieces(std::move(out));
        },
        true);
  }

  /// Independent copies of `f` realized exactly on [0,1): the unit interval
  /// is cut into product cells (lexicographic in the coordinates), and f_k
  /// reads the k-th coordinate. f_k has size(f)^k cells.
  static FunctionSequence independent_copies(const SimpleFunction& f, std::size_t max_cells = 1u << 20) {
    std::vector<std::pair<Rational, double>> profile;
    for (std::size_t i = 0; i < f.size(); ++i) profile.emplace_back(f.measure(i), f.pieces()[i].value);
    auto data = std::make_shared<const std::vector<std::pair<Rational, double>>>(std::move(profile));
    return FunctionSequence(
        "independent-copies",
        [data, max_cells](std::size_t k) {
          const auto& prof = *data;
          double cells = 1.0;
          for (std::size_t i = 0; i < k; ++i) cells *= static_cast<double>(prof.size());
          if (cells > static_cast<double>(max_cells)) {
            throw PreconditionError("independent copies: index " + std::to_string(k) + " needs too many cells");
          }
          // Cells of the first k-1 coordinates as (start, length).
          std::vector<std::pair<Rational, Rational>> level{{Rational(0), Rational(1)}};
          for (std::size_t depth = 1; depth < k; ++depth) {
            std::vector<std::pair<Rational, Rational>> next;
            next.reserve(level.size() * prof.size());
            for (const auto& [start, len] : level) {
              Rational s = start;
              for (const auto& [mu, v] : prof) {
                Rational l = len * mu;
                next.emplace_back(s, l);
                s += l;
              }
            }
            level = std::move(next);
          }
          std::vector<Piece> pieces;
          pieces.reserve(level.size() * prof.size());
          for (const auto& [start, len] : level) {
            Rational s = start;
            for (std::size_t j = 0; j < prof.size(); ++j) {
              s += len * prof[j].first;
              pieces.push_back({j + 1 == prof.size() ? start + len : s, prof[j].second});
            }
          }
          return SimpleFunction::from_pieces(std::move(pieces));
        },
        false);
  }

 private:
  std::string kind_;
  Generator gen_;
  bool declared_disjoint_;
};

/// Exact disjointness of supports.
inline bool supports_disjoint(std::span<const SimpleFunction> fs) {
  SimpleFunction count;
  for (const auto& f : fs) {
    count = add(count, f.transform([](double v) { return v != 0.0 ? 1.0 : 0.0; }));
    if (count.max_abs() > 1.0) return false;
  }
  return true;
}

/// (1/n) sum_{k<=n} f_k. The sum is divided by n (not multiplied by 1/n).
inline SimpleFunction cesaro_average(const FunctionSequence& seq, std::size_t n) {
  if (n == 0) throw DomainError("cesaro_average: n must be >= 1");
  SimpleFunction sum;
  for (std::size_t k = 1; k <= n; ++k) sum = add(sum, seq.at(k));
  return divide(sum, static_cast<double>(n));
}

/// Running Cesaro averages A_1..A_K of a prefix.
inline std::vector<SimpleFunction> cesaro_averages(std::span<const SimpleFunction> fs) {
  std::vector<SimpleFunction> out;
  out.reserve(fs.size());
  SimpleFunction sum;
  for (std::size_t k = 0; k < fs.size(); ++k) {
    sum = add(sum, fs[k]);
    out.push_back(divide(sum, static_cast<double>(k + 1)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// order-boundedness diagnostics

enum class TrendVerdict { bounded_trend, unbounded_trend, inconclusive };

inline std::string to_string(TrendVerdict v) {
  switch (v) {
    case TrendVerdict::bounded_trend: return "bounded-trend";
    case TrendVerdict::unbounded_trend: return "unbounded-trend";
    case TrendVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

struct DiagnosticsOptions {
  double tol = kDefaultTol;
  /// Minimum slope of sup_norms against sqrt(log n) for an unbounded trend.
  double divergence_slope = 0.05;
  /// Growth of sup_norms over the last half below 1 + eps counts as bounded.
  double growth_eps = 0.01;
};

struct CesaroDiagnostics {
  std::size_t N = 0;
  /// sup_norms[n-1] = || max_{i<=n} |A_i| ||.
  std::vector<double> sup_norms;
  /// cauchy_gaps[r-1] = max_{r<s<=N} || g_s - g_r ||, r = 1..N-1.
  std::vector<double> cauchy_gaps;
  double fitted_slope = 0.0;
  double growth_ratio = 1.0;
  TrendVerdict verdict = TrendVerdict::inconclusive;
  std::string note;
};

inline CesaroDiagnostics diagnose_order_boundedness(const OrliczFunction& phi, const FunctionSequence& seq,
                                                    std::size_t N, const DiagnosticsOptions& opt = {}) {
  if (N < 2) throw DomainError("diagnose_order_boundedness: N must be >= 2");
  const auto fs = seq.prefix(N);
  const auto avgs = cesaro_averages(fs);

  std::vector<SimpleFunction> running;
  running.reserve(N);
  SimpleFunction g;
  for (const auto& a : avgs) {
    g = lattice_sup(g, lattice_abs(a));
    running.push_back(g);
  }

  CesaroDiagnostics d;
  d.N = N;
  for (const auto& r : running) d.sup_norms.push_back(luxemburg_norm(phi, r, opt.tol));
  for (std::size_t r = 0; r + 1 < N; ++r) {
    double gap = 0.0;
    for (std::size_t s = r + 1; s < N; ++s) {
      gap = std::max(gap, luxemburg_norm(phi, subtract(running[s], running[r]), opt.tol));
    }
    d.cauchy_gaps.push_back(gap);
  }

  // Least-squares slope of sup_norms against sqrt(log n) over the last half.
  const std::size_t first = (N + 1) / 2;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, cnt = 0.0;
  for (std::size_t n = first; n <= N; ++n) {
    const double x = std::sqrt(std::log(static_cast<double>(n)));
    const double y = d.sup_norms[n - 1];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    cnt += 1.0;
  }
  const double denom = cnt * sxx - sx * sx;
  d.fitted_slope = denom > 0.0 ? (cnt * sxy - sx * sy) / denom : 0.0;
  const double base = d.sup_norms[first - 1];
  const double last = d.sup_norms.back();
  d.growth_ratio = base > 0.0 ? last / base : (last > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);

  const bool gaps_shrink = d.cauchy_gaps.back() <= d.cauchy_gaps.front() + opt.tol;
  if (d.fitted_slope > opt.divergence_slope && d.growth_ratio >= 1.0 + opt.growth_eps) {
    d.verdict = TrendVerdict::unbounded_trend;
  } else if (d.growth_ratio < 1.0 + opt.growth_eps && gaps_shrink) {
    d.verdict = TrendVerdict::bounded_trend;
  } else {
    d.verdict = TrendVerdict::inconclusive;
  }
  d.note = "trend only: order boundedness is a statement about the infinite sequence; N = " + std::to_string(N);
  return d;
}

// ---------------------------------------------------------------------------
// disjoint p-convexity bound

struct PConvexReport {
  std::size_t n = 0;
  std::size_t m = 0;
  double p = 0.0;
  /// || g_m - g_n ||_p with g_j = sum_{k<=j} |f_k|/k.
  double lhs = 0.0;
  /// (sum_{k=n+1}^m k^-p)^(1/p) * max_{k<=m} ||f_k||_p.
  double rhs = 0.0;
  double slack = 0.0;
  bool holds = false;
  /// g_j == (sum_{k<=j} |f_k|^p / k^p)^(1/p) pointwise for j <= m.
  bool identity_holds = false;
  double max_identity_error = 0.0;
};

inline PConvexReport disjoint_p_convex_bound_check(const OrliczFunction& phi, const FunctionSequence& seq,
                                                   std::size_t n, std::size_t m, double tol = kDefaultTol) {
  if (phi.family() != Family::power || !(phi.exponent() > 1.0)) {
    throw PreconditionError("pconvex check needs phi = power(p) with p > 1");
  }
  if (!(n >= 1 && n < m)) throw PreconditionError("pconvex check needs 1 <= n < m");
  if (!seq.declared_disjoint()) throw PreconditionError("pconvex check needs a declared-disjoint sequence");
  const auto fs = seq.prefix(m);
  if (!supports_disjoint(fs)) throw PreconditionError("pconvex check: sequence supports are not disjoint");

  const double p = phi.exponent();
  PConvexReport rep;
  rep.n = n;
  rep.m = m;
  rep.p = p;

  SimpleFunction g;
  SimpleFunction g_n;
  SimpleFunction power_sum;
  double sup_norm = 0.0;
  rep.identity_holds = true;
  for (std::size_t k = 1; k <= m; ++k) {
    const auto abs_f = lattice_abs(fs[k - 1]);
    const double kd = static_cast<double>(k);
    g = add(g, divide(abs_f, kd));
    power_sum = add(power_sum, abs_f.transform([&](double v) { return std::pow(v / kd, p); }));
    const auto root = power_sum.transform([&](double v) { return std::pow(v, 1.0 / p); });
    const auto err = SimpleFunction::combine(
        g, root, [](double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(a)); });
    rep.max_identity_error = std::max(rep.max_identity_error, err.max_abs());
    if (err.max_abs() > 1e-12) rep.identity_holds = false;
    sup_norm = std::max(sup_norm, luxemburg_norm(phi, fs[k - 1], tol));
    if (k == n) g_n = g;
  }
  CompensatedSum tail;
  for (std::size_t k = n + 1; k <= m; ++k) tail += std::pow(static_cast<double>(k), -p);
  rep.lhs = luxemburg_norm(phi, subtract(g, g_n), tol);
  rep.rhs = std::pow(tail.value(), 1.0 / p) * sup_norm;
  rep.slack = rep.rhs - rep.lhs;
  rep.holds = rep.lhs <= rep.rhs + tol;
  return rep;
}

/// For disjoint f_k: max_{k<=n} |A_k| == sum_{k<=n} |f_k|/k exactly.
inline bool disjoint_running_sup_identity(std::span<const SimpleFunction> fs) {
  const auto avgs = cesaro_averages(fs);
  SimpleFunction sup;
  SimpleFunction weighted;
  for (std::size_t k = 0; k < fs.size(); ++k) {
    sup = lattice_sup(sup, lattice_abs(avgs[k]));
    weighted = add(weighted, divide(lattice_abs(fs[k]), static_cast<double>(k + 1)));
    if (!(sup == weighted)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// sup-of-Cesaro-means inequality

namespace detail {

/// Indices (1-based) in {1..K} congruent to l mod N; class 0 is {N, 2N, ...}.
inline std::vector<std::size_t> congruence_class(std::size_t K, std::size_t N, std::size_t l) {
  std::vector<std::size_t> out;
  for (std::size_t i = (l == 0 ? N : l); i <= K; i += N) out.push_back(i);
  return out;
}

/// max_m | (sum of the first m class members) / m |.
inline SimpleFunction class_running_sup(std::span<const SimpleFunction> fs, const std::vector<std::size_t>& cls) {
  SimpleFunction sum;
  SimpleFunction sup;
  for (std::size_t j = 0; j < cls.size(); ++j) {
    sum = add(sum, fs[cls[j] - 1]);
    sup = lattice_sup(sup, lattice_abs(divide(sum, static_cast<double>(j + 1))));
  }
  return sup;
}

inline SimpleFunction tail_running_sup(std::span<const SimpleFunction> fs, std::size_t N) {
  const auto avgs = cesaro_averages(fs);
  SimpleFunction sup;
  for (std::size_t n = N; n <= fs.size(); ++n) sup = lattice_sup(sup, lattice_abs(avgs[n - 1]));
  return sup;
}

}  // namespace detail

struct SupCesReport {
  std::size_t K = 0;
  std::size_t N = 0;
  /// (N/2) max_{N<=n<=K} |A_n|.
  SimpleFunction lhs;
  /// sum over congruence classes of the class running sup.
  SimpleFunction rhs;
  bool holds = false;
  /// max over the refinement of lhs - rhs (negative when strict everywhere).
  double max_excess = 0.0;
  std::size_t violating_pieces = 0;
};

inline SupCesReport sup_ces_inequality_check(std::span<const SimpleFunction> fs, std::size_t N,
                                             double value_tol = 1e-12) {
  const std::size_t K = fs.size();
  if (!(N >= 1 && K >= N)) throw PreconditionError("sup-Cesaro check needs K >= N >= 1");
  SupCesReport rep;
  rep.K = K;
  rep.N = N;
  rep.lhs = scale(static_cast<double>(N) / 2.0, detail::tail_running_sup(fs, N));
  for (std::size_t l = 0; l < N; ++l) {
    rep.rhs = add(rep.rhs, detail::class_running_sup(fs, detail::congruence_class(K, N, l)));
  }
  rep.max_excess = -std::numeric_limits<double>::infinity();
  const auto diff = SimpleFunction::combine(rep.lhs, rep.rhs, [&](double a, double b) {
    return a - b > value_tol * std::max(1.0, std::fabs(b)) ? 1.0 : 0.0;
  });
  for (const auto& p : diff.pieces()) rep.violating_pieces += p.value != 0.0 ? 1 : 0;
  const auto excess = SimpleFunction::combine(rep.lhs, rep.rhs, [](double a, double b) { return a - b; });
  for (const auto& p : excess.pieces()) rep.max_excess = std::max(rep.max_excess, p.value);
  rep.holds = rep.violating_pieces == 0;
  return rep;
}

struct ClosedCesaroReport {
  std::size_t K = 0;
  std::size_t N = 0;
  /// integral phi(class running sup) for each congruence class.
  std::vector<double> class_modulars;
  bool premise_met = false;
  /// integral phi((N/2) max_{n>=N} |A_n|).
  double lhs = 0.0;
  /// integral phi(sum of class sups).
  double combined = 0.0;
  double sum_of_parts = 0.0;
  bool additivity_holds = false;
  bool bound_holds = false;
  double slack = 0.0;
};

inline ClosedCesaroReport closed_cesaro_modular_check(const OrliczFunction& phi, std::span<const SimpleFunction> fs,
                                                      std::size_t N, double tol = kDefaultTol) {
  const std::size_t K = fs.size();
  if (!(N >= 1 && K >= N)) throw PreconditionError("closed-Cesaro check needs K >= N >= 1");
  if (!supports_disjoint(fs)) throw PreconditionError("closed-Cesaro check needs a disjoint sequence");
  ClosedCesaroReport rep;
  rep.K = K;
  rep.N = N;
  std::vector<SimpleFunction> sups;
  rep.premise_met = true;
  for (std::size_t l = 0; l < N; ++l) {
    sups.push_back(detail::class_running_sup(fs, detail::congruence_class(K, N, l)));
    rep.class_modulars.push_back(modular(phi, sups.back()));
    if (rep.class_modulars.back() > 1.0 + tol) rep.premise_met = false;
  }
  if (!rep.premise_met) return rep;

  SimpleFunction combined;
  CompensatedSum parts;
  for (std::size_t l = 0; l < N; ++l) {
    combined = add(combined, sups[l]);
    parts += rep.class_modulars[l];
  }
  rep.combined = modular(phi, combined);
  rep.sum_of_parts = parts.value();
  rep.additivity_holds = std::fabs(rep.combined - rep.sum_of_parts) <= tol * std::max(1.0, rep.sum_of_parts);
  rep.lhs = modular(phi, scale(static_cast<double>(N) / 2.0, detail::tail_running_sup(fs, N)));
  rep.slack = static_cast<double>(N) - rep.lhs;
  rep.bound_holds = rep.lhs <= rep.combined + tol * std::max(1.0, rep.combined) &&
                    rep.lhs <= static_cast<double>(N) + tol;
  return rep;
}

}  // namespace orlab::cesaro
