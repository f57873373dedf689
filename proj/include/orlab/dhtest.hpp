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
/// Eligible sequences of weighted blocks and the ratio table
///   b_{n,m} = sum_{t in F_n} w_t * m * phi(t/m) / phi(t)
/// behind the disjoint weak-null and (dH) criteria.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "orlab/errors.hpp"
#include "orlab/numeric.hpp"
#include "orlab/orlicz.hpp"
#include "orlab/rational.hpp"
#include "orlab/simple_function.hpp"

namespace orlab::dh {

struct Block {
  std::vector<double> values;
  std::vector<Rational> weights;
};

/// Finite prefix of an eligible sequence. Growth to infinity cannot be seen
/// on a prefix; only strictly increasing block minima are checked.
class EligibleSequence {
 public:
  EligibleSequence() = default;

  explicit EligibleSequence(std::vector<Block> blocks, std::string label = "custom")
      : blocks_(std::move(blocks)), label_(std::move(label)) {
    for (std::size_t n = 0; n < blocks_.size(); ++n) {
      const Block& b = blocks_[n];
      const std::string where = "block " + std::to_string(n + 1);
      if (b.values.empty()) throw DomainError(where + " is empty");
      if (b.values.size() != b.weights.size()) throw DomainError(where + ": values and weights differ in length");
      Rational total(0);
      for (std::size_t i = 0; i < b.values.size(); ++i) {
        if (!(b.values[i] > 0.0) || !std::isfinite(b.values[i])) throw DomainError(where + ": values must be positive");
        if (i > 0 && !(b.values[i] > b.values[i - 1])) throw DomainError(where + ": values must be strictly increasing");
        if (b.weights[i] <= 0) throw DomainError(where + ": weights must be positive");
        total += b.weights[i];
      }
      if (total != 1) throw DomainError(where + ": weights sum to " + format_rational(total) + ", not 1");
      if (n > 0 && !(blocks_[n - 1].values.back() < b.values.front())) {
        throw DomainError(where + ": min does not exceed max of the previous block");
      }
    }
  }

  /// F_n = {2^n}.
  static EligibleSequence singleton_powers(std::size_t count) {
    std::vector<Block> blocks;
    for (std::size_t n = 1; n <= count; ++n) blocks.push_back({{std::ldexp(1.0, static_cast<int>(n))}, {Rational(1)}});
    return EligibleSequence(std::move(blocks), "singleton-powers");
  }

  /// F_n = {2^((n-1)k + j) : j < k} with uniform weights 1/k.
  static EligibleSequence geometric_blocks(std::size_t count, std::size_t k = 3) {
    if (k == 0) throw DomainError("geometric_blocks: k must be >= 1");
    std::vector<Block> blocks;
    for (std::size_t n = 1; n <= count; ++n) {
      Block b;
      for (std::size_t j = 0; j < k; ++j) {
        b.values.push_back(std::ldexp(1.0, static_cast<int>((n - 1) * k + j)));
        b.weights.emplace_back(1, static_cast<long long>(k));
      }
      blocks.push_back(std::move(b));
    }
    return EligibleSequence(std::move(blocks), "geometric-blocks");
  }

  /// Seeded random blocks of 1..4 values with small integer weight ratios.
  static EligibleSequence random(std::uint64_t seed, std::size_t count) {
    const CounterRng rng{seed};
    std::vector<Block> blocks;
    double t = 0.5 + rng.uniform(0, 0);
    std::uint64_t draw = 1;
    for (std::size_t n = 0; n < count; ++n) {
      Block b;
      const std::size_t size = 1 + rng.below(4, 1, n);
      std::vector<long long> raw;
      long long total = 0;
      for (std::size_t i = 0; i < size; ++i) {
        t *= 1.0 + 0.05 + rng.uniform(2, draw++);
        b.values.push_back(t);
        raw.push_back(1 + static_cast<long long>(rng.below(9, 3, draw++)));
        total += raw.back();
      }
      for (long long r : raw) b.weights.emplace_back(r, total);
      blocks.push_back(std::move(b));
    }
    return EligibleSequence(std::move(blocks), "random");
  }

  const std::vector<Block>& blocks() const { return blocks_; }
  std::size_t size() const { return blocks_.size(); }
  const Block& block(std::size_t n) const { return blocks_.at(n - 1); }
  const std::string& label() const { return label_; }

 private:
  std::vector<Block> blocks_;
  std::string label_ = "custom";
};

inline EligibleSequence builtin_sequence(const std::string& name, std::size_t count) {
  if (name == "singleton-powers") return EligibleSequence::singleton_powers(count);
  if (name == "geometric-blocks") return EligibleSequence::geometric_blocks(count);
  throw DomainError("unknown builtin blocks '" + name + "' (expected singleton-powers or geometric-blocks)");
}

// ---------------------------------------------------------------------------
// b table

struct BnmTable {
  std::size_t N = 0;
  std::size_t M = 0;
  /// entries[n-1][m-1] = b_{n,m}.
  std::vector<std::vector<double>> entries;
  /// b_m estimated as b_{N,m}.
  std::vector<double> limits;
  /// |b_{N,m} - b_{ceil(N/2),m}| < stab_tol; always false when N < 2.
  std::vector<bool> stabilized;
  double stab_tol = 0.0;
  bool monotone = true;
  std::size_t violation_n = 0;
  std::size_t violation_m = 0;

  double at(std::size_t n, std::size_t m) const { return entries.at(n - 1).at(m - 1); }
};

/// One entry. Weighted sums are taken in exact arithmetic over the rounded
/// ratios, so b_{n,1} = 1 exactly and per-value monotonicity carries over.
inline double b_entry(const OrliczFunction& phi, const Block& block, std::size_t m) {
  const double md = static_cast<double>(m);
  if (block.values.size() == 1) return phi.scaled_ratio(block.values.front(), md);
  Rational sum(0);
  for (std::size_t i = 0; i < block.values.size(); ++i) {
    sum += block.weights[i] * exact_rational(phi.scaled_ratio(block.values[i], md));
  }
  return to_double(sum);
}

inline BnmTable b_table(const OrliczFunction& phi, const EligibleSequence& F, std::size_t N, std::size_t M,
                        double stab_tol = 1e-9) {
  if (N == 0 || M == 0) throw DomainError("b_table: N and M must be >= 1");
  if (F.size() < N) {
    throw DomainError("b_table: sequence has " + std::to_string(F.size()) + " blocks, N = " + std::to_string(N));
  }
  for (std::size_t n = 1; n <= N; ++n) {
    for (double t : F.block(n).values) {
      if (!(phi(t) > 0.0)) throw DegenerateError("b_table: phi(" + std::to_string(t) + ") = 0 in block " + std::to_string(n));
    }
  }
  BnmTable tab;
  tab.N = N;
  tab.M = M;
  tab.stab_tol = stab_tol;
  tab.entries.assign(N, std::vector<double>(M));
  for (std::size_t n = 1; n <= N; ++n) {
    auto& row = tab.entries[n - 1];
    for (std::size_t m = 1; m <= M; ++m) {
      row[m - 1] = b_entry(phi, F.block(n), m);
      if (m > 1 && row[m - 1] > row[m - 2] && tab.monotone) {
        tab.monotone = false;
        tab.violation_n = n;
        tab.violation_m = m - 1;
      }
    }
  }
  const std::size_t half = (N + 1) / 2;
  for (std::size_t m = 1; m <= M; ++m) {
    const double top = tab.at(N, m);
    tab.limits.push_back(top);
    tab.stabilized.push_back(N >= 2 && std::fabs(top - tab.at(half, m)) < stab_tol);
  }
  return tab;
}

// ---------------------------------------------------------------------------
// weak-null criterion

enum class WeakNullVerdict { consistent, refuted, inconclusive };

inline std::string to_string(WeakNullVerdict v) {
  switch (v) {
    case WeakNullVerdict::consistent: return "consistent-with-weakly-null";
    case WeakNullVerdict::refuted: return "refuted";
    case WeakNullVerdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

struct WeakNullReport {
  WeakNullVerdict verdict = WeakNullVerdict::inconclusive;
  double epsilon = 0.0;
  std::size_t quadrant_entries = 0;
  double quadrant_min = 0.0;
  double quadrant_max = 0.0;
  std::string note;
};

/// Looks at b_{n,m} for n > N/2, m > M/2. A finite table can only agree or
/// disagree with the double limit being 0; it never proves weak nullity.
inline WeakNullReport weak_null_criterion(const BnmTable& tab, double epsilon, double flat_tol = 0.05) {
  if (tab.N == 0 || tab.M == 0) throw DomainError("weak_null_criterion: empty table");
  WeakNullReport rep;
  rep.epsilon = epsilon;
  rep.note = "finite truncation: verdict concerns b_{n,m} on the stored quadrant only";
  if (tab.N < 2 || tab.M < 2) {
    rep.note = "top-right quadrant empty (need N, M >= 2)";
    return rep;
  }
  rep.quadrant_min = std::numeric_limits<double>::infinity();
  for (std::size_t n = tab.N / 2 + 1; n <= tab.N; ++n) {
    for (std::size_t m = tab.M / 2 + 1; m <= tab.M; ++m) {
      const double v = tab.at(n, m);
      rep.quadrant_min = std::min(rep.quadrant_min, v);
      rep.quadrant_max = std::max(rep.quadrant_max, v);
      ++rep.quadrant_entries;
    }
  }
  if (rep.quadrant_max < epsilon) {
    rep.verdict = WeakNullVerdict::consistent;
  } else if (rep.quadrant_min >= epsilon && rep.quadrant_max - rep.quadrant_min <= flat_tol * rep.quadrant_max) {
    rep.verdict = WeakNullVerdict::refuted;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// series test

enum class SeriesVerdict { convergent, divergent, inconclusive };

inline std::string to_string(SeriesVerdict v) {
  switch (v) {
    case SeriesVerdict::convergent: return "convergent-trend";
    case SeriesVerdict::divergent: return "divergent-trend";
    case SeriesVerdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

struct SeriesReport {
  std::size_t N = 0;
  std::size_t M = 0;
  /// partial_sums[m-1] = sum_{j<=m} b_j / j.
  std::vector<double> partial_sums;
  /// Sums of b_m/m over [2^k, 2^(k+1)), complete blocks only.
  std::vector<double> dyadic_blocks;
  /// Ratios of consecutive dyadic block sums.
  std::vector<double> block_ratios;
  /// c = b_M and max_m |b_m/m - c/m|: how closely increments track c/m.
  double harmonic_constant = 0.0;
  double harmonic_deviation = 0.0;
  SeriesVerdict verdict = SeriesVerdict::inconclusive;
  std::string note;
};

struct SeriesOptions {
  double stab_tol = 1e-9;
  /// Last three dyadic ratios at or below this: geometric decay.
  double convergent_ratio = 0.9;
  /// Last three dyadic ratios at or above this: harmonic-like.
  double divergent_ratio = 0.98;
};

/// Condensation test on sum b_m/m: b_m is nonincreasing, so the series
/// converges iff the dyadic block sums do, and the block ratios settle near
/// 2^(1-p) for m^(-p)-like terms and near 1 for c/m.
inline SeriesReport dh_series_test(const OrliczFunction& phi, const EligibleSequence& F, std::size_t N,
                                   std::size_t M, const SeriesOptions& opt = {}) {
  const BnmTable tab = b_table(phi, F, N, M, opt.stab_tol);
  for (std::size_t m = 1; m <= M; ++m) {
    if (!tab.stabilized[m - 1]) {
      throw PreconditionError("b_m not stabilized at m = " + std::to_string(m) + " with N = " + std::to_string(N) +
                              "; increase N");
    }
  }
  SeriesReport rep;
  rep.N = N;
  rep.M = M;
  CompensatedSum sum;
  rep.harmonic_constant = tab.limits.back();
  for (std::size_t m = 1; m <= M; ++m) {
    const double md = static_cast<double>(m);
    const double inc = tab.limits[m - 1] / md;
    sum += inc;
    rep.partial_sums.push_back(sum.value());
    rep.harmonic_deviation = std::max(rep.harmonic_deviation, std::fabs(inc - rep.harmonic_constant / md));
  }
  for (std::size_t lo = 1; 2 * lo - 1 <= M; lo *= 2) {
    CompensatedSum block;
    for (std::size_t m = lo; m < 2 * lo; ++m) block += tab.limits[m - 1] / static_cast<double>(m);
    rep.dyadic_blocks.push_back(block.value());
  }
  for (std::size_t k = 1; k < rep.dyadic_blocks.size(); ++k) {
    rep.block_ratios.push_back(rep.dyadic_blocks[k] / rep.dyadic_blocks[k - 1]);
  }
  if (rep.block_ratios.size() < 3) {
    rep.note = "fewer than four complete dyadic blocks; increase M";
    return rep;
  }
  const auto last = rep.block_ratios.end() - 3;
  const bool geometric = std::all_of(last, rep.block_ratios.end(), [&](double r) { return r <= opt.convergent_ratio; });
  const bool harmonic = std::all_of(last, rep.block_ratios.end(), [&](double r) { return r >= opt.divergent_ratio; });
  if (geometric) {
    rep.verdict = SeriesVerdict::convergent;
    rep.note = "dyadic block sums decay geometrically";
  } else if (harmonic) {
    rep.verdict = SeriesVerdict::divergent;
    rep.note = "dyadic block sums stay flat, increments track c/m";
  } else {
    rep.note = "dyadic block ratios between the geometric and harmonic thresholds";
  }
  return rep;
}

// ---------------------------------------------------------------------------
// realization

struct RoundingEntry {
  std::size_t block = 0;
  double t = 0.0;
  /// w_t / phi(t) as a double, and the stored rational measure.
  double target = 0.0;
  Rational measure;
  double abs_error = 0.0;
};

struct Realization {
  /// f_n = sum_{t in F_n} t chi_{A_t}, pairwise disjoint, packed from 0.
  std::vector<SimpleFunction> functions;
  std::vector<RoundingEntry> rounding;
  Rational total_measure{0};
  double max_abs_rounding = 0.0;
  BigInt max_denominator{1000000000};
};

inline Realization realize(const OrliczFunction& phi, const EligibleSequence& F, std::size_t K,
                           const BigInt& max_den = BigInt(1000000000)) {
  if (F.size() < K) throw DomainError("realize: sequence has only " + std::to_string(F.size()) + " blocks");
  Realization out;
  out.max_denominator = max_den;
  Rational cursor(0);
  for (std::size_t n = 1; n <= K; ++n) {
    const Block& b = F.block(n);
    std::vector<Piece> pieces;
    if (cursor > 0) pieces.push_back({cursor, 0.0});
    for (std::size_t i = 0; i < b.values.size(); ++i) {
      const double t = b.values[i];
      const double phi_t = phi(t);
      if (!(phi_t > 0.0) || !std::isfinite(phi_t)) {
        throw DegenerateError("realize: phi(t) is zero or non-finite in block " + std::to_string(n));
      }
      const Rational exact_target = b.weights[i] / exact_rational(phi_t);
      const Rational mu = limit_denominator(exact_target, max_den);
      if (mu == 0) throw NumericalError("realize: measure rounds to zero in block " + std::to_string(n));
      RoundingEntry e{n, t, to_double(exact_target), mu, to_double(abs(mu - exact_target))};
      out.max_abs_rounding = std::max(out.max_abs_rounding, e.abs_error);
      out.rounding.push_back(std::move(e));
      cursor += mu;
      if (cursor > 1) {
        throw PreconditionError("realize: capacity exceeded at block " + std::to_string(n) +
                                " (cumulative measure " + std::to_string(to_double(cursor)) + " > 1)");
      }
      pieces.push_back({cursor, t});
    }
    if (cursor < 1) pieces.push_back({Rational(1), 0.0});
    out.functions.push_back(SimpleFunction::from_pieces(std::move(pieces)));
  }
  out.total_measure = cursor;
  return out;
}

/// Bound on how far measure rounding moves integral phi(sum f_n / n).
inline double rounding_effect(const OrliczFunction& phi, const Realization& r) {
  CompensatedSum s;
  for (const auto& e : r.rounding) s += phi(e.t / static_cast<double>(e.block)) * e.abs_error;
  return s.value();
}

struct CrossCheckReport {
  std::size_t K = 0;
  /// integral phi(sum_{n<=K} f_n / n), evaluated on the realized pieces.
  double lhs = 0.0;
  /// sum_{n<=K} b_{n,n} / n.
  double rhs = 0.0;
  double difference = 0.0;
  double rounding_bound = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  /// Per-block Luxemburg norms of f_n (1 up to rounding).
  std::vector<double> norms;
  double max_norm_error = 0.0;
  double max_abs_rounding = 0.0;
};

inline CrossCheckReport cross_check_series_identity(const OrliczFunction& phi, const EligibleSequence& F,
                                                    std::size_t K, double tol = 1e-9) {
  CrossCheckReport rep;
  rep.K = K;
  if (K == 0) {
    rep.pass = true;
    return rep;
  }
  const Realization real = realize(phi, F, K);
  SimpleFunction sum;
  for (std::size_t n = 1; n <= K; ++n) {
    sum = add(sum, divide(real.functions[n - 1], static_cast<double>(n)));
    const double norm = luxemburg_norm(phi, real.functions[n - 1]);
    rep.norms.push_back(norm);
    rep.max_norm_error = std::max(rep.max_norm_error, std::fabs(norm - 1.0));
  }
  rep.lhs = modular(phi, sum);
  const BnmTable tab = b_table(phi, F, K, K);
  CompensatedSum rhs;
  for (std::size_t n = 1; n <= K; ++n) rhs += tab.at(n, n) / static_cast<double>(n);
  rep.rhs = rhs.value();
  rep.difference = std::fabs(rep.lhs - rep.rhs);
  rep.rounding_bound = rounding_effect(phi, real);
  rep.tolerance = tol + rep.rounding_bound;
  rep.pass = rep.difference <= rep.tolerance;
  rep.max_abs_rounding = real.max_abs_rounding;
  return rep;
}

}  // namespace orlab::dh
