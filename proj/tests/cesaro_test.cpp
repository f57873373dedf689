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

#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "orlab/cesaro.hpp"
#include "test_support.hpp"

namespace {

using orlab::OrliczFunction;
using orlab::Rational;
using orlab::SimpleFunction;
using orlab::cesaro::FunctionSequence;

// Pointwise recomputation of both sides of the sup-Cesaro inequality at the
// midpoint of every cell of the common refinement, in plain doubles.
struct PointwiseSides {
  double lhs = 0.0;
  double rhs = 0.0;
};

std::vector<PointwiseSides> pointwise_sides(const std::vector<SimpleFunction>& fs, std::size_t N) {
  std::set<Rational> cuts{Rational(0)};
  for (const auto& f : fs) {
    for (const auto& p : f.pieces()) cuts.insert(p.end);
  }
  std::vector<PointwiseSides> out;
  Rational prev(0);
  for (const auto& c : cuts) {
    if (c == 0) continue;
    const Rational x = (prev + c) / 2;
    prev = c;
    std::vector<double> v;
    for (const auto& f : fs) v.push_back(f.value_at(x));
    PointwiseSides s;
    double run = 0.0;
    for (std::size_t n = 1; n <= v.size(); ++n) {
      run += v[n - 1];
      if (n >= N) s.lhs = std::max(s.lhs, std::fabs(run / static_cast<double>(n)));
    }
    s.lhs *= static_cast<double>(N) / 2.0;
    for (std::size_t l = 0; l < N; ++l) {
      double sum = 0.0;
      double best = 0.0;
      std::size_t j = 0;
      for (std::size_t i = (l == 0 ? N : l); i <= v.size(); i += N) {
        sum += v[i - 1];
        best = std::max(best, std::fabs(sum / static_cast<double>(++j)));
      }
      s.rhs += best;
    }
    out.push_back(s);
  }
  return out;
}

TEST(Cesaro, DyadicBlocksTile) {
  auto [a1, b1] = orlab::cesaro::dyadic_block(1);
  EXPECT_EQ(a1, Rational(0));
  EXPECT_EQ(b1, Rational(1, 2));
  auto [a3, b3] = orlab::cesaro::dyadic_block(3);
  EXPECT_EQ(a3, Rational(3, 4));
  EXPECT_EQ(b3, Rational(7, 8));
}

TEST(Cesaro, AveragesOfConstants) {
  const auto seq = FunctionSequence::geometric_constant();
  const auto a = orlab::cesaro::cesaro_average(seq, 2);
  EXPECT_DOUBLE_EQ(a.value_at(Rational(1, 3)), 0.375);
  EXPECT_TRUE(orlab::cesaro::cesaro_average(FunctionSequence::zero(), 5).is_zero());
}

TEST(Cesaro, GeneratorsAreDeterministicAndDisjointWhereDeclared) {
  const auto s1 = FunctionSequence::random_disjoint_blocks(4).prefix(12);
  const auto s2 = FunctionSequence::random_disjoint_blocks(4).prefix(12);
  EXPECT_EQ(s1, s2);
  EXPECT_TRUE(orlab::cesaro::supports_disjoint(s1));
  EXPECT_TRUE(orlab::cesaro::supports_disjoint(FunctionSequence::dyadic_normalized(2, 1).prefix(10)));
  EXPECT_FALSE(orlab::cesaro::supports_disjoint(FunctionSequence::geometric_constant().prefix(2)));
}

TEST(Cesaro, DisjointRunningSupIdentity) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto fs = FunctionSequence::random_disjoint_blocks(seed).prefix(10);
    EXPECT_TRUE(orlab::cesaro::disjoint_running_sup_identity(fs)) << seed;
  }
}

TEST(Cesaro, SupCesInequalityMatchesPointwiseOracle) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const std::size_t N = 1 + seed % 6;
    const std::size_t K = N + seed % 20;
    const auto fs = FunctionSequence::random_steps(seed).prefix(K);
    const auto rep = orlab::cesaro::sup_ces_inequality_check(fs, N);
    EXPECT_TRUE(rep.holds) << seed;
    for (const auto& s : pointwise_sides(fs, N)) EXPECT_LE(s.lhs, s.rhs + 1e-12) << seed;
    // The library's sides agree with the pointwise ones on the lhs maximum.
    double lhs_max = 0.0;
    for (const auto& s : pointwise_sides(fs, N)) lhs_max = std::max(lhs_max, s.lhs);
    EXPECT_NEAR(rep.lhs.max_abs(), lhs_max, 1e-12) << seed;
  }
}

TEST(Cesaro, SupCesRejectsShortSequence) {
  const auto fs = FunctionSequence::zero().prefix(2);
  EXPECT_THROW(orlab::cesaro::sup_ces_inequality_check(fs, 3), orlab::PreconditionError);
}

TEST(Cesaro, PConvexBoundOnDisjointSequences) {
  for (double p : {1.5, 2.0, 3.0}) {
    const auto phi = OrliczFunction::power(p);
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
      const auto r = orlab::cesaro::disjoint_p_convex_bound_check(
          phi, FunctionSequence::random_disjoint_blocks(seed), 1 + seed % 3, 6 + seed % 4);
      EXPECT_TRUE(r.identity_holds) << p << " " << seed;
      EXPECT_TRUE(r.holds) << p << " " << seed << " " << r.lhs << " " << r.rhs;
    }
    // Dyadic normalized: every f_k has L^p norm c, and the bound is tight.
    const auto tight = orlab::cesaro::disjoint_p_convex_bound_check(phi, FunctionSequence::dyadic_normalized(p, 1), 2, 8);
    EXPECT_NEAR(tight.lhs, tight.rhs, 1e-7);
  }
  EXPECT_THROW(orlab::cesaro::disjoint_p_convex_bound_check(OrliczFunction::power(2),
                                                            FunctionSequence::geometric_constant(), 1, 3),
               orlab::PreconditionError);
  EXPECT_THROW(orlab::cesaro::disjoint_p_convex_bound_check(OrliczFunction::linear(),
                                                            FunctionSequence::dyadic_normalized(2, 1), 1, 3),
               orlab::PreconditionError);
}

TEST(Cesaro, ClosedCesaroModularChain) {
  const auto phi = OrliczFunction::power(2);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto fs = FunctionSequence::random_disjoint_blocks(seed).prefix(12);
    const auto r = orlab::cesaro::closed_cesaro_modular_check(phi, fs, 3);
    if (!r.premise_met) continue;
    EXPECT_TRUE(r.additivity_holds) << seed;
    EXPECT_TRUE(r.bound_holds) << seed;
    EXPECT_LE(r.lhs, 3.0 + 1e-9);
  }
}

TEST(Cesaro, DiagnosticsVerdicts) {
  const auto phi = OrliczFunction::power(2);
  const auto bounded = orlab::cesaro::diagnose_order_boundedness(phi, FunctionSequence::geometric_constant(), 12);
  EXPECT_EQ(bounded.verdict, orlab::cesaro::TrendVerdict::bounded_trend);
  // Disjoint bumps of constant L^2 norm: sup_n |A_n| = sum |f_k|/k grows
  // like sqrt(log n).
  const auto growing = orlab::cesaro::diagnose_order_boundedness(phi, FunctionSequence::dyadic_normalized(2, 1), 14);
  EXPECT_EQ(growing.verdict, orlab::cesaro::TrendVerdict::unbounded_trend);
  EXPECT_THROW(orlab::cesaro::diagnose_order_boundedness(phi, FunctionSequence::zero(), 1), orlab::DomainError);
}

TEST(Cesaro, IndependentCopiesHaveTheSameDistribution) {
  const auto f = SimpleFunction::from_pieces({{Rational(1, 4), 3.0}, {Rational(1), 1.0}});
  const auto seq = FunctionSequence::independent_copies(f);
  const auto d = orlab::distribution(f);
  for (std::size_t k = 1; k <= 4; ++k) EXPECT_EQ(orlab::distribution(seq.at(k)), d) << k;
  // Independence: P(f_1 = 3, f_2 = 3) = 1/16.
  const auto both = SimpleFunction::combine(seq.at(1), seq.at(2), [](double a, double b) { return a == 3 && b == 3 ? 1.0 : 0.0; });
  EXPECT_EQ(orlab::distribution(both).support, Rational(1, 16));
}

}  // namespace
