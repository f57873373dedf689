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

#include <gtest/gtest.h>

#include "orlab/orlicz.hpp"
#include "test_support.hpp"

namespace {

using orlab::CounterRng;
using orlab::Delta2Verdict;
using orlab::OrliczFunction;

// Brute-force sup of s t - phi(t) on a fine grid refined around the best
// point. Independent of the ternary search in the library.
double brute_conjugate(const OrliczFunction& phi, double s, double t_hi) {
  double best = 0.0;
  double best_t = 0.0;
  const int n = 200000;
  for (int i = 0; i <= n; ++i) {
    const double t = t_hi * i / n;
    const double g = s * t - phi(t);
    if (g > best) {
      best = g;
      best_t = t;
    }
  }
  const double h = t_hi / n;
  for (int i = -1000; i <= 1000; ++i) {
    const double t = best_t + h * i / 1000.0;
    if (t < 0) continue;
    best = std::max(best, s * t - phi(t));
  }
  return best;
}

TEST(Orlicz, FactoriesRejectBadInput) {
  EXPECT_THROW(OrliczFunction::power(0.5), orlab::DomainError);
  EXPECT_THROW(OrliczFunction::power_log(std::nan("")), orlab::DomainError);
  EXPECT_THROW(OrliczFunction::piecewise_linear({{0, 0}}), orlab::DomainError);
  EXPECT_THROW(OrliczFunction::piecewise_linear({{1, 0}, {2, 1}}), orlab::DomainError);
  EXPECT_THROW(OrliczFunction::piecewise_linear({{0, 0}, {2, 1}, {1, 3}}), orlab::DomainError);
  EXPECT_THROW(OrliczFunction::power(2)(-1.0), orlab::DomainError);
}

TEST(Orlicz, EvaluatesFamilies) {
  EXPECT_DOUBLE_EQ(OrliczFunction::power(2)(3.0), 9.0);
  EXPECT_DOUBLE_EQ(OrliczFunction::power_log(1)(1.0), std::log(2.0));
  EXPECT_DOUBLE_EQ(OrliczFunction::linear()(2.5), 2.5);
  // Small-argument branch against the Taylor series through t^6.
  const double t = 1e-3;
  EXPECT_NEAR(OrliczFunction::exp_minus_linear()(t),
              t * t / 2 + t * t * t / 6 + std::pow(t, 4) / 24 + std::pow(t, 5) / 120 + std::pow(t, 6) / 720, 1e-21);
  EXPECT_NEAR(OrliczFunction::exp_minus_linear()(1.0), std::exp(1.0) - 2.0, 1e-15);
  const auto pw = OrliczFunction::piecewise_linear({{0, 0}, {1, 1}, {2, 3}});
  EXPECT_DOUBLE_EQ(pw(1.5), 2.0);
  EXPECT_DOUBLE_EQ(pw(4.0), 7.0);  // last segment extends
}

TEST(Orlicz, ValidateAcceptsBuiltins) {
  for (const auto& [name, phi] : orlab::testing::builtin_families()) {
    const auto r = orlab::validate(phi);
    EXPECT_TRUE(r.pass) << name << ": " << r.violation;
  }
}

TEST(Orlicz, ValidateNamesConvexityFailure) {
  const auto r = orlab::validate(OrliczFunction::piecewise_linear({{0, 0}, {1, 2}, {2, 3}}));
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.violation, "not convex");
  ASSERT_TRUE(r.knot.has_value());
  EXPECT_EQ(*r.knot, 1u);
  const auto flat = orlab::validate(OrliczFunction::piecewise_linear({{0, 0}, {1, 0}}));
  EXPECT_EQ(flat.violation, "constant");
  const auto down = orlab::validate(OrliczFunction::piecewise_linear({{0, 0}, {1, -1}, {2, 0}}));
  EXPECT_EQ(down.violation, "not nondecreasing");
}

TEST(Orlicz, ConjugateClosedForms) {
  const auto sq = OrliczFunction::power(2);
  for (double s = 0.0; s <= 10.0; s += 0.5) EXPECT_NEAR(orlab::conjugate(sq, s).value, s * s / 4, 1e-6) << s;
  // power(3): phi*(s) = 2 (s/3)^(3/2).
  const auto cube = OrliczFunction::power(3);
  for (double s : {0.3, 1.0, 4.0}) EXPECT_NEAR(orlab::conjugate(cube, s).value, 2 * std::pow(s / 3, 1.5), 1e-6);
  // e^t - t - 1: phi*(s) = (1+s) log(1+s) - s.
  const auto ex = OrliczFunction::exp_minus_linear();
  for (double s : {0.1, 1.0, 5.0}) EXPECT_NEAR(orlab::conjugate(ex, s).value, (1 + s) * std::log1p(s) - s, 1e-6);
}

TEST(Orlicz, ConjugateMatchesBruteForce) {
  for (const auto& [name, phi] : orlab::testing::builtin_families()) {
    for (double s : {0.2, 0.9, 1.7}) {
      const auto c = orlab::conjugate(phi, s);
      if (c.infinite) continue;
      EXPECT_NEAR(c.value, brute_conjugate(phi, s, 50.0), 1e-6) << name << " s=" << s;
    }
  }
}

TEST(Orlicz, ConjugateOfLinearIsIndicator) {
  const auto lin = OrliczFunction::linear();
  EXPECT_EQ(orlab::conjugate(lin, 0.5).value, 0.0);
  EXPECT_EQ(orlab::conjugate(lin, 1.0).value, 0.0);
  EXPECT_TRUE(orlab::conjugate(lin, 1.5).infinite);
  const auto pw = OrliczFunction::piecewise_linear({{0, 0}, {1, 1}, {2, 3}});
  EXPECT_TRUE(orlab::conjugate(pw, 2.5).infinite);
  EXPECT_NEAR(orlab::conjugate(pw, 2.0).value, 1.0, 1e-9);  // attained on [1, inf)
}

TEST(Orlicz, YoungInequalityProperty) {
  const CounterRng rng{11};
  std::uint64_t i = 0;
  for (const auto& [name, phi] : orlab::testing::builtin_families()) {
    for (int k = 0; k < 200; ++k, ++i) {
      const double s = 6.0 * rng.uniform(1, i);
      const double t = 8.0 * rng.uniform(2, i);
      const auto c = orlab::conjugate(phi, s);
      if (c.infinite) continue;
      EXPECT_LE(s * t, phi(t) + c.value + 1e-9 * std::max(1.0, s * t)) << name;
    }
  }
}

TEST(Orlicz, Delta2Homogeneity) {
  for (double p : {1.5, 2.0, 3.0}) {
    const auto r = orlab::delta2_check(OrliczFunction::power(p), 1.0, 1e6);
    EXPECT_EQ(r.verdict, Delta2Verdict::holds);
    EXPECT_NEAR(r.c_est, std::pow(2.0, p), 1e-9);
  }
  const auto ex = orlab::delta2_check(OrliczFunction::exp_minus_linear(), 1.0, 600.0);
  EXPECT_EQ(ex.verdict, Delta2Verdict::fails);
  EXPECT_TRUE(ex.witness_t.has_value());
}

TEST(Orlicz, Delta2RejectsBadRange) {
  EXPECT_THROW(orlab::delta2_check(OrliczFunction::power(2), 5.0, 1.0), orlab::DomainError);
}

TEST(Orlicz, KrProbe) {
  // power(p): phi(t) > phi(Lt)/(2L) iff L^(p-1) < 2, for every t.
  for (double p : {1.5, 2.0, 3.0}) {
    for (double L : {2.0, 3.0, 10.0}) {
      const auto r = orlab::kr_dual_delta2_probe(OrliczFunction::power(p), L, 0.0, 1e6);
      const double lp = std::pow(L, p - 1.0);
      if (lp > 2.0) {
        EXPECT_FALSE(r.witness_t.has_value()) << p << " " << L;
      } else if (lp < 2.0) {
        EXPECT_TRUE(r.witness_t.has_value()) << p << " " << L;
      }
    }
  }
  const auto lin = orlab::kr_dual_delta2_probe(OrliczFunction::linear(), 5.0, 100.0, 1e6);
  ASSERT_TRUE(lin.witness_t.has_value());
  EXPECT_GT(*lin.witness_t, 100.0);
  const auto pl = orlab::kr_dual_delta2_probe(OrliczFunction::power_log(1), 4.0, 1e3, 1e8);
  EXPECT_TRUE(pl.witness_t.has_value());
}

TEST(Orlicz, ScaledRatioPastOverflow) {
  // Direct quotient overflows; the log-space value is m exp(t/m - t).
  const auto ex = OrliczFunction::exp_minus_linear();
  EXPECT_EQ(ex.scaled_ratio(1000.0, 1.0), 1.0);
  EXPECT_NEAR(ex.scaled_ratio(1000.0, 1.001), 1.001 * std::exp(1000.0 / 1.001 - 1000.0), 1e-15);
  EXPECT_NEAR(ex.scaled_ratio(1000.0, 2.0), 2.0 * std::exp(-500.0), 1e-12 * std::exp(-500.0));
}

TEST(Orlicz, ScaledRatioMatchesDirectQuotient) {
  for (const auto& [name, phi] : orlab::testing::builtin_families()) {
    for (double t : {0.7, 3.0, 40.0, 300.0}) {
      for (double m : {1.0, 2.0, 7.0}) {
        const double direct = m * phi(t / m) / phi(t);
        EXPECT_NEAR(phi.scaled_ratio(t, m), direct, 1e-13 * std::max(1.0, direct)) << name;
      }
    }
  }
}

}  // namespace
