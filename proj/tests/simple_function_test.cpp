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

#include "orlab/rational.hpp"
#include "orlab/simple_function.hpp"
#include "test_support.hpp"

namespace {

using orlab::OrliczFunction;
using orlab::Piece;
using orlab::Rational;
using orlab::SimpleFunction;

SimpleFunction make(std::vector<Piece> p) { return SimpleFunction::from_pieces(std::move(p)); }

TEST(Rational, LimitDenominator) {
  EXPECT_EQ(orlab::limit_denominator(Rational(3, 7), 10), Rational(3, 7));
  // Best approximations of pi's double with small denominators.
  const Rational pi = orlab::exact_rational(M_PI);
  EXPECT_EQ(orlab::limit_denominator(pi, 10), Rational(22, 7));
  EXPECT_EQ(orlab::limit_denominator(pi, 1000), Rational(355, 113));
  EXPECT_THROW(orlab::limit_denominator(Rational(-1, 2), 10), orlab::DomainError);
  EXPECT_EQ(orlab::parse_rational("6/8"), Rational(3, 4));
  EXPECT_THROW(orlab::parse_rational("1/0"), orlab::DomainError);
  EXPECT_THROW(orlab::parse_rational("x"), orlab::DomainError);
}

TEST(SimpleFunction, ConstructionValidates) {
  EXPECT_THROW(make({}), orlab::DomainError);
  EXPECT_THROW(make({{Rational(1, 2), 1.0}}), orlab::DomainError);
  EXPECT_THROW(make({{Rational(1, 2), 1.0}, {Rational(1, 2), 2.0}, {Rational(1), 0.0}}), orlab::DomainError);
  EXPECT_THROW(make({{Rational(1), std::nan("")}}), orlab::DomainError);
}

TEST(SimpleFunction, CanonicalizesEqualNeighbours) {
  const auto f = make({{Rational(1, 4), 2.0}, {Rational(1, 2), 2.0}, {Rational(1), -0.0}});
  ASSERT_EQ(f.size(), 2u);
  EXPECT_EQ(f.pieces()[0].end, Rational(1, 2));
  EXPECT_FALSE(std::signbit(f.pieces()[1].value));
}

TEST(SimpleFunction, LatticeOperationsOnCommonRefinement) {
  const auto f = make({{Rational(1, 3), 1.0}, {Rational(1), -2.0}});
  const auto g = make({{Rational(1, 2), 0.5}, {Rational(1), 3.0}});
  const auto s = orlab::lattice_sup(f, g);
  EXPECT_EQ(s.value_at(Rational(1, 4)), 1.0);
  EXPECT_EQ(s.value_at(Rational(2, 5)), 0.5);
  EXPECT_EQ(s.value_at(Rational(3, 4)), 3.0);
  const auto d = orlab::subtract(f, f);
  EXPECT_TRUE(d.is_zero());
  EXPECT_EQ(orlab::lattice_abs(f).value_at(Rational(1, 2)), 2.0);
  EXPECT_TRUE(orlab::pointwise_le(orlab::lattice_inf(f, g), orlab::lattice_sup(f, g)));
}

TEST(SimpleFunction, RearrangementExamples) {
  // |f| = 1 on [0,1/4), 3 on [1/4,1/2), 2 on [1/2,1): f* = 3, 2, 1.
  const auto f = make({{Rational(1, 4), 1.0}, {Rational(1, 2), -3.0}, {Rational(1), 2.0}});
  const auto r = orlab::rearrange(f);
  EXPECT_EQ(r, make({{Rational(1, 4), 3.0}, {Rational(3, 4), 2.0}, {Rational(1), 1.0}}));
  // Already nonincreasing and nonnegative: fixed point.
  EXPECT_EQ(orlab::rearrange(r), r);
  EXPECT_TRUE(orlab::rearrange(SimpleFunction()).is_zero());
}

TEST(SimpleFunction, DistributionOfExample) {
  const auto f = make({{Rational(1, 4), 1.0}, {Rational(1, 2), -3.0}, {Rational(3, 4), 0.0}, {Rational(1), 1.0}});
  const auto d = orlab::distribution(f);
  ASSERT_EQ(d.thresholds, (std::vector<double>{0.0, 1.0, 3.0}));
  EXPECT_EQ(d.measures[0], Rational(3, 4));
  EXPECT_EQ(d.measures[1], Rational(1, 4));
  EXPECT_EQ(d.measures[2], Rational(0));
  EXPECT_EQ(d.support, Rational(3, 4));
  EXPECT_EQ(orlab::measure_above(d, 2.0), Rational(1, 4));
  EXPECT_EQ(orlab::measure_above(d, -1.0), Rational(1));
}

TEST(SimpleFunction, RearrangementIsEquimeasurableAndMonotone) {
  for (std::uint64_t i = 0; i < 300; ++i) {
    const auto f = orlab::testing::random_simple_function(5, i);
    const auto r = orlab::rearrange(f);
    EXPECT_EQ(orlab::distribution(f), orlab::distribution(r)) << i;
    for (std::size_t k = 1; k < r.size(); ++k) EXPECT_GE(r.pieces()[k - 1].value, r.pieces()[k].value);
    EXPECT_GE(r.pieces().back().value, 0.0);
  }
}

TEST(SimpleFunction, LuxemburgClosedFormOnIndicators) {
  for (double p : {1.0, 1.5, 2.0, 3.0}) {
    const auto phi = OrliczFunction::power(p);
    for (std::uint64_t i = 0; i < 40; ++i) {
      const Rational a = orlab::testing::random_unit_rational(9, i);
      const auto chi = SimpleFunction::indicator(Rational(0), a);
      EXPECT_NEAR(orlab::luxemburg_norm(phi, chi), std::pow(orlab::to_double(a), 1.0 / p), 1e-8);
    }
  }
  // Spec example (2, 1/4) -> 0.5.
  EXPECT_NEAR(orlab::luxemburg_norm(OrliczFunction::power(2), SimpleFunction::indicator(0, Rational(1, 4))), 0.5,
              1e-9);
}

TEST(SimpleFunction, LuxemburgNormProperties) {
  for (const auto& [name, phi] : orlab::testing::builtin_families()) {
    for (std::uint64_t i = 0; i < 30; ++i) {
      const auto f = orlab::testing::random_simple_function(21, i);
      if (f.is_zero()) {
        EXPECT_EQ(orlab::luxemburg_norm(phi, f), 0.0);
        continue;
      }
      const double n = orlab::luxemburg_norm(phi, f);
      // Modular at the norm is 1 (all families here are continuous).
      EXPECT_NEAR(orlab::modular(phi, orlab::divide(f, n)), 1.0, 1e-6) << name;
      // Homogeneity.
      EXPECT_NEAR(orlab::luxemburg_norm(phi, orlab::scale(3.0, f)), 3.0 * n, 1e-7 * n) << name;
      // Triangle inequality against another random function.
      const auto g = orlab::testing::random_simple_function(22, i);
      EXPECT_LE(orlab::luxemburg_norm(phi, orlab::add(f, g)), n + orlab::luxemburg_norm(phi, g) + 1e-8) << name;
      // Rearrangement invariance.
      EXPECT_NEAR(orlab::luxemburg_norm(phi, orlab::rearrange(f)), n, 1e-8) << name;
    }
  }
}

TEST(SimpleFunction, ModularOfStep) {
  const auto f = make({{Rational(1, 2), 2.0}, {Rational(1), 0.0}});
  EXPECT_DOUBLE_EQ(orlab::modular(OrliczFunction::power(2), f), 2.0);
  EXPECT_THROW(orlab::luxemburg_norm(OrliczFunction::power(2), f, 0.0), orlab::DomainError);
}

}  // namespace
