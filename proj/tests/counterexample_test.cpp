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

#include "orlab/counterexample.hpp"
#include "orlab/io.hpp"

namespace {

using orlab::OrliczFunction;
using orlab::Rational;
using orlab::SimpleFunction;
namespace ce = orlab::counterexample;

const ce::Certificate& linear_cert() {
  static const ce::Certificate c = ce::build_certificate(OrliczFunction::linear(), 200);
  return c;
}

double harmonic(std::size_t n) {
  double h = 0.0;
  for (std::size_t m = n; m >= 1; --m) h += 1.0 / static_cast<double>(m);
  return h;
}

TEST(Counterexample, ExactPowerIntegralExamples) {
  const auto f = SimpleFunction::from_pieces({{Rational(1, 2), 2.0}, {Rational(1), 1.0}});
  EXPECT_NEAR(ce::exact_power_integral(f, 2, 1.0, OrliczFunction::power(2)), 0.875, 1e-15);
  const auto one = SimpleFunction::constant(1.0);
  for (std::size_t n : {1u, 3u, 10u}) {
    EXPECT_NEAR(ce::exact_power_integral(one, n, 2.0, OrliczFunction::power(2)), 0.25 / n, 1e-15);
  }
  // n = 1 reduces to the modular.
  EXPECT_NEAR(ce::exact_power_integral(f, 1, 3.0, OrliczFunction::power_log(1)),
              orlab::modular(OrliczFunction::power_log(1), orlab::divide(f, 3.0)), 1e-15);
  EXPECT_THROW(ce::exact_power_integral(f, 0, 1.0, OrliczFunction::linear()), orlab::DomainError);
  EXPECT_THROW(ce::exact_power_integral(f, 1, 0.0, OrliczFunction::linear()), orlab::DomainError);
}

TEST(Counterexample, ExactPowerIntegralAgainstQuadrature) {
  // Midpoint rule on y^(n-1) phi(f(y)) over each piece.
  const auto f = SimpleFunction::from_pieces({{Rational(1, 5), 0.0}, {Rational(3, 5), 4.0}, {Rational(9, 10), 1.5}, {Rational(1), 7.0}});
  const auto phi = OrliczFunction::power_log(1);
  for (std::size_t n : {2u, 7u, 30u}) {
    double q = 0.0;
    const int steps = 200000;
    for (int i = 0; i < steps; ++i) {
      const double y = (i + 0.5) / steps;
      q += std::pow(y, n - 1.0) * phi(f.value_at(orlab::exact_rational(y)) / 2.0) / steps;
    }
    EXPECT_NEAR(ce::exact_power_integral(f, n, 2.0, phi), q, 1e-8) << n;
  }
}

TEST(Counterexample, LinearCertificateVerifies) {
  const auto& c = linear_cert();
  const auto rep = ce::verify_certificate(c);
  for (const auto& check : rep.checks) EXPECT_TRUE(check.pass) << check.name << ": " << check.detail;
  EXPECT_TRUE(c.tail.proved);
  EXPECT_EQ(c.a.size(), 200u);
  EXPECT_GT(c.remainder_measure, 0.0);
  for (std::size_t n = 1; n <= 201; ++n) EXPECT_DOUBLE_EQ(c.C[n - 1], std::sqrt(harmonic(n)));
}

TEST(Counterexample, TamperedCertificateFails) {
  auto c = linear_cert();
  c.a[10] *= 1.0000001;
  const auto rep = ce::verify_certificate(c);
  EXPECT_FALSE(rep.all_pass());
  auto d = linear_cert();
  d.d_upper *= 0.99;
  EXPECT_FALSE(ce::verify_certificate(d).all_pass());
}

TEST(Counterexample, CertificateRoundTripsThroughJson) {
  const auto& c = linear_cert();
  const auto text = orlab::io::to_json(c).dump();
  const auto back = orlab::io::certificate_from_json(nlohmann::json::parse(text));
  EXPECT_TRUE(ce::verify_certificate(back).all_pass());
  EXPECT_EQ(back.f, c.f);
  EXPECT_EQ(back.a, c.a);
}

TEST(Counterexample, BoundFormulas) {
  const auto& c = linear_cert();
  const auto b1 = ce::certify_modular_lower_bound(c, 1);
  EXPECT_NEAR(b1.truncated, (c.S[0] - c.S[200]) / (4.0 * c.C[0] * c.d_upper), 1e-15);
  EXPECT_NEAR(b1.with_tail, 1.0 / (4.0 * c.d_upper), 1e-15);
  EXPECT_NEAR(ce::norm_lower_bound(c, 1).value, 1.0 / (4.0 * c.d_upper), 1e-15);
  // The direct sum is the sharpest line of the chain and dominates the rest.
  for (std::size_t n : {1u, 2u, 5u, 20u, 100u}) {
    const auto b = ce::certify_modular_lower_bound(c, n);
    EXPECT_GE(b.direct, b.truncated) << n;
  }
  EXPECT_THROW(ce::certify_modular_lower_bound(c, 200), orlab::PreconditionError);
}

TEST(Counterexample, NormBoundsGrowLikeSqrtHarmonic) {
  const auto& c = linear_cert();
  const double ratio = ce::norm_lower_bound(c, 100).value / ce::norm_lower_bound(c, 10).value;
  EXPECT_NEAR(ratio, std::sqrt(harmonic(100) / harmonic(10)), 0.01 * ratio);
  double prev = 0.0;
  for (std::size_t n = 1; n < 200; ++n) {
    const double v = ce::norm_lower_bound(c, n).value;
    EXPECT_GE(v, prev);
    EXPECT_GE(v, 0.9 * std::sqrt(harmonic(n)) / (4.0 * c.d_upper));
    prev = v;
  }
}

TEST(Counterexample, BoundIsMonotoneInD) {
  const auto& c = linear_cert();
  for (std::size_t n : {1u, 10u, 150u}) {
    const auto lo = ce::modular_bound_at(c, n, c.d_lower);
    const auto hi = ce::modular_bound_at(c, n, c.d_upper);
    EXPECT_GE(lo.truncated, hi.truncated);
    EXPECT_GE(lo.with_tail, hi.with_tail);
  }
}

TEST(Counterexample, PowerLogBuilds) {
  const auto c = ce::build_certificate(OrliczFunction::power_log(1), 50);
  EXPECT_TRUE(ce::verify_certificate(c).all_pass());
  for (std::size_t i = 1; i < c.a.size(); ++i) EXPECT_GT(c.a[i], c.a[i - 1]);
  for (std::size_t i = 1; i < c.bounds.size(); ++i) EXPECT_GT(c.bounds[i].norm_lower, c.bounds[i - 1].norm_lower);
}

TEST(Counterexample, PowerFamilyExhaustsWhereAlgebraPredicts) {
  // (LPhi1) for power(p) reads (n C_n)^(p-1) <= 2, independent of a.
  for (double p : {1.2, 1.5, 2.0, 3.0}) {
    std::size_t predicted = 0;
    for (std::size_t n = 1; n < 100 && predicted == 0; ++n) {
      if (std::pow(n * std::sqrt(harmonic(n)), p - 1.0) > 2.0) predicted = n;
    }
    try {
      ce::build_certificate(OrliczFunction::power(p), 100);
      ADD_FAILURE() << "power(" << p << ") should exhaust";
    } catch (const ce::SearchExhausted& e) {
      EXPECT_EQ(e.n(), predicted) << p;
      EXPECT_NE(e.witness().find("algebraic"), std::string::npos);
      if (p >= 1.5) {
        EXPECT_LE(e.n(), 3u);
      }
    }
  }
  try {
    ce::build_certificate(OrliczFunction::power(2), 2);
    ADD_FAILURE();
  } catch (const ce::SearchExhausted& e) {
    EXPECT_EQ(e.n(), 2u);
  }
}

TEST(Counterexample, RejectsBadInput) {
  EXPECT_THROW(ce::build_certificate(OrliczFunction::linear(), 1), orlab::DomainError);
  EXPECT_THROW(ce::build_certificate(OrliczFunction::piecewise_linear({{0, 0}, {1, 2}, {2, 3}}), 5),
               orlab::PreconditionError);
}

TEST(Counterexample, MonteCarlo) {
  const auto& c = linear_cert();
  const auto r2 = ce::mc_sanity_check(c, 2, 100000, 42);
  EXPECT_TRUE(r2.consistent);
  const auto r1 = ce::mc_sanity_check(c, 1, 100000, 42);
  ASSERT_TRUE(r1.exact.has_value());
  EXPECT_NEAR(*r1.exact, orlab::modular(c.phi, orlab::divide(c.f, c.C[0])), 1e-12);
  EXPECT_TRUE(*r1.matches_exact);
  // Constant f: the estimate is exact with zero spread.
  const auto k = ce::mc_cesaro_max_modular(OrliczFunction::power(2), SimpleFunction::constant(3.0), 4, 2.0, 1000, 1);
  EXPECT_DOUBLE_EQ(k.mean, 2.25);
  EXPECT_EQ(k.stderr_, 0.0);
  EXPECT_THROW(ce::mc_sanity_check(c, 21, 100000, 1), orlab::PreconditionError);
  EXPECT_THROW(ce::mc_sanity_check(c, 2, 100, 1), orlab::PreconditionError);
}

TEST(Counterexample, MonteCarloIsDeterministic) {
  const auto& c = linear_cert();
  const auto a = ce::mc_cesaro_max_modular(c.phi, c.f, 3, c.C[2], 20000, 9);
  const auto b = ce::mc_cesaro_max_modular(c.phi, c.f, 3, c.C[2], 20000, 9);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.stderr_, b.stderr_);
}

TEST(Counterexample, DerivedProfileIsCoarseCopy) {
  const auto& c = linear_cert();
  const auto g = ce::derived_profile(c, 3);
  EXPECT_LE(g.size(), 4u);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_LE(boost::multiprecision::denominator(g.pieces()[i].end), 65536);
  }
}

}  // namespace
