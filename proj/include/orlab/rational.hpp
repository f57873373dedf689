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

#include <cmath>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "orlab/errors.hpp"

namespace orlab {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Exact value of a finite double.
inline Rational exact_rational(double x) {
  if (!std::isfinite(x)) throw DomainError("cannot represent non-finite value as rational");
  return Rational(x);
}

/// Parses "p/q" or "p" with arbitrary-size integers.
inline Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string_view::npos) {
      return Rational(BigInt(std::string(text)));
    }
    BigInt num(std::string(text.substr(0, slash)));
    BigInt den(std::string(text.substr(slash + 1)));
    if (den == 0) throw DomainError("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  } catch (const DomainError&) {
    throw;
  } catch (const std::exception&) {
    throw DomainError("malformed rational '" + std::string(text) + "'");
  }
}

inline std::string format_rational(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

/// Closest rational to `x` among those with denominator <= max_den
/// (continued-fraction best approximation of the exact value of x).
inline Rational limit_denominator(const Rational& x, const BigInt& max_den) {
  if (x < 0) throw DomainError("limit_denominator expects a nonnegative value");
  if (max_den < 1) throw DomainError("limit_denominator needs max_den >= 1");
  if (denominator(x) <= max_den) return x;
  BigInt p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  BigInt n = numerator(x), d = denominator(x);
  for (;;) {
    BigInt a = n / d;
    BigInt q2 = q0 + a * q1;
    if (q2 > max_den) break;
    BigInt p2 = p0 + a * p1;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    BigInt r = n - a * d;
    n = d;
    d = r;
    if (d == 0) break;
  }
  const BigInt k = (max_den - q0) / q1;
  const Rational bound1(p0 + k * p1, q0 + k * q1);
  const Rational bound2(p1, q1);
  const Rational e1 = abs(bound1 - x);
  const Rational e2 = abs(bound2 - x);
  return e2 <= e1 ? bound2 : bound1;
}

}  // namespace orlab
