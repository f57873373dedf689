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
#include <cstdint>
#include <vector>

#include "orlab/errors.hpp"

namespace orlab {

inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kGridRatio = 1.05;

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// `count` points lo * (hi/lo)^(i/count), i = 1..count: a geometric grid of
/// the half-open interval (lo, hi].
inline std::vector<double> geometric_grid_between(double lo, double hi,
                                                  std::size_t count) {
  if (!(lo > 0.0) || !(hi > lo) || count == 0) {
    throw DomainError("geometric grid needs 0 < lo < hi and count >= 1");
  }
  std::vector<double> grid;
  grid.reserve(count);
  const double log_span = std::log(hi / lo);
  for (std::size_t i = 1; i <= count; ++i) {
    grid.push_back(i == count ? hi
                              : lo * std::exp(log_span * static_cast<double>(i) /
                                              static_cast<double>(count)));
  }
  return grid;
}

/// Ascending geometric grid with fixed ratio ending at `hi`:
/// hi * ratio^-(count-1), ..., hi / ratio, hi.
inline std::vector<double> geometric_grid_down(double hi, std::size_t count,
                                               double ratio = kGridRatio) {
  if (!(hi > 0.0) || !(ratio > 1.0) || count == 0) {
    throw DomainError("geometric grid needs hi > 0, ratio > 1, count >= 1");
  }
  std::vector<double> grid(count);
  double t = hi;
  for (std::size_t i = count; i-- > 0;) {
    grid[i] = t;
    t /= ratio;
  }
  return grid;
}

inline double harmonic(std::size_t n) {
  CompensatedSum s;
  for (std::size_t m = 1; m <= n; ++m) s += 1.0 / static_cast<double>(m);
  return s.value();
}

/// Counter-based generator: every draw is a pure function of
/// (seed, stream, index), so results do not depend on evaluation order.
struct CounterRng {
  std::uint64_t seed = 0;

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t bits(std::uint64_t stream, std::uint64_t index) const {
    return mix(mix(mix(seed) ^ stream) ^ index);
  }

  /// Uniform double in [0, 1).
  double uniform(std::uint64_t stream, std::uint64_t index) const {
    return static_cast<double>(bits(stream, index) >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n, std::uint64_t stream,
                      std::uint64_t index) const {
    return static_cast<std::uint64_t>(uniform(stream, index) *
                                      static_cast<double>(n)) %
           n;
  }
};

}  // namespace orlab
