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
/// Finite certificate for the norm-divergence construction: a step function
/// f whose i.i.d. copies have Cesaro maxima h_n = max_{m<=n} (f_1+..+f_m)/m
/// with ||h_n|| >= C_n / (4 d), C_n = sqrt(H_n).
///
/// Naming: the breakpoints d_n / d are called beta_n here, to keep them apart
/// from the b_{n,m} ratios of the dH test.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "orlab/errors.hpp"
#include "orlab/numeric.hpp"
#include "orlab/orlicz.hpp"
#include "orlab/rational.hpp"
#include "orlab/simple_function.hpp"

namespace orlab::counterexample {

struct SearchOptions {
  double ratio = kGridRatio;
  std::size_t max_steps = 2000;
  /// Search floor: a_1 is looked for strictly above this value.
  double a_start = 1.0;
  /// Extra indices past n_max searched to evidence that the construction
  /// continues (0 means n_max extra indices).
  std::size_t tail_extension = 0;
};

/// No admissible a_n below the search cap. Signals that the conjugate of phi
/// plausibly satisfies Delta_2, i.e. the construction's premise fails.
class SearchExhausted : public Error {
 public:
  SearchExhausted(std::size_t n, std::string witness)
      : Error("search-exhausted at n = " + std::to_string(n) + ": " + witness), n_(n), witness_(std::move(witness)) {}
  std::size_t n() const { return n_; }
  const std::string& witness() const { return witness_; }

 private:
  std::size_t n_;
  std::string witness_;
};

/// C_n = sqrt(sum_{m<=n} 1/m), S_n = 1/C_n and S_n - S_{n+1} for n = 1..count.
struct HarmonicSequences {
  std::vector<double> H;
  std::vector<double> C;
  std::vector<double> S;
  /// S_n - S_{n+1}, computed without cancellation.
  std::vector<double> S_drop;

  double h(std::size_t n) const { return H.at(n - 1); }
  double c(std::size_t n) const { return C.at(n - 1); }
  double s(std::size_t n) const { return S.at(n - 1); }
  double s_drop(std::size_t n) const { return S_drop.at(n - 1); }
};

inline HarmonicSequences harmonic_sequences(std::size_t count) {
  HarmonicSequences hs;
  CompensatedSum h;
  for (std::size_t n = 1; n <= count + 1; ++n) {
    h += 1.0 / static_cast<double>(n);
    hs.H.push_back(h.value());
    hs.C.push_back(std::sqrt(h.value()));
    hs.S.push_back(1.0 / hs.C.back());
  }
  for (std::size_t n = 1; n <= count; ++n) {
    const double cn = hs.C[n - 1];
    const double cn1 = hs.C[n];
    const double c_gap = (1.0 / static_cast<double>(n + 1)) / (cn1 + cn);
    hs.S_drop.push_back(c_gap / (cn * cn1));
  }
  hs.H.pop_back();
  hs.C.pop_back();
  hs.S.pop_back();
  return hs;
}

/// phi(a/(n C_n)) >= phi(a) / (2 n C_n).
inline bool lphi1_holds(const OrliczFunction& phi, std::size_t n, double c_n, double a) {
  const double nc = static_cast<double>(n) * c_n;
  return phi(a / nc) >= phi(a) / (2.0 * nc);
}

/// d_{n+1} - d_n <= (d_n / 2^n)(1 - 2^(-1/n)), n >= 1.
inline bool condition_c_holds(std::size_t n, double d_n, double next_increment) {
  const double nd = static_cast<double>(n);
  const double allowance = std::ldexp(d_n, -static_cast<int>(n)) * -std::expm1(-std::log(2.0) / nd);
  return next_increment <= allowance;
}

struct TailEvidence {
  /// The continuation past n_max is guaranteed analytically (linear phi).
  bool proved = false;
  /// Last index for which an admissible a_n was found (>= n_max).
  std::size_t verified_to = 0;
  std::size_t target = 0;
  std::string basis;

  bool established() const { return proved || verified_to >= target; }
};

struct BoundRecord {
  std::size_t n = 0;
  /// Certified for the stored (truncated) step function.
  double modular_truncated = 0.0;
  /// Certified for the full construction, given the tail premise.
  double modular_lower = 0.0;
  double norm_lower = 0.0;

  friend bool operator==(const BoundRecord&, const BoundRecord&) = default;
};

struct Certificate {
  OrliczFunction phi = OrliczFunction::linear();
  std::size_t n_max = 0;
  SearchOptions search;
  /// Indexed n = 1..n_max+1 (element 0 is n = 1).
  std::vector<double> C;
  std::vector<double> S;
  /// a_1..a_{n_max}.
  std::vector<double> a;
  /// d_n - d_{n-1} for n = 1..n_max.
  std::vector<double> delta;
  /// d_0..d_{n_max}, accumulated left to right from d_0 = 1/4.
  std::vector<double> d;
  double d_lower = 0.0;
  double d_upper = 0.0;
  /// beta_n = d_n / d_upper for n = 0..n_max (doubles of the exact breakpoints).
  std::vector<double> beta;
  /// sum_{i<=n_max} a_i on [beta_{i-1}, beta_i), zero elsewhere.
  SimpleFunction f;
  /// Measure of [beta_{n_max}, 1) where the untruncated tail would live.
  double remainder_measure = 0.0;
  TailEvidence tail;
  std::vector<BoundRecord> bounds;
};

namespace detail {

struct SearchState {
  double a_prev = 0.0;
  double d_prev = 0.25;
};

enum class StepOutcome { found, exhausted };

struct StepResult {
  StepOutcome outcome = StepOutcome::exhausted;
  double a = 0.0;
  double delta = 0.0;
  std::size_t lphi1_failures = 0;
  std::size_t c_failures = 0;
  bool overflow = false;
};

inline StepResult search_step(const OrliczFunction& phi, const HarmonicSequences& hs, std::size_t n,
                              const SearchState& st, const SearchOptions& opt) {
  StepResult r;
  double cand = st.a_prev;
  for (std::size_t step = 0; step < opt.max_steps; ++step) {
    cand *= opt.ratio;
    const double phi_a = std::isfinite(cand) ? phi(cand) : std::numeric_limits<double>::infinity();
    if (!std::isfinite(phi_a)) {
      r.overflow = true;
      return r;
    }
    if (!lphi1_holds(phi, n, hs.c(n), cand)) {
      ++r.lphi1_failures;
      continue;
    }
    const double inc = hs.s_drop(n) / phi_a;
    if (n >= 2 && !condition_c_holds(n - 1, st.d_prev, inc)) {
      ++r.c_failures;
      continue;
    }
    r.outcome = StepOutcome::found;
    r.a = cand;
    r.delta = inc;
    return r;
  }
  return r;
}

inline std::string exhaustion_witness(const OrliczFunction& phi, const HarmonicSequences& hs, std::size_t n,
                                      const StepResult& r, const SearchOptions& opt, double a_prev) {
  std::ostringstream os;
  os.precision(6);
  const double nc = static_cast<double>(n) * hs.c(n);
  if (phi.family() == Family::power && phi.exponent() > 1.0) {
    const double lhs = std::pow(nc, phi.exponent() - 1.0);
    if (lhs > 2.0) {
      os << "algebraic: (n*C_n)^(p-1) = " << lhs << " > 2 with n*C_n = " << nc
         << ", so phi(a/(nC_n)) >= phi(a)/(2nC_n) fails for every a > 0; the conjugate satisfies Delta_2";
      return os.str();
    }
  }
  os << "no grid value in (" << a_prev << ", " << a_prev << "*" << opt.ratio << "^" << opt.max_steps
     << "] satisfies the growth conditions (" << r.lphi1_failures << " failed the n*C_n ratio test, " << r.c_failures
     << " failed the increment test" << (r.overflow ? ", phi overflowed" : "")
     << "); the conjugate plausibly satisfies Delta_2 (refuted at this cap, not proved impossible)";
  return os.str();
}

inline bool is_linear(const OrliczFunction& phi) {
  return phi.family() == Family::linear || (phi.family() == Family::power && phi.exponent() == 1.0);
}

/// Exact breakpoints beta_0..beta_{n_max} from d_0, the increments and d_upper.
inline std::vector<Rational> exact_breakpoints(double d0, const std::vector<double>& delta, double d_upper) {
  const Rational du = exact_rational(d_upper);
  std::vector<Rational> out;
  out.reserve(delta.size() + 1);
  out.push_back(exact_rational(d0) / du);
  for (double inc : delta) out.push_back(out.back() + exact_rational(inc) / du);
  return out;
}

inline SimpleFunction step_function(const std::vector<Rational>& beta, const std::vector<double>& a) {
  std::vector<Piece> pieces;
  pieces.reserve(a.size() + 2);
  pieces.push_back({beta.front(), 0.0});
  for (std::size_t i = 0; i < a.size(); ++i) pieces.push_back({beta[i + 1], a[i]});
  if (beta.back() >= 1) throw NumericalError("certificate breakpoints reach 1");
  pieces.push_back({Rational(1), 0.0});
  return SimpleFunction::from_pieces(std::move(pieces));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// bounds

/// integral_0^1 y^(n-1) phi(|f(y)|/scale) dy, summed exactly over pieces.
inline double exact_power_integral(const SimpleFunction& f, std::size_t n, double scale, const OrliczFunction& phi) {
  if (n == 0) throw DomainError("exact_power_integral: n must be >= 1");
  if (!(scale > 0.0)) throw DomainError("exact_power_integral: scale must be > 0");
  const double nd = static_cast<double>(n);
  CompensatedSum sum;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double v = std::fabs(f.pieces()[i].value);
    if (v == 0.0) continue;
    const double end = to_double(f.pieces()[i].end);
    const double mu = to_double(f.measure(i));
    // end^n - start^n = end^n (1 - (1 - mu/end)^n)
    const double power_gap = std::pow(end, nd) * -std::expm1(nd * std::log1p(-mu / end));
    sum += phi(v / scale) * power_gap / nd;
  }
  return sum.value();
}

struct ModularBound {
  std::size_t n = 0;
  /// sum_m integral y^(n-1) phi(f(y)/(m C_n)) dy over the stored pieces: the
  /// first (sharpest) line of the estimate.
  double direct = 0.0;
  /// (H_n / (4 C_n)) (S_n - S_{n_max+1}) / d_upper: certified for the stored
  /// truncated step function.
  double truncated = 0.0;
  /// (H_n / (4 C_n)) S_n / d_upper = 1/(4 d_upper): certified for the full
  /// construction when the tail premise holds.
  double with_tail = 0.0;
  /// 4 d_upper * with_tail (1 up to rounding).
  double fraction = 0.0;
  bool tail_premise = false;
};

inline ModularBound modular_bound_at(const Certificate& cert, std::size_t n, double d_value) {
  if (n == 0) throw DomainError("modular bound: n must be >= 1");
  if (n >= cert.n_max) {
    throw PreconditionError("tail-dominated: n = " + std::to_string(n) + " must be below n_max = " +
                            std::to_string(cert.n_max) + "; the bound would rest on no stored pieces");
  }
  const double hn = cert.C[n - 1] * cert.C[n - 1];
  const double cn = cert.C[n - 1];
  ModularBound b;
  b.n = n;
  b.truncated = hn / (4.0 * cn) * ((cert.S[n - 1] - cert.S[cert.n_max]) / d_value);
  b.with_tail = hn / (4.0 * cn) * (cert.S[n - 1] / d_value);
  b.fraction = 4.0 * d_value * b.with_tail;
  b.tail_premise = cert.tail.established();
  return b;
}

/// Certified lower bound on integral phi(h_n / C_n), n < n_max.
inline ModularBound certify_modular_lower_bound(const Certificate& cert, std::size_t n) {
  ModularBound b = modular_bound_at(cert, n, cert.d_upper);
  CompensatedSum direct;
  for (std::size_t m = 1; m <= n; ++m) {
    direct += exact_power_integral(cert.f, n, static_cast<double>(m) * cert.C[n - 1], cert.phi);
  }
  b.direct = direct.value();
  return b;
}

struct NormBound {
  std::size_t n = 0;
  /// C_n * min(M, 1), M the modular bound used.
  double value = 0.0;
  /// 1 - 4 d_upper M.
  double epsilon = 0.0;
  /// "with-tail" or "truncated".
  std::string basis;
};

/// ||h_n|| >= C_n * min(M, 1) where M lower-bounds integral phi(h_n/C_n).
inline NormBound norm_lower_bound(const Certificate& cert, std::size_t n) {
  const ModularBound mb = modular_bound_at(cert, n, cert.d_upper);
  const bool use_tail = mb.tail_premise;
  const double m = use_tail ? mb.with_tail : mb.truncated;
  NormBound nb;
  nb.n = n;
  nb.value = cert.C[n - 1] * std::min(m, 1.0);
  nb.epsilon = 1.0 - 4.0 * cert.d_upper * m;
  nb.basis = use_tail ? "with-tail" : "truncated";
  return nb;
}

inline std::vector<BoundRecord> compute_bounds(const Certificate& cert) {
  std::vector<BoundRecord> out;
  for (std::size_t n = 1; n < cert.n_max; ++n) {
    const auto mb = modular_bound_at(cert, n, cert.d_upper);
    out.push_back({n, mb.truncated, mb.tail_premise ? mb.with_tail : mb.truncated, norm_lower_bound(cert, n).value});
  }
  return out;
}

// ---------------------------------------------------------------------------
// construction

inline Certificate build_certificate(const OrliczFunction& phi, std::size_t n_max, const SearchOptions& opt = {}) {
  if (n_max < 2) throw DomainError("build_certificate: n_max must be >= 2");
  if (!(opt.ratio > 1.0) || opt.max_steps == 0 || !(opt.a_start > 0.0)) {
    throw DomainError("build_certificate: search needs ratio > 1, max_steps >= 1, a_start > 0");
  }
  const auto v = validate(phi);
  if (!v.pass) throw PreconditionError("build_certificate: phi is not a valid Orlicz function (" + v.violation + ")");

  const std::size_t extra = opt.tail_extension == 0 ? n_max : opt.tail_extension;
  const auto hs = harmonic_sequences(n_max + extra + 1);

  Certificate cert;
  cert.phi = phi;
  cert.n_max = n_max;
  cert.search = opt;
  cert.C.assign(hs.C.begin(), hs.C.begin() + static_cast<std::ptrdiff_t>(n_max + 1));
  cert.S.assign(hs.S.begin(), hs.S.begin() + static_cast<std::ptrdiff_t>(n_max + 1));
  cert.d.push_back(0.25);

  detail::SearchState st{opt.a_start, 0.25};
  for (std::size_t n = 1; n <= n_max; ++n) {
    const auto r = detail::search_step(phi, hs, n, st, opt);
    if (r.outcome != detail::StepOutcome::found) {
      throw SearchExhausted(n, detail::exhaustion_witness(phi, hs, n, r, opt, st.a_prev));
    }
    cert.a.push_back(r.a);
    cert.delta.push_back(r.delta);
    cert.d.push_back(cert.d.back() + r.delta);
    st = {r.a, cert.d.back()};
  }

  cert.d_lower = cert.d.back();
  cert.d_upper = std::exp2(1.0 / static_cast<double>(n_max)) * cert.d_lower;
  const auto beta = detail::exact_breakpoints(cert.d.front(), cert.delta, cert.d_upper);
  for (const auto& b : beta) cert.beta.push_back(to_double(b));
  cert.f = detail::step_function(beta, cert.a);
  cert.remainder_measure = to_double(Rational(1) - beta.back());

  // Continue the search past n_max without touching the stored pieces.
  cert.tail.target = n_max + extra;
  cert.tail.verified_to = n_max;
  for (std::size_t n = n_max + 1; n <= n_max + extra; ++n) {
    const auto r = detail::search_step(phi, hs, n, st, opt);
    if (r.outcome != detail::StepOutcome::found) break;
    st = {r.a, st.d_prev + r.delta};
    cert.tail.verified_to = n;
  }
  if (detail::is_linear(phi)) {
    cert.tail.proved = true;
    cert.tail.basis =
        "linear phi: the ratio condition holds for every a, and the increment condition holds for all large a "
        "since phi is unbounded, so the construction continues indefinitely";
  } else {
    cert.tail.basis = "search continued to n = " + std::to_string(cert.tail.verified_to) + " of " +
                      std::to_string(cert.tail.target);
  }
  cert.bounds = compute_bounds(cert);
  return cert;
}

/// Coarse copy of the certificate profile for simulation: the first `pieces`
/// values with measures rounded down to multiples of 2^-den_bits, followed
/// by one zero piece holding the rest of [0,1).
inline SimpleFunction derived_profile(const Certificate& cert, std::size_t pieces, unsigned den_bits = 16) {
  const BigInt den = BigInt(1) << den_bits;
  std::vector<Piece> out;
  Rational end(0);
  const std::size_t count = std::min(pieces, cert.a.size());
  for (std::size_t i = 0; i < count; ++i) {
    const Rational mu = cert.f.measure(i + 1);
    const BigInt units = numerator(mu) * den / denominator(mu);
    if (units == 0) continue;
    end += Rational(units, den);
    out.push_back({end, cert.a[i]});
  }
  if (end < 1) out.push_back({Rational(1), 0.0});
  return SimpleFunction::from_pieces(std::move(out));
}

// ---------------------------------------------------------------------------
// verification

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerificationReport {
  std::vector<Check> checks;
  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
};

/// Re-derives every certificate invariant from the stored sequences.
inline VerificationReport verify_certificate(const Certificate& cert) {
  VerificationReport rep;
  auto add = [&](std::string name, bool pass, std::string detail = {}) {
    rep.checks.push_back({std::move(name), pass, std::move(detail)});
  };
  const std::size_t N = cert.n_max;
  const bool shapes = N >= 2 && cert.C.size() == N + 1 && cert.S.size() == N + 1 && cert.a.size() == N &&
                      cert.delta.size() == N && cert.d.size() == N + 1 && cert.beta.size() == N + 1;
  add("shapes", shapes);
  if (!shapes) return rep;

  const auto hs = harmonic_sequences(N + 1);
  bool closed = true;
  for (std::size_t n = 1; n <= N + 1; ++n) {
    closed = closed && cert.C[n - 1] == hs.c(n) && cert.S[n - 1] == hs.s(n);
    if (n > 1) closed = closed && cert.C[n - 1] > cert.C[n - 2] && cert.S[n - 1] < cert.S[n - 2];
  }
  add("closed-forms", closed, "C_n = sqrt(H_n) strictly increasing, S_n = 1/C_n strictly decreasing");

  bool inc = cert.a.front() > cert.search.a_start;
  for (std::size_t i = 1; i < N; ++i) inc = inc && cert.a[i] > cert.a[i - 1];
  add("a-increasing", inc);

  bool rec = cert.d.front() == 0.25;
  for (std::size_t n = 1; n <= N; ++n) {
    rec = rec && cert.delta[n - 1] == hs.s_drop(n) / cert.phi(cert.a[n - 1]);
    rec = rec && cert.d[n] == cert.d[n - 1] + cert.delta[n - 1] && cert.delta[n - 1] > 0.0;
  }
  add("d-recursion", rec, "d_0 = 1/4, d_n - d_{n-1} = (S_n - S_{n+1}) / phi(a_n)");

  std::size_t first_bad = 0;
  for (std::size_t n = 1; n <= N && first_bad == 0; ++n) {
    if (!lphi1_holds(cert.phi, n, cert.C[n - 1], cert.a[n - 1])) first_bad = n;
  }
  add("lphi1", first_bad == 0,
      first_bad == 0 ? "phi(a_n/(nC_n)) >= phi(a_n)/(2nC_n) for all n" : "fails at n = " + std::to_string(first_bad));

  first_bad = 0;
  for (std::size_t n = 1; n < N && first_bad == 0; ++n) {
    if (!condition_c_holds(n, cert.d[n], cert.delta[n])) first_bad = n;
  }
  add("condition-c", first_bad == 0,
      first_bad == 0 ? "d_{n+1} - d_n <= (d_n/2^n)(1 - 2^(-1/n)) for 1 <= n < n_max"
                     : "fails at n = " + std::to_string(first_bad));

  const bool bracket = cert.d_lower == cert.d[N] &&
                       cert.d_upper == std::exp2(1.0 / static_cast<double>(N)) * cert.d_lower;
  add("d-bracket", bracket, "d in [d_{n_max}, 2^(1/n_max) d_{n_max}]");

  // (d_n/d_upper)^n >= 1/2. At n = n_max this is an equality by construction,
  // so compare in log form with a relative slack of 1e-12.
  first_bad = 0;
  for (std::size_t n = 1; n <= N && first_bad == 0; ++n) {
    const double lhs = static_cast<double>(n) * std::log(cert.d[n] / cert.d_upper);
    if (lhs < -std::log(2.0) * (1.0 + 1e-12)) first_bad = n;
  }
  add("lphi2", first_bad == 0,
      first_bad == 0 ? "(d_n/d_upper)^n >= 1/2 for n <= n_max" : "fails at n = " + std::to_string(first_bad));

  const auto beta = detail::exact_breakpoints(cert.d.front(), cert.delta, cert.d_upper);
  bool pieces_ok = beta.back() < 1;
  for (std::size_t i = 0; i <= N && pieces_ok; ++i) pieces_ok = cert.beta[i] == to_double(beta[i]);
  if (pieces_ok) pieces_ok = cert.f == detail::step_function(beta, cert.a);
  add("breakpoints", pieces_ok, "beta_n = d_n / d_upper exactly, f = sum a_i on [beta_{i-1}, beta_i)");

  bool bounds_ok = cert.bounds == compute_bounds(cert);
  add("bounds", bounds_ok, "stored per-n bounds recompute identically");
  return rep;
}

// ---------------------------------------------------------------------------
// Monte Carlo

struct McEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t samples = 0;
};

/// Estimates integral over [0,1]^n of phi(h_n/scale), h_n the Cesaro maximum
/// of n independent copies of f. Pieces are drawn from the defensive mixture
/// q_j = (p_j + 1/P)/2 and reweighted by p_j/q_j, which keeps the heavy tail
/// of f visible at moderate sample sizes.
inline McEstimate mc_cesaro_max_modular(const OrliczFunction& phi, const SimpleFunction& f, std::size_t n,
                                        double scale, std::size_t samples, std::uint64_t seed) {
  if (n == 0) throw DomainError("mc: n must be >= 1");
  if (samples < 2) throw DomainError("mc: need at least two samples");
  const std::size_t P = f.size();
  std::vector<double> p(P), q(P), cum(P), value(P);
  double total = 0.0;
  for (std::size_t j = 0; j < P; ++j) {
    p[j] = to_double(f.measure(j));
    value[j] = std::fabs(f.pieces()[j].value);
    total += p[j];
  }
  double acc = 0.0;
  for (std::size_t j = 0; j < P; ++j) {
    p[j] /= total;
    q[j] = P == 1 ? 1.0 : 0.5 * p[j] + 0.5 / static_cast<double>(P);
    acc += q[j];
    cum[j] = acc;
  }
  cum.back() = 1.0;

  const CounterRng rng{seed};
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    double weight = 1.0;
    double running = 0.0;
    double h = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double u = rng.uniform(s, k);
      const auto j = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
      const std::size_t idx = std::min(j, P - 1);
      weight *= p[idx] / q[idx];
      running += value[idx];
      h = std::max(h, running / static_cast<double>(k + 1));
    }
    const double x = phi(h / scale) * weight;
    const double dx = x - mean;
    mean += dx / static_cast<double>(s + 1);
    m2 += dx * (x - mean);
  }
  McEstimate e;
  e.mean = mean;
  e.samples = samples;
  e.stderr_ = std::sqrt(m2 / static_cast<double>(samples - 1) / static_cast<double>(samples));
  return e;
}

struct McReport {
  std::size_t n = 0;
  McEstimate estimate;
  /// Certified lower bound for the stored step function.
  double certified_truncated = 0.0;
  double direct = 0.0;
  /// Full-construction bound (not asserted: the simulated f is truncated).
  double certified_with_tail = 0.0;
  bool consistent = false;
  /// n = 1 only: exact modular(phi, f/C_1) and |estimate - exact| <= 3 stderr.
  std::optional<double> exact;
  std::optional<bool> matches_exact;
};

inline McReport mc_sanity_check(const Certificate& cert, std::size_t n, std::size_t samples, std::uint64_t seed) {
  if (n == 0 || n > 20) throw PreconditionError("mc: n must be in [1, 20]");
  if (samples < 10000) throw PreconditionError("mc: need at least 1e4 samples");
  McReport rep;
  rep.n = n;
  rep.estimate = mc_cesaro_max_modular(cert.phi, cert.f, n, cert.C[n - 1], samples, seed);
  const auto mb = certify_modular_lower_bound(cert, n);
  rep.certified_truncated = mb.truncated;
  rep.direct = mb.direct;
  rep.certified_with_tail = mb.with_tail;
  rep.consistent = rep.estimate.mean + 3.0 * rep.estimate.stderr_ >= mb.truncated;
  if (n == 1) {
    rep.exact = modular(cert.phi, divide(cert.f, cert.C[0]));
    rep.matches_exact = std::fabs(rep.estimate.mean - *rep.exact) <= 3.0 * rep.estimate.stderr_;
  }
  return rep;
}

}  // namespace orlab::counterexample
