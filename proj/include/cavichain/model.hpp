// Copyright 2026 The cavichain authors
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

#ifndef CAVICHAIN_MODEL_HPP
#define CAVICHAIN_MODEL_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "cavichain/errors.hpp"

namespace cavichain {

using cxd = std::complex<double>;

/// Physical parameters of the dissipative cavity/chain model.
///
/// The cavity mode has frequency E, every chain mode has frequency epsilon,
/// eta couples the cavity to exactly one chain mode per time slot of length
/// tau, and sigma_minus/sigma_plus are the downward/upward jump rates of the
/// Markovian reservoir attached to the cavity.
///
/// Plain aggregate: construct directly for formula-level experiments (tests
/// exercise the sigma_minus == sigma_plus line, which validate_params
/// rejects), or go through validate_params for checked construction.
struct ModelParams {
  double E = 1.0;
  double epsilon = 1.0;
  double eta = 0.0;
  double tau = 1.0;
  double sigma_minus = 0.0;
  double sigma_plus = 0.0;

  /// E_sigma = E + i (sigma_minus - sigma_plus)/2, the damped cavity frequency.
  cxd shifted_frequency() const { return {E, 0.5 * (sigma_minus - sigma_plus)}; }

  /// (sigma_minus + sigma_plus)/(sigma_minus - sigma_plus); equals
  /// coth(beta_star0 / 2) for the reservoir temperature and weights every
  /// damping exponent.
  double reservoir_coth() const {
    return (sigma_minus + sigma_plus) / (sigma_minus - sigma_plus);
  }

  bool zero_temperature_reservoir() const { return sigma_plus == 0.0; }
};

/// Checks the admissibility conditions, returning one message per violation.
/// Empty result means the parameter set is admissible.
inline std::vector<std::string> check_params(double E, double epsilon, double eta,
                                             double tau, double sigma_minus,
                                             double sigma_plus) {
  std::vector<std::string> bad;
  auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(E) || !finite(epsilon) || !finite(eta) || !finite(tau) ||
      !finite(sigma_minus) || !finite(sigma_plus)) {
    bad.push_back("all parameters must be finite");
    return bad;
  }
  if (!(E > 0.0)) bad.push_back("cavity frequency E must be positive");
  if (!(epsilon > 0.0)) bad.push_back("chain frequency epsilon must be positive");
  if (!(tau > 0.0)) bad.push_back("interaction period tau must be positive");
  if (eta < 0.0) bad.push_back("coupling eta must be nonnegative");
  if (sigma_minus < 0.0 || sigma_plus < 0.0)
    bad.push_back("jump rates sigma_minus, sigma_plus must be nonnegative");
  if (eta * eta > E * epsilon)
    bad.push_back("semi-boundedness requires eta^2 <= E*epsilon");
  if (!(sigma_plus < sigma_minus))
    bad.push_back("strict dissipativity requires 0 <= sigma_plus < sigma_minus");
  return bad;
}

/// Checked constructor. Throws condition_violation listing every violated
/// condition at once.
inline ModelParams validate_params(double E, double epsilon, double eta, double tau,
                                   double sigma_minus, double sigma_plus) {
  auto bad = check_params(E, epsilon, eta, tau, sigma_minus, sigma_plus);
  if (!bad.empty()) throw condition_violation(std::move(bad));
  return ModelParams{E, epsilon, eta, tau, sigma_minus, sigma_plus};
}

/// The complex scalars driving every closed form: with
///   alpha  = (E_sigma - epsilon)/2,
///   Delta  = sqrt(alpha^2 + eta^2),
/// the blocks are
///   g(t)  = exp(i t alpha),
///   w(t)  = i eta sin(t Delta)/Delta,
///   z(t)  = cos(t Delta) + i alpha sin(t Delta)/Delta,
/// and z_minus = z(-t). Only the even combinations cos(t Delta) and
/// sin(t Delta)/Delta enter, so the branch of the square root is irrelevant.
struct PropagatorBlocks {
  cxd e_sigma;
  cxd g;
  cxd w;
  cxd z_plus;
  cxd z_minus;
  double t = 0.0;

  cxd gz() const { return g * z_plus; }
  cxd gw() const { return g * w; }
  cxd gz_minus() const { return g * z_minus; }

  /// z(t) z(-t) - w(t)^2 - 1; identically zero in exact arithmetic.
  cxd symplectic_defect() const { return z_plus * z_minus - w * w - 1.0; }

  /// |g|^2 (|z|^2 + |w|^2), the squared norm of the active row of the
  /// one-step matrix; < 1 whenever sigma_plus < sigma_minus and t > 0.
  double active_row_norm_sq() const {
    return std::norm(g) * (std::norm(z_plus) + std::norm(w));
  }
};

namespace detail {

// sin(x)/x, stable near x = 0.
inline cxd sinc(cxd x) {
  if (std::abs(x) < 1e-2) {
    const cxd u = x * x;
    return 1.0 - u / 6.0 + u * u / 120.0 - u * u * u / 5040.0;
  }
  return std::sin(x) / x;
}

// branch = +1 or -1 selects the sign of the square root; results must agree.
inline PropagatorBlocks blocks_with_branch(const ModelParams& p, double t, int branch) {
  PropagatorBlocks b;
  b.t = t;
  b.e_sigma = p.shifted_frequency();
  const cxd alpha = 0.5 * (b.e_sigma - p.epsilon);
  const cxd delta = double(branch) * std::sqrt(alpha * alpha + p.eta * p.eta);
  const cxd i{0.0, 1.0};
  const cxd s_over_delta = t * sinc(t * delta);  // sin(t Delta)/Delta, even in Delta
  const cxd c = std::cos(t * delta);
  b.g = std::exp(i * t * alpha);
  b.w = i * p.eta * s_over_delta;
  b.z_plus = c + i * alpha * s_over_delta;
  b.z_minus = c - i * alpha * s_over_delta;
  return b;
}

}  // namespace detail

/// Evaluates the closed-form blocks at time t >= 0.
inline PropagatorBlocks propagator_blocks(const ModelParams& p, double t) {
  return detail::blocks_with_branch(p, t, +1);
}

/// coth(beta/2) = 1 + 2/(e^beta - 1), stable for all beta > 0 and exact in the
/// beta -> infinity (vacuum) limit.
inline double coth_half(double beta) { return 1.0 + 2.0 / std::expm1(beta); }

/// Inverse of coth_half: beta with coth(beta/2) = c, for c >= 1.
inline double coth_half_inverse(double c) {
  if (c <= 1.0) return std::numeric_limits<double>::infinity();
  return std::log1p(2.0 / (c - 1.0));
}

/// Mixing weight and effective temperature of the steady cavity state when the
/// chain is thermal at inverse temperature beta.
struct ThermoSummary {
  double lambda = 0.0;          // |g w|^2 / (1 - |g z|^2) at t = tau, in [0, 1)
  double coth_reservoir = 1.0;  // coth(beta_star0/2) = (s- + s+)/(s- - s+)
  double beta_star_0 = 0.0;     // ln(sigma_minus/sigma_plus); +inf when sigma_plus = 0
  bool zero_temperature_reservoir = false;
  double coth_effective = 1.0;  // coth(beta_star/2), the interpolated value
  double beta_star = 0.0;       // effective inverse temperature of the steady state
  double beta = 0.0;            // chain inverse temperature used
};

/// Computes lambda and solves the coth interpolation
///   coth(beta_star/2) = (1 - lambda) coth(beta_star0/2) + lambda coth(beta/2)
/// in closed form. All downstream quantities consume the coth values; the
/// sigma_plus = 0 reservoir is represented by coth = 1 plus a flag rather than
/// an infinite beta_star0.
inline ThermoSummary thermo_summary(const ModelParams& p, double beta) {
  ThermoSummary s;
  s.beta = beta;
  const PropagatorBlocks b = propagator_blocks(p, p.tau);
  const double gz2 = std::norm(b.gz());
  const double gw2 = std::norm(b.gw());
  s.lambda = gw2 / (1.0 - gz2);
  s.coth_reservoir = p.reservoir_coth();
  s.zero_temperature_reservoir = p.zero_temperature_reservoir();
  s.beta_star_0 = s.zero_temperature_reservoir
                      ? std::numeric_limits<double>::infinity()
                      : std::log(p.sigma_minus / p.sigma_plus);
  s.coth_effective =
      (1.0 - s.lambda) * s.coth_reservoir + s.lambda * coth_half(beta);
  s.beta_star = coth_half_inverse(s.coth_effective);
  return s;
}

}  // namespace cavichain

#endif  // CAVICHAIN_MODEL_HPP
