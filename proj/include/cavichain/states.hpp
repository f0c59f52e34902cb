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

#ifndef CAVICHAIN_STATES_HPP
#define CAVICHAIN_STATES_HPP

#include <cmath>
#include <functional>
#include <span>
#include <utility>

#include "cavichain/propagator.hpp"

namespace cavichain {

/// One-mode initial state described by its characteristic function
/// E(theta) = Tr[rho w(theta)] with w(theta) = exp(i(conj(theta) a + theta a*)/sqrt 2).
///
/// Variants: thermal (Gibbs) at inverse temperature beta, vacuum (beta -> inf),
/// displaced thermal with mean <a> = alpha, and a caller-supplied radial
/// profile F(|theta|). Radial profiles of Hermitian gauge-invariant states are
/// real-valued, so the custom variant takes a real function; it is validated
/// by sampling (value 1 at 0, |F| <= 1, bounded jumps on a reference grid)
/// since continuity of a black box cannot be checked exactly.
class ModeState {
 public:
  enum class Kind { gibbs, vacuum, displaced_gibbs, custom_radial };

  static ModeState gibbs(double beta) {
    if (!(beta > 0.0)) throw bad_kind("gibbs state needs beta > 0");
    ModeState s;
    s.kind_ = Kind::gibbs;
    s.beta_ = beta;
    return s;
  }

  static ModeState vacuum() {
    ModeState s;
    s.kind_ = Kind::vacuum;
    s.beta_ = std::numeric_limits<double>::infinity();
    return s;
  }

  static ModeState displaced_gibbs(double beta, cxd mean) {
    ModeState s = gibbs(beta);
    s.kind_ = Kind::displaced_gibbs;
    s.mean_ = mean;
    return s;
  }

  /// max_jump is the continuity hint: the largest |F(r_{i+1}) - F(r_i)|
  /// accepted on the reference grid of `check_points` radii in [0, r_max].
  static ModeState custom_radial(std::function<double(double)> radial,
                                 double max_jump = 0.1, int check_points = 96,
                                 double r_max = 4.0) {
    ModeState s;
    s.kind_ = Kind::custom_radial;
    s.radial_ = std::move(radial);
    if (std::abs(s.radial_(0.0) - 1.0) > 1e-9)
      throw bad_kind("custom radial profile must equal 1 at the origin");
    double prev = 1.0;
    for (int i = 1; i <= check_points; ++i) {
      const double r = r_max * double(i) / double(check_points);
      const double f = s.radial_(r);
      if (!std::isfinite(f) || std::abs(f) > 1.0 + 1e-9)
        throw bad_kind("custom radial profile must satisfy |F| <= 1");
      if (std::abs(f - prev) > max_jump)
        throw bad_kind("custom radial profile jumps more than the continuity hint");
      prev = f;
    }
    return s;
  }

  cxd char_fn(cxd theta) const {
    switch (kind_) {
      case Kind::gibbs:
      case Kind::vacuum:
        return std::exp(-0.25 * thermal_coth() * std::norm(theta));
      case Kind::displaced_gibbs: {
        const double lin = std::sqrt(2.0) * std::real(std::conj(theta) * mean_);
        return std::exp(cxd(-0.25 * thermal_coth() * std::norm(theta), lin));
      }
      case Kind::custom_radial:
        return cxd(radial_(std::abs(theta)), 0.0);
    }
    return cxd(1.0, 0.0);
  }

  bool gauge_invariant() const {
    return !(kind_ == Kind::displaced_gibbs && mean_ != cxd(0.0, 0.0));
  }

  /// Gibbs-family states only: coth(beta/2), the variance parameter.
  double thermal_coth() const {
    if (kind_ == Kind::custom_radial)
      throw bad_kind("custom radial state has no single coth value");
    return kind_ == Kind::vacuum ? 1.0 : coth_half(beta_);
  }

  /// Zero-mean Gaussian (quasi-free) variants.
  bool is_thermal() const { return kind_ == Kind::gibbs || kind_ == Kind::vacuum; }

  Kind kind() const { return kind_; }
  double beta() const { return beta_; }
  cxd mean() const { return mean_; }

 private:
  ModeState() = default;
  Kind kind_ = Kind::vacuum;
  double beta_ = std::numeric_limits<double>::infinity();
  cxd mean_{0.0, 0.0};
  std::function<double(double)> radial_;
};

/// Product characteristic function: prod_j E_j(zeta_j).
inline cxd char_fn_product(std::span<const ModeState> states, const WeylVector& zeta) {
  if (static_cast<long>(states.size()) != zeta.size())
    throw length_mismatch("state list and amplitude vector differ in length");
  cxd out{1.0, 0.0};
  for (long j = 0; j < zeta.size(); ++j) out *= states[j].char_fn(zeta(j));
  return out;
}

struct DualStepResult {
  double damping = 1.0;
  WeylVector zeta;
};

/// One dual step of duration s in [0, tau]: zeta' = U_n(s) zeta and the
/// scalar damping exp(-r/4 (<zeta,zeta> - <zeta',zeta'>)) with
/// r = (sigma_- + sigma_+)/(sigma_- - sigma_+).
inline DualStepResult weyl_dual_step(const WeylVector& zeta, int n, double s,
                                     const ModelParams& p) {
  detail::require_step_index(n, static_cast<int>(zeta.size()) - 1);
  const PropagatorBlocks b = propagator_blocks(p, s);
  WeylVector v = zeta;
  detail::apply_mix(v, n, b);
  v *= std::exp(cxd(0.0, s * p.epsilon));
  const double drop = zeta.squaredNorm() - v.squaredNorm();
  return DualStepResult{std::exp(-0.25 * p.reservoir_coth() * drop), std::move(v)};
}

/// Composition of full steps 1..k (step k acts first on the label). The
/// per-step dampings telescope into the single k-step damping.
inline DualStepResult weyl_dual_multi(const WeylVector& zeta, int k,
                                      const ModelParams& p) {
  detail::require_step_index(k, static_cast<int>(zeta.size()) - 1);
  const auto steps = first_m_steps(k);
  WeylVector v = propagate(zeta, steps, p);
  const double drop = zeta.squaredNorm() - v.squaredNorm();
  return DualStepResult{std::exp(-0.25 * p.reservoir_coth() * drop), std::move(v)};
}

namespace detail {

// Splits t >= 0 into full steps and the partial remainder: t = (n-1) tau + nu
// with n = floor(t/tau) + 1 and nu in [0, tau). Exact multiples of tau sit on
// the boundary with nu = 0.
struct StepSplit {
  int full_steps;
  double nu;
};

inline StepSplit split_time(double t, double tau) {
  const int full = static_cast<int>(std::floor(t / tau));
  double nu = t - double(full) * tau;
  if (nu < 0.0) nu = 0.0;
  return StepSplit{full, nu};
}

// Label of the dual evolution applied to theta * e over `full + 1` modes:
// U_1 ... U_full U_{full+1}(nu) (theta e), including all free phases.
inline WeylVector evolved_cavity_label(double t, const ModelParams& p, cxd theta) {
  const auto [full, nu] = split_time(t, p.tau);
  WeylVector v = WeylVector::Zero(full + 2);
  v(0) = theta;
  if (nu > 0.0) apply_mix(v, full + 1, propagator_blocks(p, nu));
  const PropagatorBlocks b = propagator_blocks(p, p.tau);
  for (int l = full; l >= 1; --l) apply_mix(v, l, b);
  v *= std::exp(cxd(0.0, t * p.epsilon));
  return v;
}

}  // namespace detail

/// Characteristic function of the reduced cavity state at time t >= 0 when the
/// chain starts in rho_1^(tensor) and the cavity in rho_0.
inline cxd cavity_char_fn(double t, const ModeState& rho0, const ModeState& rho1,
                          const ModelParams& p, cxd theta) {
  const WeylVector v = detail::evolved_cavity_label(t, p, theta);
  const double drop = std::norm(theta) - v.squaredNorm();
  cxd out = std::exp(cxd(-0.25 * p.reservoir_coth() * drop, 0.0));
  out *= rho0.char_fn(v(0));
  for (long k = 1; k < v.size(); ++k) out *= rho1.char_fn(v(k));
  return out;
}

/// Truncated infinite product D(theta) = prod_{s>=0} E_rho1((g z)^s theta).
/// Stops once the current factor is within tol*(1-|gz|) of 1, which bounds the
/// geometric tail of the log-factors by tol.
inline cxd d_functional_product(const ModeState& rho1, const ModelParams& p,
                                cxd theta, double tol = 1e-12) {
  const PropagatorBlocks b = propagator_blocks(p, p.tau);
  const cxd gz = b.gz();
  const double q = std::abs(gz);
  if (!(q < 1.0)) throw non_convergent("requires |g z| < 1");
  const double stop = tol * (1.0 - q);
  cxd out{1.0, 0.0};
  cxd arg = theta;
  for (long s = 0; s < 100000; ++s) {
    const cxd factor = rho1.char_fn(arg);
    if (std::abs(factor - 1.0) < stop) return out;
    out *= factor;
    arg *= gz;
  }
  throw non_convergent("product factors do not approach 1");
}

/// D(theta) with the closed form for the Gibbs family and the truncated
/// product for custom profiles.
inline cxd d_functional(const ModeState& rho1, const ModelParams& p, cxd theta,
                        double tol = 1e-12) {
  if (rho1.kind() == ModeState::Kind::custom_radial)
    return d_functional_product(rho1, p, theta, tol);
  const PropagatorBlocks b = propagator_blocks(p, p.tau);
  const cxd gz = b.gz();
  const double q2 = std::norm(gz);
  if (!(q2 < 1.0)) throw non_convergent("requires |g z| < 1");
  const double quad = -0.25 * rho1.thermal_coth() * std::norm(theta) / (1.0 - q2);
  double lin = 0.0;
  if (rho1.kind() == ModeState::Kind::displaced_gibbs) {
    // geometric sum of the linear terms: sum_s conj(gz)^s = 1/(1 - conj(gz))
    lin = std::sqrt(2.0) *
          std::real(std::conj(theta) * rho1.mean() / (1.0 - std::conj(gz)));
  }
  return std::exp(cxd(quad, lin));
}

/// Characteristic function of the unique steady cavity state:
/// exp(-|theta|^2/4 r (1 - lambda)) D(g w theta).
inline cxd steady_state_char_fn(const ModeState& rho1, const ModelParams& p,
                                cxd theta, double tol = 1e-12) {
  const PropagatorBlocks b = propagator_blocks(p, p.tau);
  const double lambda = std::norm(b.gw()) / (1.0 - std::norm(b.gz()));
  const double pre = -0.25 * std::norm(theta) * p.reservoir_coth() * (1.0 - lambda);
  return std::exp(cxd(pre, 0.0)) * d_functional(rho1, p, b.gw() * theta, tol);
}

/// Wraps the steady state of a gauge-invariant chain as a radial ModeState so
/// it can seed further evolutions.
inline ModeState steady_state_as_mode_state(const ModeState& rho1,
                                            const ModelParams& p) {
  if (!rho1.gauge_invariant())
    throw bad_kind("steady-state profile is radial only for gauge-invariant chains");
  return ModeState::custom_radial(
      [rho1, p](double r) {
        return std::real(steady_state_char_fn(rho1, p, cxd(r, 0.0)));
      },
      0.5);
}

/// Hermitian matrix X with char fn exp(-1/4 <zeta, X zeta>) (zero mean for the
/// thermal initial states used here).
struct CovarianceMatrix {
  Eigen::MatrixXcd X;
  Eigen::VectorXcd mean;  // empty means zero
};

/// Covariance after n_steps full steps, starting from a thermal cavity at
/// beta0 and a thermal chain at beta:
///   X = r I + U^* [(coth(beta/2) - r) I + (coth(beta0/2) - coth(beta/2)) P0] U
/// with U = U_1 ... U_{n_steps}, assembled from propagated columns instead of
/// dense matrix products. n_chain defaults to n_steps and may exceed it.
inline CovarianceMatrix covariance(int n_steps, double beta0, double beta,
                                   const ModelParams& p, int n_chain = -1) {
  if (n_steps < 0) throw index_out_of_range("n_steps must be >= 0");
  if (n_chain < 0) n_chain = n_steps;
  if (n_chain < n_steps)
    throw index_out_of_range("need at least as many chain modes as steps");
  const int dim = n_chain + 1;
  const double r = p.reservoir_coth();
  const double c0 = coth_half(beta0);
  const double cb = coth_half(beta);

  const auto steps = first_m_steps(n_steps);
  std::vector<WeylVector> cols(dim);
  for (int j = 0; j < dim; ++j) {
    WeylVector e = WeylVector::Zero(dim);
    e(j) = 1.0;
    cols[j] = propagate(e, steps, p);
  }

  CovarianceMatrix out;
  out.X = Eigen::MatrixXcd::Zero(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int k = j; k < dim; ++k) {
      cxd x = (cb - r) * cols[j].dot(cols[k]) +
              (c0 - cb) * std::conj(cols[j](0)) * cols[k](0);
      if (j == k) x += r;
      out.X(j, k) = x;
      out.X(k, j) = std::conj(x);
    }
  }
  return out;
}

/// 2x2 sub-block of the covariance for modes (0, n) or (m, n), built from the
/// closed-form component vectors rather than propagation.
inline Eigen::Matrix2cd pair_covariance(PairKind kind, int m, int n, int n_steps,
                                        double beta0, double beta,
                                        const ModelParams& p) {
  const double r = p.reservoir_coth();
  const double c0 = coth_half(beta0);
  const double cb = coth_half(beta);
  const WeylVector va =
      component_formula_pair(kind, m, n, n_steps, p, cxd(1.0, 0.0), cxd(0.0, 0.0));
  const WeylVector vb =
      component_formula_pair(kind, m, n, n_steps, p, cxd(0.0, 0.0), cxd(1.0, 0.0));
  auto entry = [&](const WeylVector& u, const WeylVector& v, bool diag) {
    cxd x = (cb - r) * u.dot(v) + (c0 - cb) * std::conj(u(0)) * v(0);
    if (diag) x += r;
    return x;
  };
  Eigen::Matrix2cd X;
  X(0, 0) = entry(va, va, true);
  X(0, 1) = entry(va, vb, false);
  X(1, 0) = std::conj(X(0, 1));
  X(1, 1) = entry(vb, vb, true);
  return X;
}

/// Second-moment dictionary <b_j^* b_k> = (X_{kj} - delta_{jk})/2, pinned by
/// the vacuum (X = I, moments 0) and Gibbs (coth(beta/2) = 1 + 2 nbar) anchors.
inline Eigen::MatrixXcd moments_from_covariance(const Eigen::MatrixXcd& X) {
  const long d = X.rows();
  Eigen::MatrixXcd M(d, d);
  for (long j = 0; j < d; ++j)
    for (long k = 0; k < d; ++k)
      M(j, k) = 0.5 * (X(k, j) - (j == k ? 1.0 : 0.0));
  return M;
}

/// |E at rho_*(t) - E at rho_*(nu(t))| for the steady state advanced by t and
/// by the partial step nu(t) alone; tends to zero along t = k tau + nu.
inline double asymptotic_periodicity_gap(double t, const ModeState& rho1,
                                         const ModelParams& p, cxd theta) {
  const ModeState rho_star = steady_state_as_mode_state(rho1, p);
  const cxd full = cavity_char_fn(t, rho_star, rho1, p, theta);
  const cxd partial =
      cavity_char_fn(detail::split_time(t, p.tau).nu, rho_star, rho1, p, theta);
  return std::abs(full - partial);
}

}  // namespace cavichain

#endif  // CAVICHAIN_STATES_HPP
