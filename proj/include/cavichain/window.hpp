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

#ifndef CAVICHAIN_WINDOW_HPP
#define CAVICHAIN_WINDOW_HPP

#include <functional>
#include <span>
#include <vector>

#include "cavichain/states.hpp"

// Sliding-window calculus: mode embeddings, modified Weyl labels and their
// dual pairings, the one-step and multi-step interaction maps on the cavity,
// the fixed point, and the limiting window state. States are handled through
// evaluable characteristic functions throughout; operator identities are
// asserted by pairing against sampled Weyl labels, never by building density
// matrices.

namespace cavichain {

using CharFn = std::function<cxd(cxd)>;

inline CharFn char_fn_of(const ModeState& s) {
  return [s](cxd theta) { return s.char_fn(theta); };
}

/// Free one-step evolution on characteristic functions:
/// theta |-> E(exp(+-i epsilon tau) theta). Forward then backward is identity.
inline CharFn free_step(CharFn E, const ModelParams& p, int direction) {
  if (direction != 1 && direction != -1) throw bad_kind("direction must be +-1");
  const cxd rot = std::exp(cxd(0.0, double(direction) * p.epsilon * p.tau));
  return [E = std::move(E), rot](cxd theta) { return E(rot * theta); };
}

/// The k-fold free advance of a ModeState, kept inside the variant family
/// (only the displaced mean moves: <a> rotates by exp(-i k epsilon tau)).
inline ModeState free_advance(const ModeState& s, int k_steps, const ModelParams& p) {
  if (s.kind() != ModeState::Kind::displaced_gibbs) return s;
  const cxd rot = std::exp(cxd(0.0, -double(k_steps) * p.epsilon * p.tau));
  return ModeState::displaced_gibbs(s.beta(), rot * s.mean());
}

/// r_{k,m}: keeps component 0, inserts k - m zeros at positions 1..k-m, shifts
/// the chain components up. Norm-preserving.
inline WeylVector embed(const WeylVector& zeta, int target_chain) {
  const int m = static_cast<int>(zeta.size()) - 1;
  if (target_chain < m) throw size_error("embedding cannot shrink the mode count");
  WeylVector out = WeylVector::Zero(target_chain + 1);
  out(0) = zeta(0);
  for (int j = 1; j <= m; ++j) out(target_chain - m + j) = zeta(j);
  return out;
}

/// Label form of the dual partial trace: R*_{m,k} W_m(zeta) = W_k(r_{k,m} zeta),
/// identically for modified labels.
inline WeylVector dual_reduce_weyl(const WeylVector& zeta, int target_chain) {
  return embed(zeta, target_chain);
}

/// Weyl label with the optional modified prefactor
/// exp[+ r/4 <zeta, zeta>], r = (sigma_- + sigma_+)/(sigma_- - sigma_+).
/// Modified labels absorb the damping of the dual dynamics: T* W^s(zeta) =
/// W^s(U zeta) with no scalar factor.
struct ModifiedWeylLabel {
  WeylVector zeta;
  bool modified = true;
};

/// <rho | w^s(theta)> for a single mode.
inline cxd modified_mode_pairing(const ModeState& rho, cxd theta,
                                 const ModelParams& p) {
  return std::exp(0.25 * p.reservoir_coth() * std::norm(theta)) * rho.char_fn(theta);
}

/// <rho_0 x ... x rho_m | W(zeta)> or its modified variant.
inline cxd pairing(std::span<const ModeState> states, const ModifiedWeylLabel& label,
                   const ModelParams& p) {
  cxd out = char_fn_product(states, label.zeta);
  if (label.modified)
    out *= std::exp(0.25 * p.reservoir_coth() * label.zeta.squaredNorm());
  return out;
}

struct IntertwineReport {
  int samples = 0;
  double max_deviation = 0.0;
};

/// Checks U_{l+k} on m+k chain modes against r o U_l on m chain modes for
/// every supplied label; report-only.
inline IntertwineReport intertwine_check(int m, int k, int l, const ModelParams& p,
                                         std::span<const WeylVector> samples) {
  if (l < 1 || l > m) throw index_out_of_range("need 1 <= l <= m");
  if (k < 0) throw index_out_of_range("need k >= 0");
  const Eigen::MatrixXcd big = build_U_closed(l + k, m + k, p).U;
  const Eigen::MatrixXcd small = build_U_closed(l, m, p).U;
  IntertwineReport rep;
  for (const WeylVector& zeta : samples) {
    if (zeta.size() != m + 1) throw size_error("sample label has wrong mode count");
    const WeylVector lhs = big * embed(zeta, m + k);
    const WeylVector rhs = embed(small * zeta, m + k);
    rep.max_deviation =
        std::max(rep.max_deviation, (lhs - rhs).cwiseAbs().maxCoeff());
    ++rep.samples;
  }
  return rep;
}

/// <T[rho0 | rho1] | w^s(theta)> =
///   <rho0 | w^s(e^{i eps tau} g z theta)> <rho1 | w^s(e^{i eps tau} g w theta)>.
/// Strip exp(+r|theta|^2/4) to recover the plain characteristic function.
inline cxd one_step_T(const ModeState& rho0, const ModeState& rho1,
                      const ModelParams& p, cxd theta) {
  const PropagatorBlocks b = propagator_blocks(p, p.tau);
  const cxd rot = std::exp(cxd(0.0, p.epsilon * p.tau));
  return modified_mode_pairing(rho0, rot * b.gz() * theta, p) *
         modified_mode_pairing(rho1, rot * b.gw() * theta, p);
}

/// <T^(k)[rho0 | rho1, ..., rho1] | w^s(theta)>, closed form.
inline cxd multi_step_T(const ModeState& rho0, const ModeState& rho1, int k,
                        const ModelParams& p, cxd theta) {
  if (k < 1) throw index_out_of_range("need k >= 1");
  const PropagatorBlocks b = propagator_blocks(p, p.tau);
  const cxd rot = std::exp(cxd(0.0, double(k) * p.epsilon * p.tau));
  cxd out = modified_mode_pairing(rho0, rot * std::pow(b.gz(), k) * theta, p);
  for (int j = 1; j <= k; ++j)
    out *= modified_mode_pairing(rho1, rot * std::pow(b.gz(), k - j) * b.gw() * theta, p);
  return out;
}

/// Characteristic function of the unique fixed point rho_* with
/// T[rho_* | rho1] = T rho_*. Uses the truncated product for D, so it stays an
/// independent route from the closed-form steady state of states.hpp.
inline cxd fixed_point(const ModeState& rho1, const ModelParams& p, cxd theta,
                       double tol = 1e-12) {
  const PropagatorBlocks b = propagator_blocks(p, p.tau);
  const double lambda = std::norm(b.gw()) / (1.0 - std::norm(b.gz()));
  const double pre = -0.25 * std::norm(theta) * p.reservoir_coth() * (1.0 - lambda);
  return std::exp(cxd(pre, 0.0)) * d_functional_product(rho1, p, b.gw() * theta, tol);
}

/// The limiting sliding-window state over n+1 modes: the n-step evolution of
/// rho_* x rho_1^{x n}, with mode n the most recently arrived chain mode.
class WindowState {
 public:
  WindowState(int n, ModelParams p, ModeState rho1, double tol = 1e-12)
      : n_(n), p_(std::move(p)), rho1_(std::move(rho1)), tol_(tol) {
    if (n < 1) throw index_out_of_range("window width must be >= 1");
  }

  int width() const { return n_; }
  const ModelParams& params() const { return p_; }
  const ModeState& chain_state() const { return rho1_; }

  /// <Lambda_n | W^s_n(zeta)>.
  cxd modified_pairing(const WeylVector& zeta) const {
    if (zeta.size() != n_ + 1) throw size_error("label has wrong mode count");
    const WeylVector v = propagate(zeta, first_m_steps(n_), p_);
    cxd out = std::exp(0.25 * p_.reservoir_coth() * std::norm(v(0))) *
              fixed_point(rho1_, p_, v(0), tol_);
    for (int j = 1; j <= n_; ++j) out *= modified_mode_pairing(rho1_, v(j), p_);
    return out;
  }

  /// Plain characteristic function <Lambda_n | W_n(zeta)>.
  cxd char_fn(const WeylVector& zeta) const {
    return std::exp(-0.25 * p_.reservoir_coth() * zeta.squaredNorm()) *
           modified_pairing(zeta);
  }

  /// Covariance of the window state when the chain is thermal; the cavity
  /// factor enters at its effective steady temperature.
  Eigen::MatrixXcd covariance() const {
    if (!rho1_.is_thermal())
      throw bad_kind("window covariance needs a thermal chain state");
    const double r = p_.reservoir_coth();
    const double cb = rho1_.thermal_coth();
    const double cstar = thermo_summary(p_, rho1_.beta()).coth_effective;
    const auto steps = first_m_steps(n_);
    std::vector<WeylVector> cols(n_ + 1);
    for (int j = 0; j <= n_; ++j) {
      WeylVector e = WeylVector::Zero(n_ + 1);
      e(j) = 1.0;
      cols[j] = propagate(e, steps, p_);
    }
    Eigen::MatrixXcd X(n_ + 1, n_ + 1);
    for (int j = 0; j <= n_; ++j) {
      for (int k = j; k <= n_; ++k) {
        cxd x = (cb - r) * cols[j].dot(cols[k]) +
                (cstar - cb) * std::conj(cols[j](0)) * cols[k](0);
        if (j == k) x += r;
        X(j, k) = x;
        X(k, j) = std::conj(x);
      }
    }
    return X;
  }

 private:
  int n_;
  ModelParams p_;
  ModeState rho1_;
  double tol_;
};

inline WindowState window_state(int n, const ModelParams& p, const ModeState& rho1,
                                double tol = 1e-12) {
  return WindowState(n, p, rho1, tol);
}

/// Finite-k window approximant, rotated back by the free evolution:
/// <(T^{-k})^{x(n+1)} R_{n,n+k} T^{(n+k)}_{(n+k)tau,0}(rho0 x rho1^{x(n+k)})
///   | W^s_n(zeta)>.
/// Converges to WindowState::modified_pairing at rate |g z|^k.
inline cxd window_finite_k(int n, int k, const ModeState& rho0, const ModeState& rho1,
                           const ModelParams& p, const WeylVector& zeta) {
  if (n < 1 || k < 0) throw index_out_of_range("need n >= 1 and k >= 0");
  if (zeta.size() != n + 1) throw size_error("label has wrong mode count");
  const cxd back = std::exp(cxd(0.0, -double(k) * p.epsilon * p.tau));
  const WeylVector lifted = embed(WeylVector(back * zeta), n + k);
  const WeylVector v = propagate(lifted, first_m_steps(n + k), p);
  cxd out = std::exp(0.25 * p.reservoir_coth() * std::norm(v(0))) *
            rho0.char_fn(v(0));
  for (int j = 1; j <= n + k; ++j) out *= modified_mode_pairing(rho1, v(j), p);
  return out;
}

/// One sliding move applied to the window limit: a fresh chain mode arrives
/// and interacts, the oldest window mode is traced out, and the free rotation
/// is undone. For a gauge-invariant chain state the result reproduces
/// modified_pairing(zeta) — the stationarity of the window limit.
inline cxd window_advance_rotate_drop(const WindowState& w, const WeylVector& zeta) {
  const int n = w.width();
  if (zeta.size() != n + 1) throw size_error("label has wrong mode count");
  const ModelParams& p = w.params();
  const cxd back = std::exp(cxd(0.0, -p.epsilon * p.tau));
  WeylVector lifted = WeylVector::Zero(n + 2);
  lifted(0) = back * zeta(0);
  for (int j = 1; j <= n; ++j) lifted(j + 1) = back * zeta(j);
  detail::apply_mix(lifted, n + 1, propagator_blocks(p, p.tau));
  lifted *= std::exp(cxd(0.0, p.epsilon * p.tau));
  const WeylVector head = lifted.head(n + 1);
  return w.modified_pairing(head) *
         modified_mode_pairing(w.chain_state(), lifted(n + 1), p);
}

}  // namespace cavichain

#endif  // CAVICHAIN_WINDOW_HPP
