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

#ifndef CAVICHAIN_PROPAGATOR_HPP
#define CAVICHAIN_PROPAGATOR_HPP

#include <Eigen/Dense>
#include <span>
#include <unsupported/Eigen/MatrixFunctions>
#include <vector>

#include "cavichain/model.hpp"

namespace cavichain {

using WeylVector = Eigen::VectorXcd;

/// Mode bookkeeping: n_chain chain modes plus the cavity at index 0.
struct ModeIndexSet {
  int n_chain = 1;
  int total() const { return n_chain + 1; }
};

inline ModeIndexSet make_modes(int n_chain) {
  if (n_chain < 1) throw index_out_of_range("need at least one chain mode");
  return ModeIndexSet{n_chain};
}

namespace detail {

inline void require_step_index(int n, int n_chain) {
  if (n < 1 || n > n_chain) throw index_out_of_range("step index out of range");
}

// Mixes components {0, l} of v by the active 2x2 block of V(s).
inline void apply_mix(WeylVector& v, int l, const PropagatorBlocks& b) {
  const cxd v0 = v(0), vl = v(l);
  v(0) = b.g * (b.z_plus * v0 + b.w * vl);
  v(l) = b.g * (b.w * v0 + b.z_minus * vl);
}

}  // namespace detail

// One-body Hamiltonian matrix Y_n = epsilon I + (E - epsilon)/2 J_n + X_n and
// its constituents; all real symmetric.

inline Eigen::MatrixXd build_J(int n, int n_chain) {
  detail::require_step_index(n, n_chain);
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n_chain + 1, n_chain + 1);
  J(0, 0) = 1.0;
  J(n, n) = 1.0;
  return J;
}

inline Eigen::MatrixXd build_X(int n, int n_chain, const ModelParams& p) {
  detail::require_step_index(n, n_chain);
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n_chain + 1, n_chain + 1);
  X(0, 0) = 0.5 * (p.E - p.epsilon);
  X(n, n) = -0.5 * (p.E - p.epsilon);
  X(0, n) = p.eta;
  X(n, 0) = p.eta;
  return X;
}

inline Eigen::MatrixXd build_P0(int n_chain) {
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n_chain + 1, n_chain + 1);
  P(0, 0) = 1.0;
  return P;
}

struct HamiltonianMatrix {
  Eigen::MatrixXd Y;
  int step = 1;
  int n_chain = 1;
};

inline HamiltonianMatrix build_Y(int n, int n_chain, const ModelParams& p) {
  detail::require_step_index(n, n_chain);
  Eigen::MatrixXd Y = p.epsilon * Eigen::MatrixXd::Identity(n_chain + 1, n_chain + 1);
  Y += 0.5 * (p.E - p.epsilon) * build_J(n, n_chain) + build_X(n, n_chain, p);
  return HamiltonianMatrix{std::move(Y), n, n_chain};
}

enum class StepConstruction { exact_exponential, closed_form };

/// Dense one-step matrix U_l(s) together with how it was built. Rows and
/// columns outside {0, l} equal exp(i s epsilon) times the identity.
struct StepMatrix {
  Eigen::MatrixXcd U;
  int step = 1;
  double duration = 0.0;
  StepConstruction mode = StepConstruction::closed_form;
};

/// U_l(s) = exp(i s (Y_l + i (sigma_minus - sigma_plus)/2 P0)) by dense
/// scaling-and-squaring; the closed form below is the specification, this
/// construction is its cross-check.
inline StepMatrix build_U_exact(int l, int n_chain, const ModelParams& p, double s) {
  detail::require_step_index(l, n_chain);
  const HamiltonianMatrix Y = build_Y(l, n_chain, p);
  Eigen::MatrixXcd M = Y.Y.cast<cxd>();
  M(0, 0) += cxd(0.0, 0.5 * (p.sigma_minus - p.sigma_plus));
  Eigen::MatrixXcd A = cxd(0.0, s) * M;
  return StepMatrix{A.exp(), l, s, StepConstruction::exact_exponential};
}

/// Closed-form U_l(s) = exp(i s epsilon) V_l(s) from the scalar blocks.
inline StepMatrix build_U_closed(int l, int n_chain, const ModelParams& p, double s) {
  detail::require_step_index(l, n_chain);
  const PropagatorBlocks b = propagator_blocks(p, s);
  const cxd phase = std::exp(cxd(0.0, s * p.epsilon));
  Eigen::MatrixXcd U =
      phase * Eigen::MatrixXcd::Identity(n_chain + 1, n_chain + 1);
  U(0, 0) = phase * b.g * b.z_plus;
  U(0, l) = phase * b.g * b.w;
  U(l, 0) = phase * b.g * b.w;
  U(l, l) = phase * b.g * b.z_minus;
  return StepMatrix{std::move(U), l, s, StepConstruction::closed_form};
}

inline StepMatrix build_U_closed(int l, int n_chain, const ModelParams& p) {
  return build_U_closed(l, n_chain, p, p.tau);
}

/// Applies the product U_{steps[0]} U_{steps[1]} ... U_{steps.back()} to zeta,
/// rightmost factor first; steps = {1, ..., m} realizes the m-step evolution.
/// Each step touches only components {0, l}; the scalar free phase
/// exp(i m tau epsilon) is applied once at the end.
inline WeylVector propagate(const WeylVector& zeta, std::span<const int> steps,
                            const ModelParams& p) {
  const int n_chain = static_cast<int>(zeta.size()) - 1;
  WeylVector v = zeta;
  if (steps.empty()) return v;
  const PropagatorBlocks b = propagator_blocks(p, p.tau);
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    detail::require_step_index(*it, n_chain);
    detail::apply_mix(v, *it, b);
  }
  v *= std::exp(cxd(0.0, double(steps.size()) * p.tau * p.epsilon));
  return v;
}

inline std::vector<int> first_m_steps(int m) {
  std::vector<int> s(m);
  for (int i = 0; i < m; ++i) s[i] = i + 1;
  return s;
}

/// Closed form for U_1 ... U_m e with e the cavity unit vector, over
/// n_chain + 1 modes. Carries the phase exp(i m tau epsilon) that direct
/// iteration produces.
inline WeylVector component_formula_e(int m, int n_chain, const ModelParams& p) {
  detail::require_step_index(m, n_chain);
  const PropagatorBlocks b = propagator_blocks(p, p.tau);
  const cxd gz = b.gz(), gw = b.gw();
  const cxd phase = std::exp(cxd(0.0, double(m) * p.tau * p.epsilon));
  WeylVector v = WeylVector::Zero(n_chain + 1);
  v(0) = phase * std::pow(gz, m);
  for (int k = 1; k <= m; ++k) v(k) = phase * gw * std::pow(gz, m - k);
  return v;
}

enum class PairKind { cavity_chain, chain_chain };

/// Closed form for U_1 ... U_N applied to a two-mode amplitude vector:
/// amp_m at mode m and amp_n at mode n. cavity_chain requires m = 0,
/// 1 <= n <= N; chain_chain requires 1 <= m < n <= N. All N steps act, so the
/// phase is exp(i N tau epsilon).
inline WeylVector component_formula_pair(PairKind kind, int m, int n, int n_chain,
                                         const ModelParams& p, cxd amp_m, cxd amp_n) {
  if (kind == PairKind::cavity_chain) {
    if (m != 0) throw bad_kind("cavity_chain requires first index 0");
  } else {
    if (m < 1) throw bad_kind("chain_chain requires first index >= 1");
  }
  if (m >= n) throw index_out_of_range("indices must satisfy m < n");
  detail::require_step_index(n, n_chain);

  const int N = n_chain;
  const PropagatorBlocks b = propagator_blocks(p, p.tau);
  const cxd gz = b.gz(), gw = b.gw(), gzm = b.gz_minus();
  const cxd phase = std::exp(cxd(0.0, double(N) * p.tau * p.epsilon));
  WeylVector v = WeylVector::Zero(N + 1);

  if (kind == PairKind::cavity_chain) {
    const cxd a0 = amp_m, a1 = amp_n;
    v(0) = std::pow(gz, N) * a0 + std::pow(gz, n - 1) * gw * a1;
    for (int k = 1; k < n; ++k)
      v(k) = std::pow(gz, N - k) * gw * a0 + std::pow(gz, n - k - 1) * gw * gw * a1;
    v(n) = std::pow(gz, N - n) * gw * a0 + gzm * a1;
    for (int k = n + 1; k <= N; ++k) v(k) = std::pow(gz, N - k) * gw * a0;
  } else {
    const cxd a1 = amp_m, a2 = amp_n;
    const cxd mix = a1 + std::pow(gz, n - m) * a2;
    v(0) = std::pow(gz, m - 1) * gw * mix;
    for (int k = 1; k < m; ++k) v(k) = std::pow(gz, m - k - 1) * gw * gw * mix;
    v(m) = gzm * a1 + gw * gw * std::pow(gz, n - m - 1) * a2;
    for (int k = m + 1; k < n; ++k) v(k) = std::pow(gz, n - k - 1) * gw * gw * a2;
    v(n) = gzm * a2;
  }
  return phase * v;
}

}  // namespace cavichain

#endif  // CAVICHAIN_PROPAGATOR_HPP
