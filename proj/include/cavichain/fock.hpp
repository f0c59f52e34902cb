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

#ifndef CAVICHAIN_FOCK_HPP
#define CAVICHAIN_FOCK_HPP

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>
#include <span>
#include <vector>

#include "cavichain/propagator.hpp"
#include "cavichain/states.hpp"

// Brute-force validator: the master equation integrated on a truncated Fock
// space with a dense density matrix. Deliberately simple and deterministic;
// it cross-checks every closed form at small mode counts.

namespace cavichain {

/// Truncated tensor-product Fock space: `modes` oscillators with `cutoff`
/// levels each, total dimension cutoff^modes. Mode 0 (the cavity) is the
/// slowest index.
struct TruncationSpec {
  int modes = 1;
  int cutoff = 2;
  long long budget = 20736;
  long long dim = 2;
  std::vector<long long> strides;

  int occupation(long long state, int mode) const {
    return int((state / strides[mode]) % cutoff);
  }
};

inline TruncationSpec make_truncation(int modes, int cutoff,
                                      long long budget = 20736) {
  if (modes < 1) throw size_error("need at least one mode");
  if (cutoff < 2) throw size_error("cutoff must be at least 2 levels");
  constexpr long long hard_cap = 32768;
  TruncationSpec s;
  s.modes = modes;
  s.cutoff = cutoff;
  s.budget = std::min(budget, hard_cap);
  long long dim = 1;
  for (int k = 0; k < modes; ++k) {
    dim *= cutoff;
    if (dim > hard_cap) throw budget_exceeded("truncated dimension exceeds 32768");
  }
  if (dim > s.budget) throw budget_exceeded("truncated dimension exceeds the budget");
  s.dim = dim;
  s.strides.resize(modes);
  long long stride = dim;
  for (int k = 0; k < modes; ++k) {
    stride /= cutoff;
    s.strides[k] = stride;
  }
  return s;
}

namespace detail {

// Dense operators are capped tighter than the density-matrix budget; a single
// dim x dim complex matrix at the hard cap would not fit in memory.
inline void require_dense_ok(const TruncationSpec& s) {
  if (s.dim > 4096)
    throw budget_exceeded("dense operator construction capped at dimension 4096");
}

}  // namespace detail

/// Per-mode annihilation/creation matrices on the truncated space. The CCR
/// defect of the truncation is confined to the top level: b b* - b* b - 1 is
/// nonzero only at (cutoff-1, cutoff-1).
struct LadderOps {
  std::vector<Eigen::MatrixXcd> annihilate;
  std::vector<Eigen::MatrixXcd> create;
};

inline LadderOps build_ladder(const TruncationSpec& s) {
  detail::require_dense_ok(s);
  LadderOps ops;
  ops.annihilate.reserve(s.modes);
  ops.create.reserve(s.modes);
  for (int k = 0; k < s.modes; ++k) {
    Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(s.dim, s.dim);
    for (long long i = 0; i < s.dim; ++i) {
      const int n = s.occupation(i, k);
      if (n < s.cutoff - 1)
        b(i, i + s.strides[k]) = std::sqrt(double(n + 1));
    }
    ops.create.push_back(b.adjoint());
    ops.annihilate.push_back(std::move(b));
  }
  return ops;
}

/// Dense H_n = sum_{j,k} (Y_n)_{jk} b_j* b_k on the truncated space.
inline Eigen::MatrixXcd build_H(int n, const TruncationSpec& s, const ModelParams& p) {
  detail::require_dense_ok(s);
  detail::require_step_index(n, s.modes - 1);
  const Eigen::MatrixXd Y = build_Y(n, s.modes - 1, p).Y;
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(s.dim, s.dim);
  for (long long i = 0; i < s.dim; ++i) {
    double diag = 0.0;
    for (int j = 0; j < s.modes; ++j) diag += Y(j, j) * s.occupation(i, j);
    H(i, i) = diag;
  }
  for (int j = 0; j < s.modes; ++j) {
    for (int k = 0; k < s.modes; ++k) {
      if (j == k || Y(j, k) == 0.0) continue;
      // b_j* b_k moves one quantum from mode k to mode j
      for (long long i = 0; i < s.dim; ++i) {
        const int nk = s.occupation(i, k);
        const int nj = s.occupation(i, j);
        if (nk < 1 || nj > s.cutoff - 2) continue;
        const long long dst = i - s.strides[k] + s.strides[j];
        H(dst, i) += Y(j, k) * std::sqrt(double(nk) * double(nj + 1));
      }
    }
  }
  return H;
}

namespace detail {

// Triplet form of H_n; the integrator applies it without densifying.
inline Eigen::SparseMatrix<cxd> sparse_hamiltonian(int n, const TruncationSpec& s,
                                                   const ModelParams& p) {
  require_step_index(n, s.modes - 1);
  const Eigen::MatrixXd Y = build_Y(n, s.modes - 1, p).Y;
  std::vector<Eigen::Triplet<cxd>> trip;
  trip.reserve(std::size_t(s.dim) * 3);
  for (long long i = 0; i < s.dim; ++i) {
    double diag = 0.0;
    for (int j = 0; j < s.modes; ++j) diag += Y(j, j) * s.occupation(i, j);
    trip.emplace_back(int(i), int(i), cxd(diag, 0.0));
  }
  for (int j = 0; j < s.modes; ++j) {
    for (int k = 0; k < s.modes; ++k) {
      if (j == k || Y(j, k) == 0.0) continue;
      for (long long i = 0; i < s.dim; ++i) {
        const int nk = s.occupation(i, k);
        const int nj = s.occupation(i, j);
        if (nk < 1 || nj > s.cutoff - 2) continue;
        const long long dst = i - s.strides[k] + s.strides[j];
        trip.emplace_back(int(dst), int(i),
                          cxd(Y(j, k) * std::sqrt(double(nk) * double(nj + 1)), 0.0));
      }
    }
  }
  Eigen::SparseMatrix<cxd> H(s.dim, s.dim);
  H.setFromTriplets(trip.begin(), trip.end());
  return H;
}

// Diagonal of Q*(1) = sigma_- b0* b0 + sigma_+ b0 b0* on the truncated space;
// the top-level entry of b0 b0* is zero by truncation.
inline Eigen::VectorXd sink_diagonal(const TruncationSpec& s, const ModelParams& p) {
  Eigen::VectorXd q(s.dim);
  for (long long i = 0; i < s.dim; ++i) {
    const int n0 = s.occupation(i, 0);
    const double up = (n0 < s.cutoff - 1) ? double(n0 + 1) : 0.0;
    q(i) = p.sigma_minus * double(n0) + p.sigma_plus * up;
  }
  return q;
}

// out = -i[H, rho] + sigma_- b0 rho b0* + sigma_+ b0* rho b0 - 1/2 {q, rho},
// with work = H rho as scratch. Blocked so the adjoint access stays in cache.
inline void lindblad_apply(const Eigen::SparseMatrix<cxd>& H,
                           const Eigen::VectorXd& q, const TruncationSpec& s,
                           const ModelParams& p, const Eigen::MatrixXcd& rho,
                           Eigen::MatrixXcd& work, Eigen::MatrixXcd& out) {
  const long long dim = s.dim;
  const long long s0 = s.strides[0];
  const int d = s.cutoff;
  work.noalias() = H * rho;
  const double sm = p.sigma_minus, sp = p.sigma_plus;
  const cxd mi(0.0, -1.0);
  constexpr long long T = 96;
  for (long long jb = 0; jb < dim; jb += T) {
    const long long jend = std::min(jb + T, dim);
    for (long long ib = 0; ib < dim; ib += T) {
      const long long iend = std::min(ib + T, dim);
      for (long long j = jb; j < jend; ++j) {
        const int n0j = int(j / s0);
        const double qj = q(j);
        const double upj = (n0j < d - 1) ? std::sqrt(double(n0j + 1)) : 0.0;
        const double dnj = (n0j >= 1) ? std::sqrt(double(n0j)) : 0.0;
        for (long long i = ib; i < iend; ++i) {
          const int n0i = int(i / s0);
          cxd v = mi * (work(i, j) - std::conj(work(j, i)));
          if (upj != 0.0 && n0i < d - 1)
            v += sm * std::sqrt(double(n0i + 1)) * upj * rho(i + s0, j + s0);
          if (dnj != 0.0 && n0i >= 1)
            v += sp * std::sqrt(double(n0i)) * dnj * rho(i - s0, j - s0);
          v -= 0.5 * (q(i) + qj) * rho(i, j);
          out(i, j) = v;
        }
      }
    }
  }
}

}  // namespace detail

/// Generator applied once; reference entry point used by tests and one-off
/// evaluations (integrate() reuses the workspace-backed kernel).
inline Eigen::MatrixXcd lindblad_rhs(const Eigen::MatrixXcd& rho, int n,
                                     const TruncationSpec& s, const ModelParams& p) {
  if (rho.rows() != s.dim || rho.cols() != s.dim)
    throw size_error("density matrix does not match the truncation");
  const auto H = detail::sparse_hamiltonian(n, s, p);
  const auto q = detail::sink_diagonal(s, p);
  Eigen::MatrixXcd work(s.dim, s.dim), out(s.dim, s.dim);
  detail::lindblad_apply(H, q, s, p, rho, work, out);
  return out;
}

struct DensityOperator {
  Eigen::MatrixXcd rho;
  double time = 0.0;
};

/// Single-mode density matrix of a ModeState on `cutoff` levels. Thermal
/// weights are renormalized over the kept levels; displaced states are built
/// by conjugating with the displacement exponential.
inline Eigen::MatrixXcd single_mode_density(const ModeState& st, int cutoff) {
  if (cutoff < 2) throw size_error("cutoff must be at least 2 levels");
  if (st.kind() == ModeState::Kind::custom_radial)
    throw bad_kind("custom radial states have no truncated matrix form");
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(cutoff, cutoff);
  if (st.kind() == ModeState::Kind::vacuum) {
    rho(0, 0) = 1.0;
  } else {
    const double x = std::exp(-st.beta());
    double norm = 0.0, wn = 1.0;
    for (int n = 0; n < cutoff; ++n, wn *= x) norm += wn;
    wn = 1.0;
    for (int n = 0; n < cutoff; ++n, wn *= x) rho(n, n) = wn / norm;
  }
  if (st.kind() == ModeState::Kind::displaced_gibbs) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(cutoff, cutoff);
    for (int n = 0; n + 1 < cutoff; ++n) a(n, n + 1) = std::sqrt(double(n + 1));
    const Eigen::MatrixXcd arg =
        st.mean() * a.adjoint() - std::conj(st.mean()) * a;
    const Eigen::MatrixXcd D = arg.exp();
    rho = D * rho * D.adjoint();
  }
  return rho;
}

/// Product state over all modes of the truncation.
inline DensityOperator product_state(const TruncationSpec& s,
                                     std::span<const ModeState> states) {
  if (int(states.size()) != s.modes)
    throw length_mismatch("one state per mode required");
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Ones(1, 1);
  for (int k = 0; k < s.modes; ++k) {
    const Eigen::MatrixXcd f = single_mode_density(states[k], s.cutoff);
    Eigen::MatrixXcd next(rho.rows() * s.cutoff, rho.cols() * s.cutoff);
    for (long long i = 0; i < rho.rows(); ++i)
      for (long long j = 0; j < rho.cols(); ++j)
        next.block(i * s.cutoff, j * s.cutoff, s.cutoff, s.cutoff) = rho(i, j) * f;
    rho.swap(next);
  }
  return DensityOperator{std::move(rho), 0.0};
}

/// One piecewise-constant piece of the schedule: which chain mode interacts
/// and for how long.
struct Segment {
  int step;
  double duration;
};

/// Classical fixed-step 4th-order integration of the master equation, with
/// the generator switched exactly at the segment boundaries. Throws
/// step_too_large when the trace drifts by more than 1e-8.
inline DensityOperator integrate(DensityOperator state,
                                 std::span<const Segment> schedule,
                                 const TruncationSpec& s, const ModelParams& p,
                                 double dt) {
  if (!(dt > 0.0)) throw step_too_large("dt must be positive");
  if (state.rho.rows() != s.dim || state.rho.cols() != s.dim)
    throw size_error("density matrix does not match the truncation");
  const long long dim = s.dim;
  Eigen::MatrixXcd k1(dim, dim), k2(dim, dim), k3(dim, dim), k4(dim, dim);
  Eigen::MatrixXcd tmp(dim, dim), work(dim, dim);
  const auto q = detail::sink_diagonal(s, p);

  for (const Segment& seg : schedule) {
    if (!(seg.duration >= 0.0)) throw step_too_large("segment duration must be >= 0");
    if (seg.duration == 0.0) continue;
    const auto H = detail::sparse_hamiltonian(seg.step, s, p);
    const long long nsteps = std::max(1LL, (long long)std::ceil(seg.duration / dt));
    const double h = seg.duration / double(nsteps);
    for (long long it = 0; it < nsteps; ++it) {
      detail::lindblad_apply(H, q, s, p, state.rho, work, k1);
      tmp = state.rho + (0.5 * h) * k1;
      detail::lindblad_apply(H, q, s, p, tmp, work, k2);
      tmp = state.rho + (0.5 * h) * k2;
      detail::lindblad_apply(H, q, s, p, tmp, work, k3);
      tmp = state.rho + h * k3;
      detail::lindblad_apply(H, q, s, p, tmp, work, k4);
      state.rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    state.time += seg.duration;
    const double drift = std::abs(state.rho.trace() - cxd(1.0, 0.0));
    if (drift > 1e-8)
      throw step_too_large("trace drifted by " + std::to_string(drift));
  }
  return state;
}

/// All pairwise second moments <b_j* b_k>; O(dim) per pair.
inline Eigen::MatrixXcd second_moments(const Eigen::MatrixXcd& rho,
                                       const TruncationSpec& s) {
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(s.modes, s.modes);
  for (int j = 0; j < s.modes; ++j) {
    cxd diag{0.0, 0.0};
    for (long long i = 0; i < s.dim; ++i)
      diag += double(s.occupation(i, j)) * rho(i, i);
    M(j, j) = diag;
  }
  for (int j = 0; j < s.modes; ++j) {
    for (int k = 0; k < s.modes; ++k) {
      if (j == k) continue;
      cxd acc{0.0, 0.0};
      for (long long i = 0; i < s.dim; ++i) {
        const int nk = s.occupation(i, k);
        const int nj = s.occupation(i, j);
        if (nk < 1 || nj > s.cutoff - 2) continue;
        const long long dst = i - s.strides[k] + s.strides[j];
        acc += std::sqrt(double(nk) * double(nj + 1)) * rho(dst, i);
      }
      M(j, k) = acc;
    }
  }
  return M;
}

struct MomentData {
  Eigen::MatrixXcd second_moments;
  cxd trace;
  double hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
};

/// Moment matrix plus diagnostics (trace, Hermiticity deviation, smallest
/// eigenvalue). The eigenvalue solve is the expensive part; use
/// second_moments() directly in hot loops.
inline MomentData moments(const Eigen::MatrixXcd& rho, const TruncationSpec& s) {
  MomentData m;
  m.second_moments = second_moments(rho, s);
  m.trace = rho.trace();
  m.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  m.min_eigenvalue = es.eigenvalues().minCoeff();
  return m;
}

/// Tr(rho W(zeta)) with W evaluated mode-by-mode as a product of truncated
/// single-mode Weyl exponentials. The accuracy region shrinks with |zeta| at
/// fixed cutoff.
inline cxd char_fn_truncated(const Eigen::MatrixXcd& rho, const WeylVector& zeta,
                             const TruncationSpec& s) {
  if (zeta.size() != s.modes) throw length_mismatch("one amplitude per mode");
  std::vector<Eigen::MatrixXcd> w(s.modes);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(s.cutoff, s.cutoff);
  for (int n = 0; n + 1 < s.cutoff; ++n) a(n, n + 1) = std::sqrt(double(n + 1));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int k = 0; k < s.modes; ++k) {
    const Eigen::MatrixXcd phi =
        inv_sqrt2 * (std::conj(zeta(k)) * a + zeta(k) * a.adjoint());
    w[k] = (cxd(0.0, 1.0) * phi).exp();
  }
  cxd out{0.0, 0.0};
  for (long long col = 0; col < s.dim; ++col) {
    for (long long row = 0; row < s.dim; ++row) {
      // Tr(rho W) = sum_{row,col} rho(row, col) W(col, row)
      cxd factor{1.0, 0.0};
      for (int k = 0; k < s.modes; ++k)
        factor *= w[k](s.occupation(col, k), s.occupation(row, k));
      out += rho(row, col) * factor;
    }
  }
  return out;
}

/// Mean occupation of the renormalized thermal state on `cutoff` levels.
inline double truncated_thermal_occupation(double beta, int cutoff) {
  const double x = std::exp(-beta);
  double norm = 0.0, num = 0.0, wn = 1.0;
  for (int n = 0; n < cutoff; ++n, wn *= x) {
    norm += wn;
    num += double(n) * wn;
  }
  return num / norm;
}

/// Inverse temperature whose exact thermal occupation matches the truncated
/// one; lets closed-form references describe the states actually prepared.
inline double effective_beta_for_cutoff(double beta, int cutoff) {
  return coth_half_inverse(2.0 * truncated_thermal_occupation(beta, cutoff) + 1.0);
}

}  // namespace cavichain

#endif  // CAVICHAIN_FOCK_HPP
