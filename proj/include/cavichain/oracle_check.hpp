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

#ifndef CAVICHAIN_ORACLE_CHECK_HPP
#define CAVICHAIN_ORACLE_CHECK_HPP

#include <chrono>
#include <vector>

#include "cavichain/fock.hpp"
#include "cavichain/rng.hpp"

// Cross-validation of the closed forms against the truncated-Fock integration
// of the master equation: second moments and characteristic functions of full
// repeated-interaction runs, plus a cutoff sweep showing the disagreement
// shrink as the truncation grows.

namespace cavichain {

struct OracleCaseResult {
  int set_index = 0;
  int n_steps = 1;
  int cutoff = 12;
  ModelParams params;
  double beta0 = 1.0;
  double beta = 1.0;
  double moment_error = 0.0;
  double charfn_error = 0.0;
  double seconds = 0.0;
};

struct OracleCheckReport {
  std::vector<OracleCaseResult> cases;      // one per parameter set, max cutoff
  std::vector<OracleCaseResult> sweep;      // cutoff sweeps on the first sets
  double moment_tol = 1e-4;
  double charfn_tol = 5e-4;
  bool pass = false;
  std::string failure;
  double total_seconds = 0.0;
};

namespace detail {

// Parameter draws kept in the regime where the truncated thermal states carry
// negligible weight near the cutoff (occupations stay below ~0.7), so the
// comparison isolates integration error from truncation leakage.
inline ModelParams oracle_safe_params(Rng& rng) {
  const double E = rng.uniform(0.8, 1.3);
  const double epsilon = rng.uniform(0.8, 1.3);
  const double eta = rng.uniform(0.25, 0.75) * std::sqrt(E * epsilon);
  const double tau = rng.uniform(0.8, 1.2);
  const double sm = rng.uniform(0.15, 0.35);
  const double sp = rng.uniform(0.0, 0.3) * sm;
  return validate_params(E, epsilon, eta, tau, sm, sp);
}

inline OracleCaseResult run_oracle_case(const ModelParams& p, double beta0,
                                        double beta, int n_steps, int cutoff,
                                        unsigned long long zeta_seed) {
  const auto t0 = std::chrono::steady_clock::now();
  OracleCaseResult res;
  res.params = p;
  res.beta0 = beta0;
  res.beta = beta;
  res.n_steps = n_steps;
  res.cutoff = cutoff;

  const TruncationSpec spec = make_truncation(n_steps + 1, cutoff);
  std::vector<ModeState> init{ModeState::gibbs(beta0)};
  for (int j = 0; j < n_steps; ++j) init.push_back(ModeState::gibbs(beta));
  DensityOperator rho = product_state(spec, init);

  std::vector<Segment> schedule;
  for (int j = 1; j <= n_steps; ++j) schedule.push_back({j, p.tau});
  rho = integrate(std::move(rho), schedule, spec, p, p.tau / 200.0);

  // Closed-form reference at the effective temperatures of the truncated
  // thermal states actually prepared; the moment dynamics is closed and
  // linear, so this is the exact prediction for those initial moments.
  const double b0e = effective_beta_for_cutoff(beta0, cutoff);
  const double bee = effective_beta_for_cutoff(beta, cutoff);
  const Eigen::MatrixXcd X = covariance(n_steps, b0e, bee, p).X;
  const Eigen::MatrixXcd M_ref = moments_from_covariance(X);
  const Eigen::MatrixXcd M_num = second_moments(rho.rho, spec);
  res.moment_error = (M_num - M_ref).cwiseAbs().maxCoeff();

  Rng zrng(zeta_seed);
  double cerr = 0.0;
  for (int dir = 0; dir < 6; ++dir) {
    WeylVector u(spec.modes);
    for (int j = 0; j < spec.modes; ++j) u(j) = zrng.complex_normal();
    u /= u.norm();
    for (double radius : {0.5, 1.0, 1.5}) {
      const WeylVector zeta = radius * u;
      const cxd numeric = char_fn_truncated(rho.rho, zeta, spec);
      const cxd closed =
          std::exp(cxd(-0.25 * std::real(zeta.dot(X * zeta)), 0.0));
      cerr = std::max(cerr, std::abs(numeric - closed));
    }
  }
  res.charfn_error = cerr;
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
  return res;
}

}  // namespace detail

/// Runs `n_sets` random parameter sets (the first `two_step_sets` with two
/// interaction steps, the rest with one) at the largest cutoff, and sweeps the
/// full cutoff list on the first `sweep_sets` sets to confirm the error
/// decreases with the truncation size.
inline OracleCheckReport run_oracle_check(unsigned long long seed, int n_sets = 10,
                                          int two_step_sets = 3,
                                          std::vector<int> cutoffs = {8, 10, 12},
                                          double moment_tol = 1e-4,
                                          double charfn_tol = 5e-4,
                                          int sweep_sets = 2) {
  const auto t0 = std::chrono::steady_clock::now();
  OracleCheckReport rep;
  rep.moment_tol = moment_tol;
  rep.charfn_tol = charfn_tol;
  rep.pass = true;
  Rng rng(seed);
  const int d_max = cutoffs.back();

  for (int i = 0; i < n_sets; ++i) {
    const ModelParams p = detail::oracle_safe_params(rng);
    const double beta0 = rng.uniform(1.0, 2.5);
    const double beta = rng.uniform(1.0, 2.5);
    const int n_steps = (i < two_step_sets) ? 2 : 1;
    const unsigned long long zseed = seed * 1000003ULL + i;

    auto main_case = detail::run_oracle_case(p, beta0, beta, n_steps, d_max, zseed);
    main_case.set_index = i;
    if (main_case.moment_error >= moment_tol) {
      rep.pass = false;
      rep.failure = "moment error above tolerance in set " + std::to_string(i);
    }
    if (main_case.charfn_error >= charfn_tol) {
      rep.pass = false;
      rep.failure = "characteristic-function error above tolerance in set " +
                    std::to_string(i);
    }

    if (i < sweep_sets) {
      std::vector<OracleCaseResult> sweep;
      for (int d : cutoffs) {
        if (d == d_max) {
          sweep.push_back(main_case);
          continue;
        }
        auto c = detail::run_oracle_case(p, beta0, beta, n_steps, d, zseed);
        c.set_index = i;
        sweep.push_back(std::move(c));
      }
      for (std::size_t j = 1; j < sweep.size(); ++j) {
        if (sweep[j].moment_error >= sweep[j - 1].moment_error) {
          rep.pass = false;
          rep.failure = "moment error not decreasing with cutoff in set " +
                        std::to_string(i);
        }
        if (sweep[j].charfn_error >= sweep[j - 1].charfn_error) {
          rep.pass = false;
          rep.failure = "char-fn error not decreasing with cutoff in set " +
                        std::to_string(i);
        }
      }
      rep.sweep.insert(rep.sweep.end(), sweep.begin(), sweep.end());
    }
    rep.cases.push_back(std::move(main_case));
  }
  rep.total_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace cavichain

#endif  // CAVICHAIN_ORACLE_CHECK_HPP
