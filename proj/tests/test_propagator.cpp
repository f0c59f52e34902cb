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

#include <catch2/catch_amalgamated.hpp>

#include "cavichain/propagator.hpp"
#include "cavichain/rng.hpp"

using namespace cavichain;

namespace {

WeylVector random_vector(Rng& rng, int n) {
  WeylVector v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.complex_normal();
  return v;
}

}  // namespace

TEST_CASE("Y matrix on resonance is the bare coupling") {
  const ModelParams p = validate_params(1.0, 1.0, 0.4, 1.0, 0.2, 0.0);
  const auto Y = build_Y(1, 1, p).Y;
  CHECK(Y(0, 0) == Catch::Approx(1.0));
  CHECK(Y(1, 1) == Catch::Approx(1.0));
  CHECK(Y(0, 1) == Catch::Approx(0.4));
  CHECK(Y(1, 0) == Catch::Approx(0.4));
}

TEST_CASE("Y matrix entries for N=2, n=2") {
  const ModelParams p = validate_params(1.4, 0.8, 0.3, 1.0, 0.2, 0.0);
  const auto Y = build_Y(2, 2, p).Y;
  CHECK(Y(0, 0) == Catch::Approx(p.E));
  CHECK(Y(2, 2) == Catch::Approx(p.epsilon));
  CHECK(Y(1, 1) == Catch::Approx(p.epsilon));
  CHECK(Y(0, 2) == Catch::Approx(p.eta));
  CHECK(Y(2, 0) == Catch::Approx(p.eta));
  CHECK(Y(0, 1) == 0.0);
  CHECK((Y - Y.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Y eigenvalues match the two-level closed form") {
  const ModelParams p = validate_params(1.3, 0.7, 0.5, 1.0, 0.2, 0.0);
  const auto Y = build_Y(1, 1, p).Y;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Y);
  const double mid = p.epsilon + 0.5 * (p.E - p.epsilon);
  const double split =
      std::sqrt(0.25 * (p.E - p.epsilon) * (p.E - p.epsilon) + p.eta * p.eta);
  CHECK(es.eigenvalues()(0) == Catch::Approx(mid - split));
  CHECK(es.eigenvalues()(1) == Catch::Approx(mid + split));
}

TEST_CASE("exact exponential at s=0 is the identity") {
  const ModelParams p = validate_params(1.0, 1.1, 0.4, 1.0, 0.3, 0.05);
  const auto U = build_U_exact(1, 2, p, 0.0).U;
  CHECK((U - Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("dissipation makes the active block a strict contraction") {
  const ModelParams p = validate_params(1.0, 1.0, 0.5, 1.0, 0.3, 0.05);
  const auto U = build_U_exact(2, 3, p, p.tau).U;
  Eigen::Matrix2cd active;
  active << U(0, 0), U(0, 2), U(2, 0), U(2, 2);
  Eigen::JacobiSVD<Eigen::Matrix2cd> svd(active);
  CHECK(svd.singularValues().maxCoeff() < 1.0);
}

TEST_CASE("exact and closed-form constructions agree") {
  Rng rng(99);
  double max_dev = 0.0;
  for (int i = 0; i < 60; ++i) {
    const ModelParams p = random_admissible_params(rng);
    const int N = rng.uniform_int(1, 6);
    const int l = rng.uniform_int(1, N);
    const auto Ue = build_U_exact(l, N, p, p.tau).U;
    const auto Uc = build_U_closed(l, N, p).U;
    max_dev = std::max(max_dev, (Ue - Uc).cwiseAbs().maxCoeff());
  }
  CHECK(max_dev < 1e-10);
}

TEST_CASE("closed form with eta=0 damps only the active diagonal") {
  const ModelParams p = validate_params(1.0, 1.2, 0.0, 1.0, 0.3, 0.1);
  const auto U = build_U_closed(2, 3, p).U;
  const cxd phase = std::exp(cxd(0.0, p.tau * p.epsilon));
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k)
      if (j != k) CHECK(std::abs(U(j, k)) < 1e-15);
  CHECK(std::abs(U(1, 1) - phase) < 1e-14);
  CHECK(std::abs(U(3, 3) - phase) < 1e-14);
  CHECK(std::abs(U(0, 0)) < 1.0);  // damped by |g z| < 1
}

TEST_CASE("single-mode closed form is the advertised 2x2") {
  const ModelParams p = validate_params(1.1, 0.9, 0.5, 1.0, 0.25, 0.05);
  const auto U = build_U_closed(1, 1, p).U;
  const auto b = propagator_blocks(p, p.tau);
  const cxd phase = std::exp(cxd(0.0, p.tau * p.epsilon));
  CHECK(std::abs(U(0, 0) - phase * b.g * b.z_plus) < 1e-15);
  CHECK(std::abs(U(0, 1) - phase * b.g * b.w) < 1e-15);
  CHECK(std::abs(U(1, 0) - phase * b.g * b.w) < 1e-15);
  CHECK(std::abs(U(1, 1) - phase * b.g * b.z_minus) < 1e-15);
  CHECK(U.row(0).squaredNorm() == Catch::Approx(b.active_row_norm_sq()));
  CHECK(U.row(0).squaredNorm() < 1.0);
}

TEST_CASE("propagate leaves untouched modes with a pure phase") {
  const ModelParams p = validate_params(1.0, 1.3, 0.5, 1.0, 0.2, 0.0);
  WeylVector e3 = WeylVector::Zero(6);
  e3(3) = 1.0;
  const auto steps = std::vector<int>{1, 2};  // mode 3 never touched
  const WeylVector out = propagate(e3, steps, p);
  const cxd phase = std::exp(cxd(0.0, 2.0 * p.tau * p.epsilon));
  CHECK((out - phase * e3).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("propagate matches dense matrix products") {
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const ModelParams p = random_admissible_params(rng);
    const int N = 4;
    std::vector<int> steps(4);
    for (auto& s : steps) s = rng.uniform_int(1, N);
    const WeylVector zeta = random_vector(rng, N + 1);
    Eigen::MatrixXcd prod = Eigen::MatrixXcd::Identity(N + 1, N + 1);
    for (int s : steps) prod = prod * build_U_closed(s, N, p).U;
    const WeylVector dense = prod * zeta;
    const WeylVector fast = propagate(zeta, steps, p);
    CHECK((dense - fast).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("propagate is linear") {
  Rng rng(8);
  const ModelParams p = random_admissible_params(rng);
  const int N = 5;
  const auto steps = first_m_steps(5);
  const WeylVector z1 = random_vector(rng, N + 1);
  const WeylVector z2 = random_vector(rng, N + 1);
  const cxd a = rng.complex_normal(), b = rng.complex_normal();
  const WeylVector lhs = propagate(a * z1 + b * z2, steps, p);
  const WeylVector rhs =
      a * propagate(z1, steps, p) + b * propagate(z2, steps, p);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("cavity component formula: one step") {
  const ModelParams p = validate_params(1.0, 0.9, 0.4, 1.0, 0.3, 0.1);
  const auto b = propagator_blocks(p, p.tau);
  const WeylVector v = component_formula_e(1, 3, p);
  const cxd phase = std::exp(cxd(0.0, p.tau * p.epsilon));
  CHECK(std::abs(v(0) - phase * b.gz()) < 1e-14);
  CHECK(std::abs(v(1) - phase * b.gw()) < 1e-14);
  CHECK(std::abs(v(2)) == 0.0);
  CHECK(std::abs(v(3)) == 0.0);
}

TEST_CASE("cavity component formula: eta=0 leaves only the cavity") {
  const ModelParams p = validate_params(1.0, 1.0, 0.0, 1.0, 0.3, 0.1);
  const WeylVector v = component_formula_e(3, 4, p);
  CHECK(std::abs(v(0)) > 0.0);
  for (int k = 1; k <= 4; ++k) CHECK(std::abs(v(k)) == 0.0);
}

TEST_CASE("cavity component formula matches propagation") {
  Rng rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const ModelParams p = random_admissible_params(rng);
    const int N = 5, m = 3;
    WeylVector e = WeylVector::Zero(N + 1);
    e(0) = 1.0;
    const WeylVector direct = propagate(e, first_m_steps(m), p);
    const WeylVector formula = component_formula_e(m, N, p);
    CHECK((direct - formula).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("pair formula reduces to the cavity formula by linearity") {
  const ModelParams p = validate_params(1.1, 1.0, 0.45, 1.0, 0.25, 0.05);
  const int N = 5, n = 3;
  const cxd a0{0.7, -0.2};
  const WeylVector pairv =
      component_formula_pair(PairKind::cavity_chain, 0, n, N, p, a0, cxd(0.0, 0.0));
  const WeylVector base = component_formula_e(N, N, p);
  CHECK((pairv - a0 * base).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("chain pair components vanish beyond the later mode") {
  const ModelParams p = validate_params(1.2, 0.8, 0.5, 1.0, 0.3, 0.05);
  const cxd a1{0.3, 0.4}, a2{-0.8, 0.1};
  const WeylVector v6 =
      component_formula_pair(PairKind::chain_chain, 2, 4, 6, p, a1, a2);
  const WeylVector v9 =
      component_formula_pair(PairKind::chain_chain, 2, 4, 9, p, a1, a2);
  for (int k = 5; k <= 6; ++k) CHECK(std::abs(v6(k)) == 0.0);
  // magnitudes do not depend on the total step count
  for (int k = 0; k <= 4; ++k)
    CHECK(std::abs(std::abs(v6(k)) - std::abs(v9(k))) < 1e-14);
}

TEST_CASE("pair formulas match propagation") {
  Rng rng(13);
  for (int trial = 0; trial < 25; ++trial) {
    const ModelParams p = random_admissible_params(rng);
    const int N = 6;
    const cxd a{rng.complex_normal()}, b{rng.complex_normal()};

    const int n = rng.uniform_int(1, N);
    WeylVector zc = WeylVector::Zero(N + 1);
    zc(0) = a;
    zc(n) = b;
    const WeylVector pc =
        component_formula_pair(PairKind::cavity_chain, 0, n, N, p, a, b);
    CHECK((propagate(zc, first_m_steps(N), p) - pc).cwiseAbs().maxCoeff() < 1e-12);

    const int m = rng.uniform_int(1, N - 1);
    const int nn = rng.uniform_int(m + 1, N);
    WeylVector zm = WeylVector::Zero(N + 1);
    zm(m) = a;
    zm(nn) = b;
    const WeylVector pm =
        component_formula_pair(PairKind::chain_chain, m, nn, N, p, a, b);
    CHECK((propagate(zm, first_m_steps(N), p) - pm).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("pair formula validates kinds and indices") {
  const ModelParams p = validate_params(1.0, 1.0, 0.4, 1.0, 0.2, 0.0);
  CHECK_THROWS_AS(component_formula_pair(PairKind::cavity_chain, 1, 2, 4, p,
                                         cxd(1, 0), cxd(0, 0)),
                  bad_kind);
  CHECK_THROWS_AS(component_formula_pair(PairKind::chain_chain, 0, 2, 4, p,
                                         cxd(1, 0), cxd(0, 0)),
                  bad_kind);
  CHECK_THROWS_AS(component_formula_pair(PairKind::chain_chain, 3, 2, 4, p,
                                         cxd(1, 0), cxd(0, 0)),
                  index_out_of_range);
  CHECK_THROWS_AS(component_formula_pair(PairKind::cavity_chain, 0, 5, 4, p,
                                         cxd(1, 0), cxd(0, 0)),
                  index_out_of_range);
}

TEST_CASE("cavity norm decays to the residual mixing weight") {
  const ModelParams p = validate_params(1.0, 1.1, 0.5, 1.0, 0.3, 0.05);
  const auto b = propagator_blocks(p, p.tau);
  const double gz2 = std::norm(b.gz());
  const double lambda = std::norm(b.gw()) / (1.0 - gz2);
  const int N = 50;
  WeylVector e = WeylVector::Zero(N + 1);
  e(0) = 1.0;
  double prev = 1.0;
  for (int m = 1; m <= N; ++m) {
    const double nrm2 = propagate(e, first_m_steps(m), p).squaredNorm();
    CHECK(nrm2 <= prev + 1e-14);  // nonincreasing
    // norm identity: 1 - |U...e|^2 = (1 - |gz|^{2m})(1 - lambda)
    const double expected = 1.0 - (1.0 - std::pow(gz2, m)) * (1.0 - lambda);
    CHECK(std::abs(nrm2 - expected) < 1e-12);
    prev = nrm2;
  }
  CHECK(std::abs(prev - lambda) < std::pow(gz2, N) + 1e-12);
}
