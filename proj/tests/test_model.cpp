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

#include "cavichain/model.hpp"
#include "cavichain/rng.hpp"

using namespace cavichain;

namespace {

// Reference values from tests/golden_gen.py (mpmath, 50 digits).
const cxd kGoldenA_g{0.95122942450071400645, 0.0};
const cxd kGoldenA_w{0.0, 0.4796287354738809037};
const cxd kGoldenA_zp{0.83081850617492300009, 0.0};
const cxd kGoldenA_zm{0.92674425326969918616, 0.0};

const cxd kGoldenB_g{0.75063614363940724887, 0.4100743942369493825};
const cxd kGoldenB_w{0.032243491830140895394, 0.93656682905472722496};
const cxd kGoldenB_zp{-0.31527091207119886949, 0.22865006270652822081};
const cxd kGoldenB_zm{-0.16645168792864952969, -0.31228874886584113102};

const double kGoldenLambda = 0.62415872812774700432;
const double kGoldenBetaStar = 1.1141485887497988919;

}  // namespace

TEST_CASE("validate_params accepts an admissible set") {
  const ModelParams p = validate_params(1.0, 1.0, 0.5, 1.0, 0.2, 0.0);
  CHECK(p.eta == 0.5);
  CHECK(p.zero_temperature_reservoir());
}

TEST_CASE("validate_params rejects eta^2 > E epsilon") {
  CHECK_THROWS_AS(validate_params(1.0, 1.0, 2.0, 1.0, 0.2, 0.0),
                  condition_violation);
}

TEST_CASE("validate_params requires strict dissipativity") {
  CHECK_THROWS_AS(validate_params(1.0, 1.0, 0.5, 1.0, 0.1, 0.1),
                  condition_violation);
}

TEST_CASE("validate_params lists every violation at once") {
  try {
    validate_params(-1.0, 1.0, 2.0, 0.0, 0.1, 0.2);
    FAIL("expected a throw");
  } catch (const condition_violation& e) {
    CHECK(e.violations().size() == 4);  // E<=0, tau<=0, eta^2>E*eps, sp>=sm
  }
}

TEST_CASE("blocks at t = 0 are trivial") {
  const ModelParams p = validate_params(1.2, 0.9, 0.4, 1.0, 0.3, 0.1);
  const PropagatorBlocks b = propagator_blocks(p, 0.0);
  CHECK(std::abs(b.g - 1.0) < 1e-15);
  CHECK(std::abs(b.w) < 1e-15);
  CHECK(std::abs(b.z_plus - 1.0) < 1e-15);
  CHECK(std::abs(b.z_minus - 1.0) < 1e-15);
}

TEST_CASE("decoupled blocks collapse to phases") {
  const ModelParams p = validate_params(1.3, 0.8, 0.0, 1.0, 0.25, 0.05);
  const PropagatorBlocks b = propagator_blocks(p, p.tau);
  const cxd expected_z =
      std::exp(cxd(0.0, 0.5 * p.tau) * (p.shifted_frequency() - p.epsilon));
  CHECK(std::abs(b.w) < 1e-15);
  CHECK(std::abs(b.z_plus - expected_z) < 1e-14);
  CHECK(std::abs(b.gz() - expected_z * expected_z) < 1e-14);
  CHECK(std::abs(b.z_plus * b.z_minus - 1.0) < 1e-14);
}

TEST_CASE("blocks match the high-precision reference, case A") {
  const ModelParams p = validate_params(1.0, 1.0, 0.5, 1.0, 0.2, 0.0);
  const PropagatorBlocks b = propagator_blocks(p, 1.0);
  CHECK(std::abs(b.g - kGoldenA_g) < 1e-10);
  CHECK(std::abs(b.w - kGoldenA_w) < 1e-10);
  CHECK(std::abs(b.z_plus - kGoldenA_zp) < 1e-10);
  CHECK(std::abs(b.z_minus - kGoldenA_zm) < 1e-10);
}

TEST_CASE("blocks match the high-precision reference, case B") {
  const ModelParams p = validate_params(1.3, 0.9, 0.7, 0.8, 0.35, 0.1);
  const PropagatorBlocks b = propagator_blocks(p, 2.5);
  CHECK(std::abs(b.g - kGoldenB_g) < 1e-10);
  CHECK(std::abs(b.w - kGoldenB_w) < 1e-10);
  CHECK(std::abs(b.z_plus - kGoldenB_zp) < 1e-10);
  CHECK(std::abs(b.z_minus - kGoldenB_zm) < 1e-10);
}

TEST_CASE("algebraic identities on a parameter grid") {
  Rng rng(1234);
  double max_sympl = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const ModelParams p = random_admissible_params(rng);
    const double t = rng.uniform(0.1, 10.0);
    const PropagatorBlocks b = propagator_blocks(p, t);
    max_sympl = std::max(max_sympl, std::abs(b.symplectic_defect()));
    CHECK(b.active_row_norm_sq() < 1.0);
  }
  CHECK(max_sympl < 1e-12);
}

TEST_CASE("blocks are branch independent") {
  Rng rng(77);
  for (int i = 0; i < 200; ++i) {
    const ModelParams p = random_admissible_params(rng);
    const double t = rng.uniform(0.1, 5.0);
    const PropagatorBlocks plus = detail::blocks_with_branch(p, t, +1);
    const PropagatorBlocks minus = detail::blocks_with_branch(p, t, -1);
    CHECK(std::abs(plus.g - minus.g) < 1e-15);
    CHECK(std::abs(plus.w - minus.w) < 1e-13);
    CHECK(std::abs(plus.z_plus - minus.z_plus) < 1e-13);
    CHECK(std::abs(plus.z_minus - minus.z_minus) < 1e-13);
  }
}

TEST_CASE("degenerate vanishing oscillation rate is handled") {
  // E = epsilon and eta = (sigma_- - sigma_+)/4 makes Delta = 0 exactly.
  ModelParams p;
  p.E = 1.0;
  p.epsilon = 1.0;
  p.sigma_minus = 0.3;
  p.sigma_plus = 0.1;
  p.eta = 0.05;
  p.tau = 1.0;
  const PropagatorBlocks b = propagator_blocks(p, 1.7);
  CHECK(std::abs(b.symplectic_defect()) < 1e-13);
  // sin(t Delta)/Delta -> t
  CHECK(std::abs(b.w - cxd(0.0, p.eta * 1.7)) < 1e-12);
}

TEST_CASE("equal rates give conjugate z blocks") {
  // Not admissible for dynamics; formula-level check only.
  ModelParams p;
  p.E = 1.1;
  p.epsilon = 0.9;
  p.eta = 0.4;
  p.tau = 1.0;
  p.sigma_minus = 0.2;
  p.sigma_plus = 0.2;
  const PropagatorBlocks b = propagator_blocks(p, 1.3);
  CHECK(std::abs(b.z_minus - std::conj(b.z_plus)) < 1e-14);
  CHECK(std::abs(b.symplectic_defect()) < 1e-14);
}

TEST_CASE("reservoir coth example") {
  const ModelParams p = validate_params(1.0, 1.0, 0.5, 1.0, 0.3, 0.1);
  const ThermoSummary s = thermo_summary(p, 1.0);
  CHECK(s.coth_reservoir == Catch::Approx(2.0));
  CHECK(s.beta_star_0 == Catch::Approx(std::log(3.0)));
}

TEST_CASE("decoupling gives the pure reservoir temperature") {
  const ModelParams p = validate_params(1.0, 1.2, 0.0, 1.0, 0.3, 0.1);
  const ThermoSummary s = thermo_summary(p, 2.0);
  CHECK(s.lambda == 0.0);
  CHECK(std::abs(s.beta_star - s.beta_star_0) < 1e-14);
}

TEST_CASE("zero upward rate is represented by coth = 1 plus flag") {
  const ModelParams p = validate_params(1.0, 1.0, 0.5, 1.0, 0.2, 0.0);
  const ThermoSummary s = thermo_summary(p, 1.0);
  CHECK(s.zero_temperature_reservoir);
  CHECK(s.coth_reservoir == 1.0);
  CHECK(std::isinf(s.beta_star_0));
  CHECK(std::isfinite(s.beta_star));
}

TEST_CASE("thermo matches the high-precision reference") {
  const ModelParams p = validate_params(1.0, 1.0, 0.5, 1.0, 0.2, 0.05);
  const ThermoSummary s = thermo_summary(p, 1.0);
  CHECK(std::abs(s.lambda - kGoldenLambda) < 1e-10);
  CHECK(std::abs(s.beta_star - kGoldenBetaStar) < 1e-10);
}

TEST_CASE("effective temperature sits between reservoir and chain") {
  Rng rng(4321);
  for (int i = 0; i < 600; ++i) {
    const ModelParams p = random_admissible_params(rng);
    for (double beta : {0.1, 1.0, 10.0}) {
      const ThermoSummary s = thermo_summary(p, beta);
      CHECK(s.lambda >= 0.0);
      CHECK(s.lambda < 1.0);
      const double lo = std::min(s.beta_star_0, beta);
      const double hi = std::max(s.beta_star_0, beta);
      CHECK(s.beta_star >= lo - 1e-12);
      CHECK(s.beta_star <= hi + 1e-12);
      // the interpolation itself
      const double recon = (1.0 - s.lambda) * s.coth_reservoir +
                           s.lambda * coth_half(beta);
      CHECK(std::abs(coth_half(s.beta_star) - recon) < 1e-12);
    }
  }
}
