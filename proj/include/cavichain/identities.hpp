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

#ifndef CAVICHAIN_IDENTITIES_HPP
#define CAVICHAIN_IDENTITIES_HPP

#include <string>
#include <vector>

#include "cavichain/rng.hpp"
#include "cavichain/window.hpp"

// Randomized battery asserting the algebra of embeddings, modified Weyl
// labels, interaction maps and the fixed point. Every identity is evaluated
// through two independent routes on random parameters, states and labels.

namespace cavichain {

struct IdentityResult {
  std::string name;
  int instances = 0;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

namespace detail {

inline ModeState random_state(Rng& rng) {
  switch (rng.uniform_int(0, 2)) {
    case 0:
      return ModeState::gibbs(rng.uniform(0.4, 3.0));
    case 1:
      return ModeState::vacuum();
    default:
      return ModeState::displaced_gibbs(rng.uniform(0.4, 3.0),
                                        0.6 * rng.complex_normal());
  }
}

inline std::vector<ModeState> random_states(Rng& rng, int count) {
  std::vector<ModeState> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(random_state(rng));
  return out;
}

inline WeylVector random_label(Rng& rng, int modes) {
  WeylVector z(modes);
  for (int j = 0; j < modes; ++j) z(j) = 0.6 * rng.complex_normal();
  return z;
}

inline cxd tau_rotation(const ModelParams& p, int k = 1) {
  return std::exp(cxd(0.0, double(k) * p.epsilon * p.tau));
}

// Deviation relative to the magnitude of the compared pairings. The modified
// prefactor exp(r |zeta|^2 / 4) makes raw values occasionally large, where an
// absolute difference would only measure ulp noise.
inline double scaled_dev(cxd lhs, cxd rhs) {
  return std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

}  // namespace detail

/// Runs every identity `instances` times with fresh random draws and returns
/// one row per identity. Tolerance is `tol` except for the fixed-point
/// residual, which uses `fixed_point_tol`.
inline std::vector<IdentityResult> run_identity_battery(
    unsigned long long seed, int instances = 50, double tol = 1e-12,
    double fixed_point_tol = 1e-10) {
  using detail::random_label;
  using detail::random_state;
  using detail::random_states;
  using detail::tau_rotation;

  std::vector<IdentityResult> results;
  Rng rng(seed);

  auto run = [&](const std::string& name, double tolerance, auto&& instance) {
    IdentityResult r;
    r.name = name;
    r.tolerance = tolerance;
    for (int i = 0; i < instances; ++i) {
      r.max_deviation = std::max(r.max_deviation, instance(rng));
      ++r.instances;
    }
    r.pass = r.max_deviation < tolerance;
    results.push_back(std::move(r));
  };

  // Embedding intertwines the one-step matrices: U_{l+k} on m+k chain modes
  // applied to an embedded label equals the embedded small-system action.
  run("embedding intertwines one-step matrices", tol, [](Rng& g) {
    ModelParams p = random_admissible_params(g);
    const int m = g.uniform_int(1, 5);
    const int k = g.uniform_int(1, 6 - m);
    const int l = g.uniform_int(1, m);
    const WeylVector zeta = random_label(g, m + 1);
    const std::vector<WeylVector> sample{zeta};
    return intertwine_check(m, k, l, p, sample).max_deviation;
  });

  // Modified labels absorb the one-step damping:
  // exp(r/4 |zeta|^2) Omega(zeta) = exp(r/4 |U zeta|^2).
  run("modified labels absorb the one-step damping", tol, [](Rng& g) {
    ModelParams p = random_admissible_params(g);
    const int m = g.uniform_int(1, 5);
    const int l = g.uniform_int(1, m);
    const WeylVector zeta = random_label(g, m + 1);
    const auto step = weyl_dual_step(zeta, l, p.tau, p);
    const double r4 = 0.25 * p.reservoir_coth();
    const double lhs = std::exp(r4 * zeta.squaredNorm()) * step.damping;
    const double rhs = std::exp(r4 * step.zeta.squaredNorm());
    return detail::scaled_dev(lhs, rhs);
  });

  // Dual reduction inserts unit factors: pairing the embedded label against
  // the full product equals pairing the original label against the reduced one.
  run("dual reduction inserts unit factors", tol, [](Rng& g) {
    ModelParams p = random_admissible_params(g);
    const int m = g.uniform_int(0, 3);
    const int k = g.uniform_int(1, 3);
    const auto all = random_states(g, m + k + 1);
    const WeylVector zeta = random_label(g, m + 1);
    const cxd lhs = pairing(all, {embed(zeta, m + k), true}, p);
    std::vector<ModeState> reduced{all[0]};
    for (int j = k + 1; j <= m + k; ++j) reduced.push_back(all[j]);
    const cxd rhs = pairing(reduced, {zeta, true}, p);
    return detail::scaled_dev(lhs, rhs);
  });

  // Reduction commutes with index-shifted steps: tracing the inserted modes
  // before or after the (shifted) interaction step gives the same pairing.
  run("reduction commutes with shifted steps", tol, [](Rng& g) {
    ModelParams p = random_admissible_params(g);
    const int m = g.uniform_int(1, 3);
    const int k = g.uniform_int(1, 3);
    const int l = g.uniform_int(1, m);
    const auto all = random_states(g, m + k + 1);
    const WeylVector zeta = random_label(g, m + 1);
    const WeylVector big = build_U_closed(l + k, m + k, p).U * embed(zeta, m + k);
    const cxd lhs = pairing(all, {big, true}, p);
    std::vector<ModeState> reduced{all[0]};
    for (int j = k + 1; j <= m + k; ++j) reduced.push_back(all[j]);
    const WeylVector small = build_U_closed(l, m, p).U * zeta;
    const cxd rhs = pairing(reduced, {small, true}, p);
    return detail::scaled_dev(lhs, rhs);
  });

  // Multi-step reduction telescopes into alternating embed/one-step factors.
  run("multi-step reduction telescopes", tol, [](Rng& g) {
    ModelParams p = random_admissible_params(g);
    const int m = g.uniform_int(1, 3);
    const int k = g.uniform_int(1, 3);
    const WeylVector zeta = random_label(g, m + 1);
    WeylVector route1 = embed(zeta, m + k);
    for (int j = k; j >= 1; --j) route1 = build_U_closed(j, m + k, p).U * route1;
    WeylVector route2 = zeta;
    for (int size = m + 1; size <= m + k; ++size)
      route2 = build_U_closed(1, size, p).U * embed(route2, size);
    const double label_dev = (route1 - route2).cwiseAbs().maxCoeff();
    const auto states = random_states(g, m + k + 1);
    const cxd lhs = pairing(states, {route1, true}, p);
    const cxd rhs = pairing(states, {route2, true}, p);
    return std::max(label_dev, detail::scaled_dev(lhs, rhs));
  });

  // Free rotation of every state factor matches rotating the label.
  run("free rotation of states matches label rotation", tol, [](Rng& g) {
    ModelParams p = random_admissible_params(g);
    const int m = g.uniform_int(0, 4);
    const auto states = random_states(g, m + 1);
    const WeylVector zeta = random_label(g, m + 1);
    std::vector<ModeState> advanced;
    for (const auto& s : states) advanced.push_back(free_advance(s, 1, p));
    const cxd lhs = pairing(advanced, {zeta, true}, p);
    const cxd rhs = pairing(states, {WeylVector(tau_rotation(p) * zeta), true}, p);
    return detail::scaled_dev(lhs, rhs);
  });

  // Free evolution commutes with the partial trace on two-mode products:
  // advancing then reducing equals reducing then advancing.
  run("free evolution commutes with partial trace", tol, [](Rng& g) {
    ModelParams p = random_admissible_params(g);
    const auto states = random_states(g, 2);
    const cxd theta = 0.6 * g.complex_normal();
    const cxd lhs =
        modified_mode_pairing(free_advance(states[0], 1, p), theta, p) *
        states[1].char_fn(0.0);
    WeylVector one(1);
    one(0) = theta;
    std::vector<ModeState> advanced{free_advance(states[0], 1, p),
                                    free_advance(states[1], 1, p)};
    const cxd rhs = pairing(advanced, {embed(one, 1), true}, p);
    return detail::scaled_dev(lhs, rhs);
  });

  // The one-step interaction map agrees with the reduced one-step evolution
  // computed by the characteristic-function route.
  run("one-step map matches reduced evolution", tol, [](Rng& g) {
    ModelParams p = random_admissible_params(g);
    const ModeState rho0 = random_state(g), rho1 = random_state(g);
    const cxd theta = 0.7 * g.complex_normal();
    const cxd lhs = one_step_T(rho0, rho1, p, theta);
    const cxd rhs = std::exp(0.25 * p.reservoir_coth() * std::norm(theta)) *
                    cavity_char_fn(p.tau, rho0, rho1, p, theta);
    return detail::scaled_dev(lhs, rhs);
  });

  // Interaction steps commute with the global free rotation.
  run("interaction steps commute with free rotation", tol, [](Rng& g) {
    ModelParams p = random_admissible_params(g);
    const int m = g.uniform_int(1, 4);
    const int l = g.uniform_int(1, m);
    const auto states = random_states(g, m + 1);
    const WeylVector zeta = random_label(g, m + 1);
    const Eigen::MatrixXcd U = build_U_closed(l, m, p).U;
    const cxd rot = tau_rotation(p);
    const cxd lhs = pairing(states, {WeylVector(U * (rot * zeta)), true}, p);
    const cxd rhs = pairing(states, {WeylVector(rot * (U * zeta)), true}, p);
    return detail::scaled_dev(lhs, rhs);
  });

  // One-step map commutes with the free rotation of its inputs.
  run("one-step map commutes with free rotation", tol, [](Rng& g) {
    ModelParams p = random_admissible_params(g);
    const ModeState rho0 = random_state(g), rho1 = random_state(g);
    const cxd theta = 0.7 * g.complex_normal();
    const cxd lhs = one_step_T(rho0, rho1, p, tau_rotation(p) * theta);
    const cxd rhs =
        one_step_T(free_advance(rho0, 1, p), free_advance(rho1, 1, p), p, theta);
    return detail::scaled_dev(lhs, rhs);
  });

  // One interaction step factorizes: interacting pair in front, free
  // rotation on every remaining mode.
  run("one step factorizes the spectator modes", tol, [](Rng& g) {
    ModelParams p = random_admissible_params(g);
    const int l = g.uniform_int(2, 5);
    const auto states = random_states(g, l + 1);
    const WeylVector zeta = random_label(g, l);
    const WeylVector lhs_label =
        build_U_closed(1, l, p).U * embed(zeta, l);
    const cxd lhs = pairing(states, {lhs_label, true}, p);
    cxd rhs = one_step_T(states[0], states[1], p, zeta(0));
    for (int j = 2; j <= l; ++j)
      rhs *= modified_mode_pairing(states[j], tau_rotation(p) * zeta(j - 1), p);
    return detail::scaled_dev(lhs, rhs);
  });

  // k = 1 multi-step map equals the one-step map.
  run("multi-step map at k=1 is the one-step map", tol, [](Rng& g) {
    ModelParams p = random_admissible_params(g);
    const ModeState rho0 = random_state(g), rho1 = random_state(g);
    const cxd theta = 0.7 * g.complex_normal();
    return std::abs(multi_step_T(rho0, rho1, 1, p, theta) -
                    one_step_T(rho0, rho1, p, theta));
  });

  // Recursion: k+1 steps equal one more step fed by the k-step map and the
  // freely advanced chain state.
  run("multi-step map satisfies the one-step recursion", tol, [](Rng& g) {
    ModelParams p = random_admissible_params(g);
    const ModeState rho0 = random_state(g), rho1 = random_state(g);
    const int k = g.uniform_int(1, 5);
    const cxd theta = 0.7 * g.complex_normal();
    const PropagatorBlocks b = propagator_blocks(p, p.tau);
    const cxd rot = tau_rotation(p);
    const cxd lhs = multi_step_T(rho0, rho1, k + 1, p, theta);
    const cxd rhs =
        multi_step_T(rho0, rho1, k, p, rot * b.gz() * theta) *
        modified_mode_pairing(rho1, tau_rotation(p, k) * rot * b.gw() * theta, p);
    return detail::scaled_dev(lhs, rhs);
  });

  // Multi-step map commutes with the free rotation of its inputs.
  run("multi-step map commutes with free rotation", tol, [](Rng& g) {
    ModelParams p = random_admissible_params(g);
    const ModeState rho0 = random_state(g), rho1 = random_state(g);
    const int k = g.uniform_int(1, 5);
    const cxd theta = 0.7 * g.complex_normal();
    const cxd lhs = multi_step_T(rho0, rho1, k, p, tau_rotation(p) * theta);
    const cxd rhs = multi_step_T(free_advance(rho0, 1, p), free_advance(rho1, 1, p),
                                 k, p, theta);
    return detail::scaled_dev(lhs, rhs);
  });

  // Window factorization: k steps then tracing the departed modes equals the
  // k-step cavity map times freely advanced spectators.
  run("window factorization after k steps", tol, [](Rng& g) {
    ModelParams p = random_admissible_params(g);
    const int m = g.uniform_int(0, 3);
    const int k = g.uniform_int(1, 3);
    const ModeState rho0 = random_state(g), rho1 = random_state(g);
    const WeylVector zeta = random_label(g, m + 1);
    WeylVector label = embed(zeta, m + k);
    for (int j = k; j >= 1; --j) label = build_U_closed(j, m + k, p).U * label;
    std::vector<ModeState> states{rho0};
    for (int j = 0; j < m + k; ++j) states.push_back(rho1);
    const cxd lhs = pairing(states, {label, true}, p);
    cxd rhs = multi_step_T(rho0, rho1, k, p, zeta(0));
    for (int j = 1; j <= m; ++j)
      rhs *= modified_mode_pairing(rho1, tau_rotation(p, k) * zeta(j), p);
    return detail::scaled_dev(lhs, rhs);
  });

  // Closed form of the multi-step map equals its recursive evaluation.
  run("multi-step closed form matches recursive route", tol, [](Rng& g) {
    ModelParams p = random_admissible_params(g);
    const ModeState rho0 = random_state(g), rho1 = random_state(g);
    const int k = g.uniform_int(2, 6);
    const cxd theta = 0.7 * g.complex_normal();
    const PropagatorBlocks b = propagator_blocks(p, p.tau);
    const cxd rot = tau_rotation(p);
    std::function<cxd(int, cxd)> rec = [&](int kk, cxd th) -> cxd {
      if (kk == 1) return one_step_T(rho0, rho1, p, th);
      return rec(kk - 1, rot * b.gz() * th) *
             modified_mode_pairing(rho1, tau_rotation(p, kk - 1) * rot * b.gw() * th,
                                   p);
    };
    return std::abs(multi_step_T(rho0, rho1, k, p, theta) - rec(k, theta));
  });

  // Evolution paired with a label supported on the leading modes reduces to
  // the smaller system exactly.
  run("evolution restricted to leading modes reduces exactly", tol, [](Rng& g) {
    ModelParams p = random_admissible_params(g);
    const int N = 5, k = 2;
    const auto states = random_states(g, N + 1);
    const WeylVector zeta = random_label(g, k + 1);
    WeylVector padded = WeylVector::Zero(N + 1);
    padded.head(k + 1) = zeta;
    const auto steps = first_m_steps(k);
    const cxd lhs = pairing(states, {propagate(padded, steps, p), true}, p);
    std::vector<ModeState> reduced(states.begin(), states.begin() + k + 1);
    const cxd rhs = pairing(reduced, {propagate(zeta, steps, p), true}, p);
    return detail::scaled_dev(lhs, rhs);
  });

  // Fixed point: one interacting step equals one free step on rho_*.
  run("fixed point satisfies the one-step relation", fixed_point_tol, [](Rng& g) {
    ModelParams p = random_admissible_params(g);
    const ModeState rho1 = random_state(g);
    const cxd theta = g.uniform(0.2, 1.5) * std::exp(cxd(0.0, g.uniform(0.0, 6.28)));
    const PropagatorBlocks b = propagator_blocks(p, p.tau);
    const cxd rot = tau_rotation(p);
    auto pstar = [&](cxd x) {
      return std::exp(0.25 * p.reservoir_coth() * std::norm(x)) *
             fixed_point(rho1, p, x);
    };
    const cxd lhs = pstar(rot * b.gz() * theta) *
                    modified_mode_pairing(rho1, rot * b.gw() * theta, p);
    const cxd rhs = pstar(rot * theta);
    return detail::scaled_dev(lhs, rhs);
  });

  return results;
}

}  // namespace cavichain

#endif  // CAVICHAIN_IDENTITIES_HPP
