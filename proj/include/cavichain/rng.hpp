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

#ifndef CAVICHAIN_RNG_HPP
#define CAVICHAIN_RNG_HPP

#include <cmath>
#include <random>

#include "cavichain/model.hpp"

namespace cavichain {

/// Seeded generator with explicit sampling formulas, so identical seeds give
/// identical streams on every standard library.
class Rng {
 public:
  explicit Rng(unsigned long long seed) : engine_(seed) {}

  double uniform() {
    return double(engine_() >> 11) * 0x1.0p-53;  // [0, 1)
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  int uniform_int(int a, int b) {  // inclusive range
    return a + int(double(b - a + 1) * uniform());
  }

  double normal() {  // Box-Muller
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  cxd complex_normal() { return {normal(), normal()}; }

 private:
  std::mt19937_64 engine_;
};

/// Draws an admissible parameter set in moderate ranges. Every draw passes
/// validate_params.
inline ModelParams random_admissible_params(Rng& rng) {
  const double E = rng.uniform(0.6, 1.6);
  const double epsilon = rng.uniform(0.6, 1.6);
  const double eta = rng.uniform(0.0, 0.9) * std::sqrt(E * epsilon);
  const double tau = rng.uniform(0.5, 1.5);
  const double sm = rng.uniform(0.1, 0.4);
  const double sp = rng.uniform(0.0, 0.8) * sm;
  return validate_params(E, epsilon, eta, tau, sm, sp);
}

}  // namespace cavichain

#endif  // CAVICHAIN_RNG_HPP
