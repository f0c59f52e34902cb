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

#ifndef CAVICHAIN_CAVICHAIN_HPP
#define CAVICHAIN_CAVICHAIN_HPP

#include "cavichain/errors.hpp"
#include "cavichain/fock.hpp"
#include "cavichain/identities.hpp"
#include "cavichain/model.hpp"
#include "cavichain/oracle_check.hpp"
#include "cavichain/propagator.hpp"
#include "cavichain/rng.hpp"
#include "cavichain/scenario.hpp"
#include "cavichain/states.hpp"
#include "cavichain/table.hpp"
#include "cavichain/window.hpp"

#endif  // CAVICHAIN_CAVICHAIN_HPP
