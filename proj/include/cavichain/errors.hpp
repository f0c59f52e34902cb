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

#ifndef CAVICHAIN_ERRORS_HPP
#define CAVICHAIN_ERRORS_HPP

#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace cavichain {

/// Raised by validate_params; collects every violated admissibility condition.
class condition_violation : public std::runtime_error {
 public:
  explicit condition_violation(std::vector<std::string> violations)
      : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string msg = "parameter validation failed:";
    for (const auto& s : v) msg += "\n  - " + s;
    return msg;
  }
  std::vector<std::string> violations_;
};

class index_out_of_range : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

class size_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class length_mismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class bad_kind : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class non_convergent : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class budget_exceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class step_too_large : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cavichain

#endif  // CAVICHAIN_ERRORS_HPP
