// Copyright 2026 The multitest Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MULTITEST_ERROR_HPP_
#define MULTITEST_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace multitest {

// Invalid caller input: bad probabilities, mismatched lengths, schema
// violations. The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of a function (p outside (0,1),
// zero effect size, df = 0, ...). Also exit code 2.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical routine could not produce a result (non-PSD factorization,
// failed root bracketing). The CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace multitest

#endif  // MULTITEST_ERROR_HPP_
