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

#ifndef MULTITEST_LINALG_HPP_
#define MULTITEST_LINALG_HPP_

#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "multitest/rng.hpp"

namespace multitest {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Correlation structures used by the simulation and corpus generators.
struct Independent {};
struct Equicorrelated {
  double rho = 0.0;
};
// Consecutive diagonal blocks. Block b has within-block correlation
// rhos[b]; different blocks are uncorrelated. A single entry in `rhos`
// applies to every block. The 4-correlated + 4-independent structure is
// sizes {4, 4}, rhos {0.95, 0.0}.
struct BlockCorrelation {
  std::vector<int> sizes;
  std::vector<double> rhos;
};
struct ExplicitCorrelation {
  Matrix matrix;
};
using CorrelationSpec =
    std::variant<Independent, Equicorrelated, BlockCorrelation,
                 ExplicitCorrelation>;

// Builds the m x m correlation matrix. Throws ValidationError when the
// spec does not describe an m-dimensional unit-diagonal symmetric matrix.
Matrix realize(const CorrelationSpec& spec, int m);

std::string describe(const CorrelationSpec& spec);

struct CholeskyFactor {
  Matrix lower;
  // True when a near-singular input had 1e-8 added to its diagonal.
  bool ridge_repaired = false;
  std::vector<std::string> warnings;
};

// Lower-triangular L with L * L^T == a. Inputs whose smallest eigenvalue
// lies in [-1e-10, 1e-8] are ridge-repaired; anything more negative throws
// NumericError naming the first failing pivot.
CholeskyFactor cholesky(const Matrix& a);

// Eigenvalues of a symmetric matrix, ascending.
Vector symmetric_eigenvalues(const Matrix& a);

// mean + L * e with e ~ N(0, I). Throws ValidationError on size mismatch.
Vector mvn_sample(const Vector& mean, const Matrix& lower, RngStream& rng);

// Writes L * e into `out` (already sized) using `scratch` for e.
void mvn_sample_into(const Matrix& lower, RngStream& rng, Vector& scratch,
                     Vector& out);

}  // namespace multitest

#endif  // MULTITEST_LINALG_HPP_
