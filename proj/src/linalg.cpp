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

#include "multitest/linalg.hpp"

#include <cmath>
#include <sstream>

#include "multitest/error.hpp"

namespace multitest {
namespace {

constexpr double kNegativeTolerance = 1e-10;
constexpr double kRidgeThreshold = 1e-8;
constexpr double kRidge = 1e-8;

void check_symmetric(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw ValidationError("matrix must be square and nonempty");
  }
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      if (!(std::fabs(a(i, j) - a(j, i)) <= 1e-12)) {
        std::ostringstream os;
        os << "matrix is not symmetric at (" << i << ", " << j << ")";
        throw ValidationError(os.str());
      }
    }
  }
}

struct Factorization {
  Matrix lower;
  Eigen::Index failed_pivot = -1;
  double failed_value = 0.0;
};

Factorization factor(const Matrix& a) {
  const Eigen::Index n = a.rows();
  Factorization f{Matrix::Zero(n, n)};
  Matrix& l = f.lower;
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = a(j, j) - l.row(j).head(j).squaredNorm();
    if (d < -kNegativeTolerance) {
      f.failed_pivot = j;
      f.failed_value = d;
      return f;
    }
    d = std::sqrt(std::max(d, 0.0));
    l(j, j) = d;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double s = a(i, j) - l.row(i).head(j).dot(l.row(j).head(j));
      l(i, j) = d > 0.0 ? s / d : 0.0;
    }
  }
  return f;
}

}  // namespace

Matrix realize(const CorrelationSpec& spec, int m) {
  if (m < 1) throw ValidationError("correlation dimension must be >= 1");
  Matrix r = Matrix::Identity(m, m);
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Equicorrelated>) {
          if (!(s.rho >= 0.0 && s.rho < 1.0)) {
            throw ValidationError("equicorrelated rho must lie in [0, 1)");
          }
          r.setConstant(s.rho);
          r.diagonal().setOnes();
        } else if constexpr (std::is_same_v<T, BlockCorrelation>) {
          if (s.sizes.empty()) throw ValidationError("block sizes empty");
          if (s.rhos.size() != 1 && s.rhos.size() != s.sizes.size()) {
            throw ValidationError(
                "block rhos must have one entry or one per block");
          }
          int offset = 0;
          for (std::size_t b = 0; b < s.sizes.size(); ++b) {
            const int size = s.sizes[b];
            const double rho = s.rhos.size() == 1 ? s.rhos[0] : s.rhos[b];
            if (size < 1) throw ValidationError("block size must be >= 1");
            if (!(rho > -1.0 && rho < 1.0)) {
              throw ValidationError("block rho must lie in (-1, 1)");
            }
            if (offset + size > m) {
              throw ValidationError("block sizes exceed metric count");
            }
            r.block(offset, offset, size, size).setConstant(rho);
            offset += size;
          }
          if (offset != m) {
            throw ValidationError("block sizes must sum to metric count");
          }
          r.diagonal().setOnes();
        } else if constexpr (std::is_same_v<T, ExplicitCorrelation>) {
          if (s.matrix.rows() != m || s.matrix.cols() != m) {
            throw ValidationError("explicit correlation has wrong dimension");
          }
          check_symmetric(s.matrix);
          for (int i = 0; i < m; ++i) {
            if (std::fabs(s.matrix(i, i) - 1.0) > 1e-12) {
              throw ValidationError("correlation diagonal must be 1");
            }
          }
          r = s.matrix;
        }
      },
      spec);
  return r;
}

std::string describe(const CorrelationSpec& spec) {
  std::ostringstream os;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Independent>) {
          os << "independent";
        } else if constexpr (std::is_same_v<T, Equicorrelated>) {
          os << "equicorrelated(" << s.rho << ")";
        } else if constexpr (std::is_same_v<T, BlockCorrelation>) {
          os << "block(";
          for (std::size_t b = 0; b < s.sizes.size(); ++b) {
            const double rho = s.rhos.size() == 1 ? s.rhos[0] : s.rhos[b];
            os << (b ? "+" : "") << s.sizes[b] << "@" << rho;
          }
          os << ")";
        } else {
          os << "explicit(" << s.matrix.rows() << "x" << s.matrix.cols()
             << ")";
        }
      },
      spec);
  return os.str();
}

Vector symmetric_eigenvalues(const Matrix& a) {
  check_symmetric(a);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericError("eigenvalue decomposition did not converge");
  }
  return solver.eigenvalues();
}

CholeskyFactor cholesky(const Matrix& a) {
  check_symmetric(a);
  CholeskyFactor out;
  Factorization f = factor(a);
  if (f.failed_pivot >= 0) {
    std::ostringstream os;
    os << "matrix is not positive semi-definite: pivot " << f.failed_pivot
       << " = " << f.failed_value;
    throw NumericError(os.str());
  }
  const double min_eig = symmetric_eigenvalues(a)(0);
  if (min_eig < -kNegativeTolerance) {
    std::ostringstream os;
    os << "matrix is not positive semi-definite: min eigenvalue " << min_eig;
    throw NumericError(os.str());
  }
  if (min_eig < kRidgeThreshold) {
    Matrix repaired = a;
    repaired.diagonal().array() += kRidge;
    f = factor(repaired);
    out.ridge_repaired = true;
    std::ostringstream os;
    os << "near-singular matrix (min eigenvalue " << min_eig
       << "); added " << kRidge << " to the diagonal";
    out.warnings.push_back(os.str());
  }
  out.lower = std::move(f.lower);
  return out;
}

Vector mvn_sample(const Vector& mean, const Matrix& lower, RngStream& rng) {
  if (lower.rows() != lower.cols() || mean.size() != lower.rows()) {
    throw ValidationError("mvn_sample: mean and factor dimensions differ");
  }
  Vector e(mean.size());
  Vector out(mean.size());
  mvn_sample_into(lower, rng, e, out);
  return out + mean;
}

void mvn_sample_into(const Matrix& lower, RngStream& rng, Vector& scratch,
                     Vector& out) {
  const Eigen::Index n = lower.rows();
  for (Eigen::Index i = 0; i < n; ++i) scratch(i) = rng.normal();
  out.noalias() = lower.triangularView<Eigen::Lower>() * scratch;
}

}  // namespace multitest
