/*
 * Copyright 2026 The qgas Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "qgas/pfaffian.hpp"

#include <vector>

#include <Eigen/Eigenvalues>

namespace qgas {

namespace {

constexpr double kSkewTol = 1e-10;

void check_skew(const RMat& A, const char* who) {
  if (A.rows() != A.cols()) throw InputError(std::string(who) + ": matrix must be square");
  if (A.size() == 0) return;
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  if ((A + A.transpose()).cwiseAbs().maxCoeff() > kSkewTol * scale)
    throw InputError(std::string(who) + ": matrix is not antisymmetric to 1e-10");
}

}  // namespace

double pfaffian(const RMat& input) {
  check_skew(input, "pfaffian");
  const Eigen::Index n = input.rows();
  if (n == 0) return 1.0;
  if (n % 2 == 1) return 0.0;
  RMat A = 0.5 * (input - input.transpose());
  double pf = 1.0;
  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const Eigen::Index m = n - k - 1;
    RVec x = A.col(k).tail(m);
    const double sigma = x.tail(m - 1).squaredNorm();
    double alpha = x[0];
    if (sigma != 0.0) {
      const double norm_x = std::sqrt(x[0] * x[0] + sigma);
      RVec v = x;
      if (x[0] <= 0.0) {
        v[0] -= norm_x;
        alpha = norm_x;
      } else {
        v[0] += norm_x;
        alpha = -norm_x;
      }
      v.normalize();
      // (I - 2vv^T) applied on both sides of the trailing block; a reflection has det -1.
      auto block = A.bottomRightCorner(m, m);
      const RVec w = 2.0 * (block * v);
      block += v * w.transpose() - w * v.transpose();
      pf = -pf;
    }
    A(k + 1, k) = alpha;
    A(k, k + 1) = -alpha;
    A.col(k).tail(m - 1).setZero();
    A.row(k).tail(m - 1).setZero();
    if (k % 2 == 0) pf *= -alpha;
  }
  return pf * A(n - 2, n - 1);
}

double pfaffian_cofactor(const RMat& A) {
  check_skew(A, "pfaffian_cofactor");
  const Eigen::Index n = A.rows();
  if (n > 8) throw InputError("pfaffian_cofactor: dimension above 8");
  if (n == 0) return 1.0;
  if (n % 2 == 1) return 0.0;
  double pf = 0.0;
  for (Eigen::Index j = 1; j < n; ++j) {
    if (A(0, j) == 0.0) continue;
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 1; i < n; ++i)
      if (i != j) keep.push_back(i);
    RMat minor(n - 2, n - 2);
    for (std::size_t r = 0; r < keep.size(); ++r)
      for (std::size_t c = 0; c < keep.size(); ++c)
        minor(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = A(keep[r], keep[c]);
    pf += ((j % 2 == 1) ? 1.0 : -1.0) * A(0, j) * pfaffian_cofactor(minor);
  }
  return pf;
}

RMat BlockCanonicalForm::reconstruct() const {
  const Eigen::Index n = O.rows();
  RMat blocks = RMat::Zero(n, n);
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    blocks(2 * i, 2 * i + 1) = lambda[i];
    blocks(2 * i + 1, 2 * i) = -lambda[i];
  }
  return O * blocks * O.transpose();
}

BlockCanonicalForm block_canonical_form(const RMat& A) {
  check_skew(A, "block_canonical_form");
  const Eigen::Index n = A.rows();
  if (n % 2 == 1) throw InputError("block_canonical_form: dimension must be even");
  Eigen::RealSchur<RMat> schur(RMat(0.5 * (A - A.transpose())));
  if (schur.info() != Eigen::Success) throw NumericalError("block_canonical_form: Schur decomposition failed");
  const RMat& T = schur.matrixT();
  const RMat& U = schur.matrixU();
  const double tiny = 1e-13 * std::max(1.0, A.cwiseAbs().maxCoeff());

  BlockCanonicalForm out;
  out.O.resize(n, n);
  out.lambda.resize(n / 2);
  std::vector<Eigen::Index> zeros;
  Eigen::Index col = 0;
  Eigen::Index block = 0;
  for (Eigen::Index i = 0; i < n;) {
    if (i + 1 < n && std::abs(T(i + 1, i)) > tiny) {
      out.O.col(col++) = U.col(i);
      out.O.col(col++) = U.col(i + 1);
      out.lambda[block++] = 0.5 * (T(i, i + 1) - T(i + 1, i));
      i += 2;
    } else {
      zeros.push_back(i);
      ++i;
    }
  }
  for (std::size_t z = 0; z + 1 < zeros.size(); z += 2) {
    out.O.col(col++) = U.col(zeros[z]);
    out.O.col(col++) = U.col(zeros[z + 1]);
    out.lambda[block++] = 0.0;
  }
  if (col != n) throw NumericalError("block_canonical_form: unpaired zero eigenvalue");
  return out;
}

}  // namespace qgas
