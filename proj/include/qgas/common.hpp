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

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qgas {

using Complex = std::complex<double>;
using RVec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;

inline constexpr Complex kI{0.0, 1.0};

/// Constants of the Gaussian-weighted time-average bound.
inline const double kC1 = std::numbers::e * std::sqrt(std::numbers::pi) / 2.0;
inline const double kC2 = 4.0 * std::sqrt(std::numbers::pi);

enum class Statistics { fermion, boson };

inline const char* to_string(Statistics s) { return s == Statistics::fermion ? "fermion" : "boson"; }

/// Malformed arguments: dimension mismatches, non-orthonormal modes, bad ranges.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A theorem or algorithm hypothesis does not hold for the given inputs.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Quadrature or iteration failed to converge.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw InputError(what);
}

/// Max |<v_i|v_j> - delta_ij| over the columns of `vectors`.
inline double orthonormality_defect(const CMat& vectors) {
  if (vectors.cols() == 0) return 0.0;
  const CMat gram = vectors.adjoint() * vectors;
  return (gram - CMat::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

}  // namespace detail
}  // namespace qgas
