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

#include <vector>

#include "qgas/common.hpp"
#include "qgas/spectral.hpp"

namespace qgas {

enum class Geometry { ring, chain };

/// H = (1/2) sum_i (|i><i+1| + |i+1><i|); one state per site unless s says otherwise.
struct HoppingModel {
  int V = 0;
  Geometry geometry = Geometry::ring;
  CMat h;
  int s = 1;

  static HoppingModel ring(int V);
  static HoppingModel chain(int V);

  SpectralSystem spectrum() const;
  /// e^{-iht}
  CMat propagator(double t) const;
};

inline constexpr double kDefaultP0 = std::numbers::pi / 20.0;

/// Majorana covariance Gamma_ij = (i/2) tr[rho [c_i, c_j]] with c_{2k} = a_k + a_k^dagger and
/// c_{2k+1} = -i (a_k - a_k^dagger), k = 0..V-1.
class CovarianceMatrix {
 public:
  explicit CovarianceMatrix(RMat gamma);

  /// Number-conserving state with C_jk = tr[rho a_j^dagger a_k].
  static CovarianceMatrix from_correlations(const CMat& C);

  const RMat& gamma() const { return gamma_; }
  int modes() const { return static_cast<int>(gamma_.rows() / 2); }
  /// Inverse of from_correlations; meaningful when anomalous_defect() vanishes.
  CMat correlations() const;
  /// Largest entry of the pairing part of Gamma.
  double anomalous_defect() const;
  /// Largest singular value of Gamma.
  double max_singular_value() const;

 private:
  RMat gamma_;
};

/// Orthogonal Majorana rotation induced by the mode unitary a_j -> sum_k U_jk a_k.
RMat majorana_rotation(const CMat& U);

CovarianceMatrix evolve_covariance(const HoppingModel& model, const CovarianceMatrix& cov, double t);

/// tr[rho c_{r_1} ... c_{r_2K}] for strictly increasing indices.
Complex wick_expectation(const CovarianceMatrix& cov, const std::vector<int>& indices);

struct PhaseCorrelator {
  Complex direct;      // tr[rho(t) a_x^dagger a_y] from Gamma(t)
  Complex decomposed;  // from the four single-mode densities
};

PhaseCorrelator phase_correlator(const HoppingModel& model, const CovarianceMatrix& cov0, int x, int y, double t);

struct TruncatedDos {
  double n_max = 0.0;              // L / (pi sin p0)
  double excluded_fraction = 0.0;  // 2 p0 / pi
  double excluded_formula = 0.0;   // 2 p0 L / pi
  double excluded_direct = 0.0;    // eigenvalues with |E| > cos p0, boundary states counted half
  double histogram_n_max = 0.0;    // largest bin inside the kept band
};

TruncatedDos truncated_dos(const HoppingModel& model, double p0 = kDefaultP0);

/// L / (pi sqrt(1 - E^2))
double ring_density(int L, double E);

struct LocalBoundReport {
  double lhs = 0.0;
  double rhs = 0.0;    // includes the truncation slack
  double slack = 0.0;  // 2 p0 l / pi
  double n_max = 0.0;
  int D_G = 0;
  int n_d = 0;
  int d = 0;
  double m = 0.0;        // largest |coefficient|
  double m_prime = 0.0;  // sum of |coefficients|
  double m_2K = 0.0;     // m 2^K
  bool ok = false;
};

/// Single mode phi localized on l sites; M = b^dagger(phi) b(phi).
LocalBoundReport single_mode_bound_check(const HoppingModel& model, const CovarianceMatrix& cov0, const CVec& phi,
                                         int l, double T, double p0 = kDefaultP0);

struct MajoranaTerm {
  Complex coefficient;
  std::vector<int> indices;  // strictly increasing, at most four
};

/// M = sum_R m_R c^R acting on l sites.
LocalBoundReport multi_mode_bound_check(const HoppingModel& model, const CovarianceMatrix& cov0,
                                        const std::vector<MajoranaTerm>& M, int l, double T,
                                        double p0 = kDefaultP0);

/// Root-mean-square of |C_xy(t) - <C_xy>| over [0, T].
double correlator_fluctuation(const HoppingModel& model, const CovarianceMatrix& cov0, int x, int y, double T);

/// Occupied even sites.
CovarianceMatrix alternating_state(int V);

}  // namespace qgas
