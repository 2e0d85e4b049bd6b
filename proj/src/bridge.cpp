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

#include "qgas/bridge.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace qgas {

namespace {

constexpr double kOrthoTol = 1e-10;
constexpr double kRoundTol = 1e-8;

}  // namespace

ModeEnsemble make_ensemble(Statistics statistics, CMat modes, RVec occupations) {
  detail::require(modes.cols() == occupations.size(), "ModeEnsemble: one occupation per mode required");
  detail::require(detail::orthonormality_defect(modes) <= kOrthoTol,
                  "ModeEnsemble: mode vectors are not orthonormal to 1e-10");
  ModeEnsemble e{statistics, std::move(modes), std::move(occupations), true};
  for (Eigen::Index a = 0; a < e.occupations.size(); ++a) {
    const double n = e.occupations[a];
    detail::require(n >= -kRoundTol, "ModeEnsemble: negative occupation");
    if (statistics == Statistics::fermion)
      detail::require(n <= 1.0 + kRoundTol, "ModeEnsemble: fermion occupation exceeds 1");
    if (std::abs(n - std::round(n)) > kRoundTol) e.integral = false;
  }
  return e;
}

Reduction reduce(const ModeEnsemble& ensemble, const ProjectorObservable& m_modes) {
  detail::require(ensemble.dim() == m_modes.dim(), "reduce: ensemble and observable live in different spaces");
  const double N = ensemble.total();
  detail::require(N > 0.0, "reduce: ensemble holds no particles");

  std::vector<Eigen::Index> used;
  for (Eigen::Index a = 0; a < ensemble.occupations.size(); ++a)
    if (ensemble.occupations[a] > 0.0) used.push_back(a);
  RVec weights(static_cast<Eigen::Index>(used.size()));
  CMat vectors(ensemble.dim(), static_cast<Eigen::Index>(used.size()));
  for (std::size_t k = 0; k < used.size(); ++k) {
    weights[static_cast<Eigen::Index>(k)] = ensemble.occupations[used[k]] / N;
    vectors.col(static_cast<Eigen::Index>(k)) = ensemble.modes.col(used[k]);
  }
  weights /= weights.sum();
  return {StateSP::mixed(std::move(weights), std::move(vectors)), m_modes, ensemble.occupations, N};
}

CorrelationMatrix::CorrelationMatrix(CMat c, Statistics s) : C(std::move(c)), statistics(s) {
  detail::require(C.rows() == C.cols(), "CorrelationMatrix: matrix must be square");
  detail::require((C - C.adjoint()).cwiseAbs().maxCoeff() <= 1e-10, "CorrelationMatrix: matrix is not Hermitian");
}

ModeEnsemble diagonalize_correlations(const CorrelationMatrix& correlations, const CMat& raw_modes) {
  const CMat& C = correlations.C;
  detail::require(raw_modes.cols() == C.rows(), "diagonalize_correlations: one raw mode per row of C required");
  detail::require(detail::orthonormality_defect(raw_modes) <= kOrthoTol,
                  "diagonalize_correlations: raw modes are not orthonormal");

  // varrho = R C^T R^dagger in the reference basis; rotating the raw modes by the
  // eigenvectors of C^T diagonalizes the two-point function.
  Eigen::SelfAdjointEigenSolver<CMat> solver(CMat(C.transpose()));
  if (solver.info() != Eigen::Success) throw NumericalError("diagonalize_correlations: eigensolver failed");
  const RVec& lambda = solver.eigenvalues();
  for (Eigen::Index a = 0; a < lambda.size(); ++a) {
    if (lambda[a] < -kRoundTol)
      throw InputError("diagonalize_correlations: negative occupation " + std::to_string(lambda[a]));
    if (correlations.statistics == Statistics::fermion && lambda[a] > 1.0 + kRoundTol)
      throw InputError("diagonalize_correlations: fermion occupation above 1: " + std::to_string(lambda[a]));
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(lambda.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return lambda[i] > lambda[j]; });

  const CMat rotated = raw_modes * solver.eigenvectors();
  CMat modes(raw_modes.rows(), lambda.size());
  RVec occ(lambda.size());
  bool integral = true;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto col = static_cast<Eigen::Index>(k);
    modes.col(col) = rotated.col(order[k]);
    double n = std::max(0.0, lambda[order[k]]);
    if (std::abs(n - std::round(n)) <= kRoundTol)
      n = std::round(n);
    else
      integral = false;
    occ[col] = n;
  }
  ModeEnsemble out{correlations.statistics, std::move(modes), std::move(occ), integral};
  return out;
}

CMat one_body_density(const ModeEnsemble& ensemble) {
  return ensemble.modes * ensemble.occupations.cast<Complex>().asDiagonal() * ensemble.modes.adjoint();
}

double delta_M(const ModeEnsemble& ensemble, const ProjectorObservable& m_modes, const SpectralSystem& sys,
               double t) {
  const Reduction r = reduce(ensemble, m_modes);
  return distinguishability(sys, r.sigma, Observable(r.projector), t);
}

}  // namespace qgas
