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

#include "qgas/common.hpp"
#include "qgas/spectral.hpp"

namespace qgas {

/// Orthonormal single-particle modes with occupation numbers.
struct ModeEnsemble {
  Statistics statistics = Statistics::fermion;
  CMat modes;        // columns
  RVec occupations;  // one per column
  /// False when some occupation was not within 1e-8 of an integer (thermal-like input).
  bool integral = true;

  double total() const { return occupations.sum(); }
  Eigen::Index dim() const { return modes.rows(); }
};

/// Validates orthonormality, statistics and (for integral ensembles) integer occupations.
ModeEnsemble make_ensemble(Statistics statistics, CMat modes, RVec occupations);

struct Reduction {
  StateSP sigma;
  ProjectorObservable projector;
  RVec occupations;
  double N = 0.0;
};

/// sigma = (1/N) sum_a n_a |psi_a><psi_a| together with the single-particle projector of M.
Reduction reduce(const ModeEnsemble& ensemble, const ProjectorObservable& m_modes);

/// Two-point matrix C_ab = tr[rho d_a^dagger d_b] of the modes held in the columns of `raw_modes`.
struct CorrelationMatrix {
  CMat C;
  Statistics statistics = Statistics::fermion;

  CorrelationMatrix(CMat c, Statistics s);
};

/// Rotates the raw modes so that the correlations become diagonal. Occupations are the
/// eigenvalues of C, in descending order.
ModeEnsemble diagonalize_correlations(const CorrelationMatrix& correlations, const CMat& raw_modes);

/// One-body density matrix varrho (reference basis) with <v|varrho|u> = tr[rho a^dagger(u) a(v)].
CMat one_body_density(const ModeEnsemble& ensemble);

/// |tr[rho(t)M] - tr[<rho>M]| / N for a counting observable M.
double delta_M(const ModeEnsemble& ensemble, const ProjectorObservable& m_modes, const SpectralSystem& sys,
               double t);

}  // namespace qgas
