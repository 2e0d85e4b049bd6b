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

#include <span>
#include <string>
#include <vector>

#include "qgas/common.hpp"

namespace qgas {

/// Relative tolerance (fraction of the spectral range) used to cluster energies and gaps.
inline constexpr double kDefaultGapTolerance = 1e-9;

/// Single-particle Hamiltonian in spectral form: ascending energies and the unitary
/// whose columns are the eigenvectors in the reference basis.
class SpectralSystem {
 public:
  SpectralSystem(RVec energies, CMat eigenvectors, std::string label = {});

  /// Diagonalizes a Hermitian matrix given in the reference basis.
  static SpectralSystem from_hamiltonian(const CMat& hamiltonian, std::string label = {});
  /// System that is already diagonal in the reference basis.
  static SpectralSystem from_energies(RVec energies, std::string label = {});

  Eigen::Index dim() const { return energies_.size(); }
  const RVec& energies() const { return energies_; }
  const CMat& eigenvectors() const { return eigenvectors_; }
  const std::string& label() const { return label_; }
  bool diagonal_basis() const { return diagonal_; }

  /// Energy range used to scale the clustering tolerances (1 for a flat spectrum).
  double spectral_range() const;

  CVec to_eigenbasis(const CVec& v) const;
  CMat to_eigenbasis(const CMat& op) const;  // V^dagger op V
  CMat from_eigenbasis(const CMat& op) const;

 private:
  RVec energies_;
  CMat eigenvectors_;
  std::string label_;
  bool diagonal_ = false;
};

/// Single-particle state: a pure vector or an orthonormal weighted ensemble.
class StateSP {
 public:
  enum class Kind { pure, mixed };

  static StateSP pure(CVec vector);
  static StateSP mixed(RVec weights, CMat vectors);

  Kind kind() const { return kind_; }
  Eigen::Index dim() const { return vectors_.rows(); }
  Eigen::Index components() const { return vectors_.cols(); }
  const RVec& weights() const { return weights_; }
  /// Component vectors as columns.
  const CMat& vectors() const { return vectors_; }
  CMat density_matrix() const;

 private:
  StateSP(Kind kind, RVec weights, CMat vectors);

  Kind kind_;
  RVec weights_;
  CMat vectors_;
};

/// P = sum_i |phi_i><phi_i| over orthonormal modes (columns of `modes`).
class ProjectorObservable {
 public:
  ProjectorObservable(Eigen::Index dim, CMat modes);

  static ProjectorObservable empty(Eigen::Index dim);
  static ProjectorObservable identity(Eigen::Index dim);
  /// Projector onto a subset of reference basis vectors.
  static ProjectorObservable basis_subset(Eigen::Index dim, std::span<const Eigen::Index> indices);

  Eigen::Index dim() const { return dim_; }
  Eigen::Index rank() const { return modes_.cols(); }
  const CMat& modes() const { return modes_; }
  CMat matrix() const;

 private:
  Eigen::Index dim_;
  CMat modes_;
};

/// Hermitian single-particle operator used as a measurement effect. Wraps either a
/// projector or a general matrix, such as a projector compressed onto a finite basis.
class Observable {
 public:
  explicit Observable(CMat matrix);
  Observable(const ProjectorObservable& projector);  // NOLINT: implicit by intent

  Eigen::Index dim() const { return matrix_.rows(); }
  const CMat& matrix() const { return matrix_; }
  double norm() const;  // operator norm

 private:
  CMat matrix_;
};

struct EnergyLevel {
  double energy = 0.0;
  Eigen::Index first = 0;  // index into the sorted energies
  Eigen::Index degeneracy = 0;
};

struct GapEntry {
  double gap = 0.0;
  int multiplicity = 0;
};

struct GapStructure {
  std::vector<EnergyLevel> levels;
  std::vector<GapEntry> gaps;  // ordered pairs of distinct levels, sorted by gap value
  int max_gap_degeneracy = 1;  // D_G
  int max_level_degeneracy = 1;  // n_d
  double tolerance = 0.0;  // absolute clustering tolerance that was used
  double max_gap = 0.0;
};

/// Clusters the sorted energies into levels with single linkage at eps * range.
std::vector<EnergyLevel> energy_levels(const SpectralSystem& sys, double eps_gap = kDefaultGapTolerance);

GapStructure gap_structure(const SpectralSystem& sys, double eps_gap = kDefaultGapTolerance);

StateSP evolve(const SpectralSystem& sys, const StateSP& state, double t);

double expectation_P(const StateSP& state, const ProjectorObservable& projector);
double expectation(const StateSP& state, const Observable& observable);

/// Dephased density matrix: coherences between distinct levels removed.
CMat time_average_state(const SpectralSystem& sys, const StateSP& state, double eps_gap = kDefaultGapTolerance);

/// |tr[sigma(t) A] - tr[<sigma> A]|.
double distinguishability(const SpectralSystem& sys, const StateSP& state, const Observable& observable, double t,
                          double eps_gap = kDefaultGapTolerance);

/// tr[rho(t) A] for fixed rho(0) and A, stored as sum_ab w_ab exp(-i (E_a - E_b) t)
/// in the energy eigenbasis. `density` need not have unit trace and `op` need not be
/// Hermitian, which covers one-body correlation matrices and hopping operators.
class ExpectationSeries {
 public:
  ExpectationSeries(const SpectralSystem& sys, const CMat& density, const CMat& op,
                    double eps_gap = kDefaultGapTolerance);
  ExpectationSeries(const SpectralSystem& sys, const StateSP& state, const Observable& observable,
                    double eps_gap = kDefaultGapTolerance);

  Complex value(double t) const;
  /// Infinite-time average (the dephased expectation).
  Complex stationary() const { return stationary_; }
  Complex initial() const { return initial_; }
  /// value(t) for many t at once.
  std::vector<Complex> values(std::span<const double> times) const;
  /// |value(t) - stationary()| on a grid.
  std::vector<double> deviations(std::span<const double> times) const;

 private:
  RVec energies_;
  CMat weights_;  // coherences only; same-level pairs moved into stationary_
  Complex stationary_{};
  Complex initial_{};
};

/// Uniform grid of n points on [t0, t1], both ends included.
std::vector<double> uniform_grid(double t0, double t1, std::size_t n);

/// Smallest grid size that samples the fastest oscillation 8 times per period on [0, T].
std::size_t min_average_samples(double T, double max_gap);

/// Trapezoid mean of uniformly sampled values (endpoints included).
double trapezoid_mean(std::span<const double> values);

struct DensityOfStates {
  RVec edges;    // n_bins + 1
  RVec heights;  // states per unit energy; sum(heights) * width == d
  double bin_width = 0.0;
  double n_max = 0.0;
};

DensityOfStates density_of_states(const SpectralSystem& sys, int n_bins);
DensityOfStates density_of_states(std::span<const double> energies, int n_bins, double lo, double hi);

}  // namespace qgas
