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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qgas/bridge.hpp"
#include "qgas/common.hpp"
#include "qgas/spectral.hpp"

namespace qgas {

inline constexpr Eigen::Index kFockDimCap = 4096;

/// Occupation-number basis over m modes. Bosons are truncated at n_max_per_mode per mode;
/// a non-negative max_total additionally keeps only states with at most that many particles.
/// Mode order is the reference-basis index order; fermion signs count occupied modes to the left.
class FockSpace {
 public:
  FockSpace(Statistics statistics, int modes, int n_max_per_mode = 4, int max_total = -1);

  Statistics statistics() const { return statistics_; }
  int modes() const { return modes_; }
  int n_max_per_mode() const { return n_max_; }
  int max_total() const { return max_total_; }
  Eigen::Index dim() const { return static_cast<Eigen::Index>(basis_.size()); }
  const std::vector<std::vector<int>>& basis() const { return basis_; }
  /// -1 when the occupation list is not part of the basis.
  Eigen::Index index_of(const std::vector<int>& occupations) const;

  const RMat& annihilation(int mode) const;
  RMat creation(int mode) const { return annihilation(mode).transpose(); }
  /// a(v) = sum_i conj(v_i) a_i
  CMat annihilation(const CVec& v) const;
  /// a^dagger(v) = sum_i v_i a_i^dagger
  CMat creation(const CVec& v) const;
  /// sum_jk A_jk a_j^dagger a_k
  CMat one_body(const CMat& A) const;
  /// sum_i b_i^dagger b_i over the modes of the projector.
  CMat counting_operator(const ProjectorObservable& projector) const;
  CMat number_operator() const;
  /// Majorana operators c_{2k} = a_k + a_k^dagger, c_{2k+1} = -i (a_k - a_k^dagger) (0-based).
  CMat majorana(int index) const;

  CVec vacuum() const;
  /// prod_a (a^dagger(psi_a))^{n_a} |0>, normalized. Requires integer occupations and
  /// enough room in the truncated space.
  CVec product_state(const ModeEnsemble& ensemble) const;

 private:
  Statistics statistics_;
  int modes_;
  int n_max_;
  int max_total_;
  std::vector<std::vector<int>> basis_;
  std::map<std::vector<int>, Eigen::Index> index_;
  std::vector<RMat> annihilators_;
};

struct ManyBodyOperator {
  CMat matrix;
  std::string descriptor;
};

/// Second-quantized single-particle Hamiltonian.
ManyBodyOperator build_hamiltonian(const FockSpace& space, const SpectralSystem& sys);

/// Exact propagation by diagonalizing the many-body Hamiltonian once.
class ManyBodyEvolution {
 public:
  explicit ManyBodyEvolution(const ManyBodyOperator& hamiltonian);

  CVec evolve(const CVec& psi, double t) const;
  CMat evolve(const CMat& rho, double t) const;
  double expectation(const CVec& psi, const CMat& op, double t) const;
  double expectation(const CMat& rho, const CMat& op, double t) const;
  /// Infinite-time average of tr[rho(t) op] by dephasing in the many-body eigenbasis.
  double time_average(const CMat& rho, const CMat& op, double eps_gap = kDefaultGapTolerance) const;

  const RVec& energies() const { return energies_; }

 private:
  RVec energies_;
  CMat vectors_;
};

/// tr[e^{-iHt} rho0 e^{iHt} M]
double evolve_expectation(const FockSpace& space, const ManyBodyOperator& hamiltonian, const CMat& rho0,
                          const CMat& M, double t);

/// Reconstructs the modes of a product state a^dagger_1 ... a^dagger_N |0> (fermions) or
/// a product of bosonic mode powers. Empty when psi is not of that form to 1e-10 fidelity.
std::optional<ModeEnsemble> product_state_modes(const FockSpace& space, const CVec& psi);

struct FluctuationReport {
  double mean = 0.0;           // tr[rho M]
  double second_moment = 0.0;  // tr[rho M^2]
  double variance = 0.0;
  double bound = 0.0;          // right-hand side of the second-moment inequality
  bool bound_ok = false;
};

/// Second-moment inequality for a counting observable on a product state.
FluctuationReport fluctuation_check(const FockSpace& space, const CVec& psi, const ProjectorObservable& m_modes);
/// Same check for the product state built from known modes. Bosonic states with repeated
/// occupations cannot be recovered from their correlations alone, so this form covers them.
FluctuationReport fluctuation_check(const FockSpace& space, const ModeEnsemble& ensemble,
                                    const ProjectorObservable& m_modes);

struct TimeFluctuationReport {
  double mean_sigma = 0.0;  // time-averaged standard deviation of M
  double standard_error = 0.0;
  double bound = 0.0;       // sqrt(N)
  std::size_t samples = 0;
  bool ok = false;
};

/// Monte Carlo time average of sigma_M(rho(t)) over uniform random times in [0, t_span].
/// t_span <= 0 picks 1000 periods of the smallest single-particle level spacing.
TimeFluctuationReport time_avg_fluctuation(const FockSpace& space, const SpectralSystem& sys, const CVec& psi0,
                                           const ProjectorObservable& m_modes, std::size_t samples,
                                           std::uint64_t seed, double t_span = 0.0);
TimeFluctuationReport time_avg_fluctuation(const FockSpace& space, const SpectralSystem& sys,
                                           const ModeEnsemble& ensemble, const ProjectorObservable& m_modes,
                                           std::size_t samples, std::uint64_t seed, double t_span = 0.0);

}  // namespace qgas
