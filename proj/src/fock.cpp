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

#include "qgas/fock.hpp"

#include <limits>
#include <random>

namespace qgas {

namespace {

void enumerate(int mode, int modes, int n_max, int remaining, std::vector<int>& current,
               std::vector<std::vector<int>>& out) {
  if (mode == modes) {
    out.push_back(current);
    return;
  }
  const int top = remaining < 0 ? n_max : std::min(n_max, remaining);
  for (int n = 0; n <= top; ++n) {
    current[static_cast<std::size_t>(mode)] = n;
    enumerate(mode + 1, modes, n_max, remaining < 0 ? -1 : remaining - n, current, out);
  }
  current[static_cast<std::size_t>(mode)] = 0;
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

FockSpace::FockSpace(Statistics statistics, int modes, int n_max_per_mode, int max_total)
    : statistics_(statistics), modes_(modes), n_max_(statistics == Statistics::fermion ? 1 : n_max_per_mode),
      max_total_(max_total) {
  detail::require(modes >= 1, "FockSpace: need at least one mode");
  detail::require(n_max_ >= 1, "FockSpace: per-mode cutoff must be at least 1");

  // Dimension check before enumerating.
  double estimate = std::pow(static_cast<double>(n_max_ + 1), modes);
  if (max_total_ >= 0) {
    // Binomial(m + N, N) bounds the number-restricted space.
    double b = 1.0;
    for (int k = 1; k <= max_total_; ++k) b = b * (modes + k) / k;
    estimate = std::min(estimate, b);
  }
  if (estimate > static_cast<double>(kFockDimCap))
    throw InputError("FockSpace: dimension " + std::to_string(static_cast<long long>(estimate)) +
                     " exceeds the cap of " + std::to_string(kFockDimCap));

  std::vector<int> current(static_cast<std::size_t>(modes), 0);
  enumerate(0, modes, n_max_, max_total_, current, basis_);
  for (std::size_t i = 0; i < basis_.size(); ++i) index_.emplace(basis_[i], static_cast<Eigen::Index>(i));

  const Eigen::Index d = dim();
  annihilators_.assign(static_cast<std::size_t>(modes), RMat::Zero(d, d));
  for (Eigen::Index col = 0; col < d; ++col) {
    const auto& occ = basis_[static_cast<std::size_t>(col)];
    int left = 0;
    for (int i = 0; i < modes; ++i) {
      const int n = occ[static_cast<std::size_t>(i)];
      if (n > 0) {
        auto target = occ;
        --target[static_cast<std::size_t>(i)];
        const Eigen::Index row = index_of(target);
        const double amp = statistics_ == Statistics::fermion ? ((left % 2) ? -1.0 : 1.0) : std::sqrt(double(n));
        annihilators_[static_cast<std::size_t>(i)](row, col) = amp;
      }
      left += n;
    }
  }
}

Eigen::Index FockSpace::index_of(const std::vector<int>& occupations) const {
  const auto it = index_.find(occupations);
  return it == index_.end() ? -1 : it->second;
}

const RMat& FockSpace::annihilation(int mode) const {
  detail::require(mode >= 0 && mode < modes_, "FockSpace: mode index out of range");
  return annihilators_[static_cast<std::size_t>(mode)];
}

CMat FockSpace::annihilation(const CVec& v) const {
  detail::require(v.size() == modes_, "FockSpace::annihilation: vector has the wrong dimension");
  CMat out = CMat::Zero(dim(), dim());
  for (int i = 0; i < modes_; ++i)
    if (v[i] != 0.0) out += std::conj(v[i]) * annihilators_[static_cast<std::size_t>(i)].cast<Complex>();
  return out;
}

CMat FockSpace::creation(const CVec& v) const { return annihilation(v).adjoint(); }

CMat FockSpace::one_body(const CMat& A) const {
  detail::require(A.rows() == modes_ && A.cols() == modes_, "FockSpace::one_body: matrix has the wrong dimension");
  CMat out = CMat::Zero(dim(), dim());
  for (int j = 0; j < modes_; ++j) {
    const RMat cj = creation(j);
    for (int k = 0; k < modes_; ++k)
      if (A(j, k) != 0.0) out += A(j, k) * (cj * annihilators_[static_cast<std::size_t>(k)]).cast<Complex>();
  }
  return out;
}

CMat FockSpace::counting_operator(const ProjectorObservable& projector) const {
  detail::require(projector.dim() == modes_, "counting_operator: projector has the wrong dimension");
  return one_body(projector.matrix());
}

CMat FockSpace::number_operator() const { return one_body(CMat::Identity(modes_, modes_)); }

CMat FockSpace::majorana(int index) const {
  detail::require(index >= 0 && index < 2 * modes_, "FockSpace::majorana: index out of range");
  const RMat& a = annihilation(index / 2);
  if (index % 2 == 0) return (a + a.transpose()).cast<Complex>();
  return Complex(0.0, -1.0) * (a - a.transpose()).cast<Complex>();
}

CVec FockSpace::vacuum() const {
  CVec v = CVec::Zero(dim());
  v[index_of(std::vector<int>(static_cast<std::size_t>(modes_), 0))] = 1.0;
  return v;
}

CVec FockSpace::product_state(const ModeEnsemble& ensemble) const {
  detail::require(ensemble.dim() == modes_, "product_state: ensemble has the wrong dimension");
  detail::require(ensemble.integral, "product_state: occupations must be integers");
  CVec psi = vacuum();
  double expected = 1.0;
  for (Eigen::Index a = 0; a < ensemble.occupations.size(); ++a) {
    const int n = static_cast<int>(std::lround(ensemble.occupations[a]));
    if (n == 0) continue;
    const CMat up = creation(CVec(ensemble.modes.col(a)));
    for (int k = 0; k < n; ++k) psi = up * psi;
    expected *= factorial(n);
  }
  const double norm2 = psi.squaredNorm();
  if (std::abs(norm2 - expected) > 1e-10 * expected)
    throw InputError("product_state: state does not fit in the truncated Fock space (norm^2 " +
                     std::to_string(norm2) + " vs " + std::to_string(expected) + ")");
  return psi / std::sqrt(norm2);
}

// ---------------------------------------------------------------------------

ManyBodyOperator build_hamiltonian(const FockSpace& space, const SpectralSystem& sys) {
  detail::require(sys.dim() == space.modes(), "build_hamiltonian: mode count differs from the system dimension");
  const CMat h = sys.eigenvectors() * sys.energies().cast<Complex>().asDiagonal() * sys.eigenvectors().adjoint();
  return {space.one_body(h), "H_f for " + (sys.label().empty() ? std::string("single-particle system") : sys.label())};
}

ManyBodyEvolution::ManyBodyEvolution(const ManyBodyOperator& hamiltonian) {
  Eigen::SelfAdjointEigenSolver<CMat> solver(hamiltonian.matrix);
  if (solver.info() != Eigen::Success) throw NumericalError("ManyBodyEvolution: eigensolver failed");
  energies_ = solver.eigenvalues();
  vectors_ = solver.eigenvectors();
}

CVec ManyBodyEvolution::evolve(const CVec& psi, double t) const {
  const CVec phases = (energies_ * Complex(0.0, -t)).array().exp();
  return vectors_ * (phases.asDiagonal() * (vectors_.adjoint() * psi));
}

CMat ManyBodyEvolution::evolve(const CMat& rho, double t) const {
  const CVec phases = (energies_ * Complex(0.0, -t)).array().exp();
  const CMat u = vectors_ * phases.asDiagonal() * vectors_.adjoint();
  return u * rho * u.adjoint();
}

double ManyBodyEvolution::expectation(const CVec& psi, const CMat& op, double t) const {
  const CVec v = evolve(psi, t);
  return v.dot(op * v).real();
}

double ManyBodyEvolution::expectation(const CMat& rho, const CMat& op, double t) const {
  return (evolve(rho, t) * op).trace().real();
}

double ManyBodyEvolution::time_average(const CMat& rho, const CMat& op, double eps_gap) const {
  const SpectralSystem sys(energies_, vectors_);
  return ExpectationSeries(sys, rho, op, eps_gap).stationary().real();
}

double evolve_expectation(const FockSpace& space, const ManyBodyOperator& hamiltonian, const CMat& rho0,
                          const CMat& M, double t) {
  detail::require(hamiltonian.matrix.rows() == space.dim() && rho0.rows() == space.dim() && M.rows() == space.dim(),
                  "evolve_expectation: operators live on different spaces");
  return ManyBodyEvolution(hamiltonian).expectation(rho0, M, t);
}

// ---------------------------------------------------------------------------

std::optional<ModeEnsemble> product_state_modes(const FockSpace& space, const CVec& psi) {
  detail::require(psi.size() == space.dim(), "product_state_modes: state has the wrong dimension");
  const int m = space.modes();
  CMat C(m, m);
  std::vector<CVec> lowered(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) lowered[static_cast<std::size_t>(k)] = space.annihilation(k).cast<Complex>() * psi;
  // C_jk = <a_j^dagger a_k> = <a_j psi | a_k psi>
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) C(j, k) = lowered[static_cast<std::size_t>(j)].dot(lowered[static_cast<std::size_t>(k)]);
  C = 0.5 * (C + C.adjoint()).eval();
  ModeEnsemble ensemble;
  try {
    ensemble = diagonalize_correlations(CorrelationMatrix(C, space.statistics()), CMat::Identity(m, m));
  } catch (const InputError&) {
    return std::nullopt;
  }
  if (!ensemble.integral) return std::nullopt;
  CVec rebuilt;
  try {
    rebuilt = space.product_state(ensemble);
  } catch (const InputError&) {
    return std::nullopt;
  }
  const double fidelity = std::norm(rebuilt.dot(psi));
  if (fidelity < 1.0 - 1e-10) return std::nullopt;
  return ensemble;
}

namespace {

FluctuationReport second_moment(const FockSpace& space, const CVec& psi, double N, const ProjectorObservable& m_modes) {
  const CMat M = space.counting_operator(m_modes);
  const CVec Mpsi = M * psi;
  FluctuationReport r;
  r.mean = psi.dot(Mpsi).real();
  r.second_moment = Mpsi.squaredNorm();
  r.variance = r.second_moment - r.mean * r.mean;
  r.bound = r.mean * r.mean + r.mean;
  if (space.statistics() == Statistics::boson) r.bound += N;
  r.bound_ok = r.second_moment <= r.bound + 1e-10;
  return r;
}

TimeFluctuationReport sample_fluctuations(const FockSpace& space, const SpectralSystem& sys, const CVec& psi0,
                                          double N, const ProjectorObservable& m_modes, std::size_t samples,
                                          std::uint64_t seed, double t_span) {
  detail::require(samples >= 2, "time_avg_fluctuation: need at least two samples");
  const GapStructure gaps = gap_structure(sys);
  if (gaps.max_level_degeneracy != 1 || gaps.max_gap_degeneracy != 1)
    throw PreconditionError("time_avg_fluctuation: single-particle spectrum has degenerate levels or gaps");

  if (t_span <= 0.0) {
    double min_spacing = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < gaps.levels.size(); ++i)
      min_spacing = std::min(min_spacing, gaps.levels[i].energy - gaps.levels[i - 1].energy);
    t_span = std::isfinite(min_spacing) ? 1000.0 * 2.0 * std::numbers::pi / min_spacing : 1.0;
  }

  const ManyBodyEvolution evolution(build_hamiltonian(space, sys));
  const CMat M = space.counting_operator(m_modes);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, t_span);

  double sum = 0.0;
  double sum2 = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const CVec psi = evolution.evolve(psi0, uniform(rng));
    const CVec Mpsi = M * psi;
    const double mean = psi.dot(Mpsi).real();
    const double sigma = std::sqrt(std::max(0.0, Mpsi.squaredNorm() - mean * mean));
    sum += sigma;
    sum2 += sigma * sigma;
  }
  TimeFluctuationReport r;
  const auto n = static_cast<double>(samples);
  r.samples = samples;
  r.mean_sigma = sum / n;
  const double var = std::max(0.0, (sum2 - n * r.mean_sigma * r.mean_sigma) / (n - 1.0));
  r.standard_error = std::sqrt(var / n);
  r.bound = std::sqrt(N);
  r.ok = r.mean_sigma <= r.bound + 3.0 * r.standard_error;
  return r;
}

}  // namespace

FluctuationReport fluctuation_check(const FockSpace& space, const CVec& psi, const ProjectorObservable& m_modes) {
  const auto ensemble = product_state_modes(space, psi);
  if (!ensemble) throw InputError("fluctuation_check: state is not a product of creation operators on orthonormal modes");
  return second_moment(space, psi, ensemble->total(), m_modes);
}

FluctuationReport fluctuation_check(const FockSpace& space, const ModeEnsemble& ensemble,
                                    const ProjectorObservable& m_modes) {
  return second_moment(space, space.product_state(ensemble), ensemble.total(), m_modes);
}

TimeFluctuationReport time_avg_fluctuation(const FockSpace& space, const SpectralSystem& sys, const CVec& psi0,
                                           const ProjectorObservable& m_modes, std::size_t samples,
                                           std::uint64_t seed, double t_span) {
  const auto ensemble = product_state_modes(space, psi0);
  if (!ensemble) throw InputError("time_avg_fluctuation: initial state is not a product state");
  return sample_fluctuations(space, sys, psi0, ensemble->total(), m_modes, samples, seed, t_span);
}

TimeFluctuationReport time_avg_fluctuation(const FockSpace& space, const SpectralSystem& sys,
                                           const ModeEnsemble& ensemble, const ProjectorObservable& m_modes,
                                           std::size_t samples, std::uint64_t seed, double t_span) {
  return sample_fluctuations(space, sys, space.product_state(ensemble), ensemble.total(), m_modes, samples, seed,
                             t_span);
}

}  // namespace qgas
