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

#include "qgas/spectral.hpp"

#include <algorithm>
#include <numeric>

namespace qgas {

namespace {

constexpr double kUnitTol = 1e-10;

bool is_identity(const CMat& m) {
  return m.rows() == m.cols() && (m - CMat::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() == 0.0;
}

void check_dims(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) throw InputError(std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                               std::to_string(b) + ")");
}

}  // namespace

SpectralSystem::SpectralSystem(RVec energies, CMat eigenvectors, std::string label)
    : energies_(std::move(energies)), eigenvectors_(std::move(eigenvectors)), label_(std::move(label)) {
  detail::require(energies_.size() > 0, "SpectralSystem: empty spectrum");
  detail::require(eigenvectors_.rows() == energies_.size() && eigenvectors_.cols() == energies_.size(),
                  "SpectralSystem: eigenvector matrix must be d x d with d = number of energies");
  for (Eigen::Index i = 1; i < energies_.size(); ++i)
    detail::require(energies_[i] >= energies_[i - 1], "SpectralSystem: energies must be sorted ascending");
  diagonal_ = is_identity(eigenvectors_);
  if (!diagonal_)
    detail::require(detail::orthonormality_defect(eigenvectors_) <= kUnitTol,
                    "SpectralSystem: eigenvectors are not unitary to 1e-10");
}

SpectralSystem SpectralSystem::from_hamiltonian(const CMat& hamiltonian, std::string label) {
  detail::require(hamiltonian.rows() == hamiltonian.cols(), "from_hamiltonian: matrix must be square");
  detail::require((hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff() <= 1e-10 *
                      std::max(1.0, hamiltonian.cwiseAbs().maxCoeff()),
                  "from_hamiltonian: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMat> solver(hamiltonian);
  if (solver.info() != Eigen::Success) throw NumericalError("from_hamiltonian: eigensolver failed");
  return SpectralSystem(solver.eigenvalues(), solver.eigenvectors(), std::move(label));
}

SpectralSystem SpectralSystem::from_energies(RVec energies, std::string label) {
  const Eigen::Index d = energies.size();
  return SpectralSystem(std::move(energies), CMat::Identity(d, d), std::move(label));
}

double SpectralSystem::spectral_range() const {
  const double r = energies_[energies_.size() - 1] - energies_[0];
  return r > 0.0 ? r : 1.0;
}

CVec SpectralSystem::to_eigenbasis(const CVec& v) const {
  check_dims(v.size(), dim(), "to_eigenbasis");
  return diagonal_ ? v : CVec(eigenvectors_.adjoint() * v);
}

CMat SpectralSystem::to_eigenbasis(const CMat& op) const {
  check_dims(op.rows(), dim(), "to_eigenbasis");
  return diagonal_ ? op : CMat(eigenvectors_.adjoint() * op * eigenvectors_);
}

CMat SpectralSystem::from_eigenbasis(const CMat& op) const {
  check_dims(op.rows(), dim(), "from_eigenbasis");
  return diagonal_ ? op : CMat(eigenvectors_ * op * eigenvectors_.adjoint());
}

// ---------------------------------------------------------------------------

StateSP::StateSP(Kind kind, RVec weights, CMat vectors)
    : kind_(kind), weights_(std::move(weights)), vectors_(std::move(vectors)) {}

StateSP StateSP::pure(CVec vector) {
  detail::require(vector.size() > 0, "StateSP::pure: empty vector");
  detail::require(std::abs(vector.norm() - 1.0) <= kUnitTol, "StateSP::pure: vector is not normalized to 1e-10");
  CMat vectors = vector;
  return StateSP(Kind::pure, RVec::Ones(1), std::move(vectors));
}

StateSP StateSP::mixed(RVec weights, CMat vectors) {
  detail::require(weights.size() == vectors.cols() && weights.size() > 0,
                  "StateSP::mixed: need one weight per component vector");
  detail::require(weights.minCoeff() >= 0.0, "StateSP::mixed: negative weight");
  detail::require(std::abs(weights.sum() - 1.0) <= kUnitTol, "StateSP::mixed: weights do not sum to 1");
  detail::require(detail::orthonormality_defect(vectors) <= kUnitTol,
                  "StateSP::mixed: component vectors are not orthonormal to 1e-10");
  return StateSP(Kind::mixed, std::move(weights), std::move(vectors));
}

CMat StateSP::density_matrix() const { return vectors_ * weights_.cast<Complex>().asDiagonal() * vectors_.adjoint(); }

// ---------------------------------------------------------------------------

ProjectorObservable::ProjectorObservable(Eigen::Index dim, CMat modes) : dim_(dim), modes_(std::move(modes)) {
  if (modes_.cols() == 0) modes_.resize(dim_, 0);
  detail::require(modes_.rows() == dim_, "ProjectorObservable: mode vectors have the wrong dimension");
  detail::require(modes_.cols() <= dim_, "ProjectorObservable: rank exceeds dimension");
  detail::require(detail::orthonormality_defect(modes_) <= kUnitTol,
                  "ProjectorObservable: modes are not orthonormal to 1e-10");
}

ProjectorObservable ProjectorObservable::empty(Eigen::Index dim) { return {dim, CMat(dim, 0)}; }

ProjectorObservable ProjectorObservable::identity(Eigen::Index dim) { return {dim, CMat::Identity(dim, dim)}; }

ProjectorObservable ProjectorObservable::basis_subset(Eigen::Index dim, std::span<const Eigen::Index> indices) {
  CMat modes = CMat::Zero(dim, static_cast<Eigen::Index>(indices.size()));
  for (std::size_t k = 0; k < indices.size(); ++k) {
    detail::require(indices[k] >= 0 && indices[k] < dim, "basis_subset: index out of range");
    modes(indices[k], static_cast<Eigen::Index>(k)) = 1.0;
  }
  return {dim, std::move(modes)};
}

CMat ProjectorObservable::matrix() const { return modes_ * modes_.adjoint(); }

Observable::Observable(CMat matrix) : matrix_(std::move(matrix)) {
  detail::require(matrix_.rows() == matrix_.cols(), "Observable: matrix must be square");
  detail::require((matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() <= 1e-10, "Observable: matrix is not Hermitian");
}

Observable::Observable(const ProjectorObservable& projector) : matrix_(projector.matrix()) {}

double Observable::norm() const {
  Eigen::SelfAdjointEigenSolver<CMat> solver(matrix_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------

std::vector<EnergyLevel> energy_levels(const SpectralSystem& sys, double eps_gap) {
  detail::require(eps_gap > 0.0, "energy_levels: eps_gap must be positive");
  const double tol = eps_gap * sys.spectral_range();
  const RVec& e = sys.energies();
  std::vector<EnergyLevel> levels;
  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i <= e.size(); ++i) {
    if (i == e.size() || e[i] - e[i - 1] > tol) {
      const Eigen::Index count = i - start;
      levels.push_back({e.segment(start, count).mean(), start, count});
      start = i;
    }
  }
  return levels;
}

GapStructure gap_structure(const SpectralSystem& sys, double eps_gap) {
  GapStructure out;
  out.levels = energy_levels(sys, eps_gap);
  out.tolerance = eps_gap * sys.spectral_range();
  for (const auto& level : out.levels)
    out.max_level_degeneracy = std::max(out.max_level_degeneracy, static_cast<int>(level.degeneracy));

  const std::size_t n = out.levels.size();
  std::vector<double> raw;
  raw.reserve(n * (n > 0 ? n - 1 : 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) raw.push_back(out.levels[i].energy - out.levels[j].energy);
  std::sort(raw.begin(), raw.end());

  out.max_gap_degeneracy = 1;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= raw.size(); ++i) {
    if (i == raw.size() || raw[i] - raw[i - 1] > out.tolerance) {
      const int count = static_cast<int>(i - start);
      const double mean = std::accumulate(raw.begin() + static_cast<std::ptrdiff_t>(start),
                                          raw.begin() + static_cast<std::ptrdiff_t>(i), 0.0) /
                          count;
      out.gaps.push_back({mean, count});
      out.max_gap_degeneracy = std::max(out.max_gap_degeneracy, count);
      start = i;
    }
  }
  if (!raw.empty()) out.max_gap = raw.back();
  return out;
}

// ---------------------------------------------------------------------------

StateSP evolve(const SpectralSystem& sys, const StateSP& state, double t) {
  check_dims(state.dim(), sys.dim(), "evolve");
  const CVec phases = (sys.energies() * Complex(0.0, -t)).array().exp();
  CMat coeffs = sys.diagonal_basis() ? state.vectors() : CMat(sys.eigenvectors().adjoint() * state.vectors());
  coeffs = phases.asDiagonal() * coeffs;
  CMat evolved = sys.diagonal_basis() ? coeffs : CMat(sys.eigenvectors() * coeffs);
  if (state.kind() == StateSP::Kind::pure) return StateSP::pure(evolved.col(0));
  // Unitary evolution preserves orthonormality; skip re-validation drift by renormalizing columns.
  for (Eigen::Index k = 0; k < evolved.cols(); ++k) evolved.col(k).normalize();
  return StateSP::mixed(state.weights(), std::move(evolved));
}

double expectation_P(const StateSP& state, const ProjectorObservable& projector) {
  check_dims(state.dim(), projector.dim(), "expectation_P");
  if (projector.rank() == 0) return 0.0;
  const CMat overlaps = projector.modes().adjoint() * state.vectors();
  double value = 0.0;
  for (Eigen::Index k = 0; k < state.components(); ++k) value += state.weights()[k] * overlaps.col(k).squaredNorm();
  return value;
}

double expectation(const StateSP& state, const Observable& observable) {
  check_dims(state.dim(), observable.dim(), "expectation");
  double value = 0.0;
  for (Eigen::Index k = 0; k < state.components(); ++k) {
    const auto v = state.vectors().col(k);
    value += state.weights()[k] * v.dot(observable.matrix() * v).real();
  }
  return value;
}

CMat time_average_state(const SpectralSystem& sys, const StateSP& state, double eps_gap) {
  check_dims(state.dim(), sys.dim(), "time_average_state");
  const CMat rho = sys.to_eigenbasis(state.density_matrix());
  CMat dephased = CMat::Zero(rho.rows(), rho.cols());
  for (const auto& level : energy_levels(sys, eps_gap))
    dephased.block(level.first, level.first, level.degeneracy, level.degeneracy) =
        rho.block(level.first, level.first, level.degeneracy, level.degeneracy);
  return sys.from_eigenbasis(dephased);
}

double distinguishability(const SpectralSystem& sys, const StateSP& state, const Observable& observable, double t,
                          double eps_gap) {
  const ExpectationSeries series(sys, state, observable, eps_gap);
  return std::abs((series.value(t) - series.stationary()).real());
}

// ---------------------------------------------------------------------------

ExpectationSeries::ExpectationSeries(const SpectralSystem& sys, const CMat& density, const CMat& op, double eps_gap)
    : energies_(sys.energies()) {
  check_dims(density.rows(), sys.dim(), "ExpectationSeries");
  check_dims(op.rows(), sys.dim(), "ExpectationSeries");
  const CMat rho = sys.to_eigenbasis(density);
  const CMat a = sys.to_eigenbasis(op);
  // tr[rho A] = sum_ab rho_ab A_ba
  weights_ = rho.cwiseProduct(a.transpose());
  initial_ = weights_.sum();
  for (const auto& level : energy_levels(sys, eps_gap)) {
    auto block = weights_.block(level.first, level.first, level.degeneracy, level.degeneracy);
    stationary_ += block.sum();
    block.setZero();
  }
}

ExpectationSeries::ExpectationSeries(const SpectralSystem& sys, const StateSP& state, const Observable& observable,
                                     double eps_gap)
    : ExpectationSeries(sys, state.density_matrix(), observable.matrix(), eps_gap) {
  check_dims(state.dim(), sys.dim(), "ExpectationSeries");
}

Complex ExpectationSeries::value(double t) const {
  const CVec u = (energies_ * Complex(0.0, -t)).array().exp();
  return stationary_ + (u.transpose() * weights_ * u.conjugate()).value();
}

std::vector<Complex> ExpectationSeries::values(std::span<const double> times) const {
  std::vector<Complex> out(times.size());
  const Eigen::Index d = energies_.size();
  constexpr std::size_t kChunk = 256;
  CMat u(static_cast<Eigen::Index>(kChunk), d);
  for (std::size_t start = 0; start < times.size(); start += kChunk) {
    const auto rows = static_cast<Eigen::Index>(std::min(kChunk, times.size() - start));
    for (Eigen::Index r = 0; r < rows; ++r)
      u.row(r) = (energies_.transpose() * Complex(0.0, -times[start + static_cast<std::size_t>(r)])).array().exp();
    const CMat uw = u.topRows(rows) * weights_;
    for (Eigen::Index r = 0; r < rows; ++r)
      out[start + static_cast<std::size_t>(r)] = stationary_ + (uw.row(r).array() * u.row(r).conjugate().array()).sum();
  }
  return out;
}

std::vector<double> ExpectationSeries::deviations(std::span<const double> times) const {
  const auto v = values(times);
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [this](Complex z) { return std::abs(z - stationary_); });
  return out;
}

// ---------------------------------------------------------------------------

std::vector<double> uniform_grid(double t0, double t1, std::size_t n) {
  detail::require(n >= 2, "uniform_grid: need at least two points");
  std::vector<double> grid(n);
  const double h = (t1 - t0) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) grid[i] = t0 + h * static_cast<double>(i);
  grid.back() = t1;
  return grid;
}

std::size_t min_average_samples(double T, double max_gap) {
  const double needed = std::ceil(8.0 * T * std::abs(max_gap) / std::numbers::pi);
  return std::max<std::size_t>(512, static_cast<std::size_t>(needed) + 1);
}

double trapezoid_mean(std::span<const double> values) {
  detail::require(values.size() >= 2, "trapezoid_mean: need at least two samples");
  double sum = 0.5 * (values.front() + values.back());
  for (std::size_t i = 1; i + 1 < values.size(); ++i) sum += values[i];
  return sum / static_cast<double>(values.size() - 1);
}

DensityOfStates density_of_states(std::span<const double> energies, int n_bins, double lo, double hi) {
  detail::require(n_bins >= 2, "density_of_states: need at least two bins");
  detail::require(energies.size() >= 2, "density_of_states: need at least two levels");
  detail::require(hi > lo, "density_of_states: degenerate energy window");
  DensityOfStates dos;
  dos.bin_width = (hi - lo) / n_bins;
  dos.edges = RVec::LinSpaced(n_bins + 1, lo, hi);
  dos.heights = RVec::Zero(n_bins);
  for (double e : energies) {
    if (e < lo || e > hi) continue;
    auto bin = static_cast<int>(std::floor((e - lo) / dos.bin_width));
    bin = std::clamp(bin, 0, n_bins - 1);
    dos.heights[bin] += 1.0;
  }
  dos.heights /= dos.bin_width;
  dos.n_max = dos.heights.maxCoeff();
  return dos;
}

DensityOfStates density_of_states(const SpectralSystem& sys, int n_bins) {
  detail::require(sys.dim() >= 2, "density_of_states: dimension must be at least 2");
  const RVec& e = sys.energies();
  const double lo = e[0];
  const double hi = e[e.size() - 1];
  detail::require(hi > lo, "density_of_states: flat spectrum has no density");
  return density_of_states(std::span<const double>(e.data(), static_cast<std::size_t>(e.size())), n_bins, lo, hi);
}

}  // namespace qgas
