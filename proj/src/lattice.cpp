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

#include "qgas/lattice.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <utility>

#include "qgas/pfaffian.hpp"

namespace qgas {

namespace {

constexpr double kPi = std::numbers::pi;

// sum_pq S_pq exp(i (E_p - E_q) t) over a fixed spectrum, with gap-resolved time averages.
class PairSeries {
 public:
  PairSeries(const RVec& energies, double eps_gap) : energies_(energies) {
    const Eigen::Index d = energies.size();
    const double range = std::max(energies.maxCoeff() - energies.minCoeff(), 1.0);
    const double tol = eps_gap * range;
    std::vector<std::pair<double, Eigen::Index>> gaps;
    gaps.reserve(static_cast<std::size_t>(d * d));
    for (Eigen::Index p = 0; p < d; ++p)
      for (Eigen::Index q = 0; q < d; ++q) gaps.emplace_back(energies[p] - energies[q], p * d + q);
    std::sort(gaps.begin(), gaps.end());
    cluster_.assign(static_cast<std::size_t>(d * d), 0);
    int id = -1;
    double prev = 0.0;
    for (std::size_t i = 0; i < gaps.size(); ++i) {
      if (i == 0 || gaps[i].first - prev > tol) {
        ++id;
        values_.push_back(gaps[i].first);
      }
      prev = gaps[i].first;
      cluster_[static_cast<std::size_t>(gaps[i].second)] = id;
    }
    mirror_.resize(values_.size());
    for (std::size_t c = 0; c < values_.size(); ++c) {
      const auto it = std::lower_bound(values_.begin(), values_.end(), -values_[c] - tol);
      mirror_[c] = static_cast<int>(it - values_.begin());
    }
    zero_ = cluster_[0];  // p = q = 0
  }

  std::vector<Complex> gap_weights(const CMat& S) const {
    std::vector<Complex> w(values_.size(), 0.0);
    const Eigen::Index d = S.rows();
    for (Eigen::Index p = 0; p < d; ++p)
      for (Eigen::Index q = 0; q < d; ++q) w[static_cast<std::size_t>(cluster_[static_cast<std::size_t>(p * d + q)])] += S(p, q);
    return w;
  }

  Complex average(const CMat& S) const { return gap_weights(S)[static_cast<std::size_t>(zero_)]; }

  Complex product_average(const CMat& S1, const CMat& S2) const {
    const auto w1 = gap_weights(S1);
    const auto w2 = gap_weights(S2);
    Complex sum = 0.0;
    for (std::size_t c = 0; c < w1.size(); ++c) sum += w1[c] * w2[static_cast<std::size_t>(mirror_[c])];
    return sum;
  }

  std::vector<Complex> values(const CMat& S, std::span<const double> times) const {
    std::vector<Complex> out(times.size());
    const Eigen::Index d = energies_.size();
    constexpr std::size_t kChunk = 256;
    CMat u(static_cast<Eigen::Index>(kChunk), d);
    for (std::size_t start = 0; start < times.size(); start += kChunk) {
      const auto rows = static_cast<Eigen::Index>(std::min(kChunk, times.size() - start));
      for (Eigen::Index r = 0; r < rows; ++r)
        u.row(r) = (energies_.transpose() * Complex(0.0, times[start + static_cast<std::size_t>(r)])).array().exp();
      const CMat us = u.topRows(rows) * S;
      for (Eigen::Index r = 0; r < rows; ++r)
        out[start + static_cast<std::size_t>(r)] = (us.row(r).array() * u.row(r).conjugate().array()).sum();
    }
    return out;
  }

 private:
  RVec energies_;
  std::vector<int> cluster_;
  std::vector<double> values_;
  std::vector<int> mirror_;
  int zero_ = 0;
};

void require_ring(const HoppingModel& model, const char* who) {
  if (model.geometry != Geometry::ring) throw PreconditionError(std::string(who) + ": requires the ring geometry");
}

}  // namespace

HoppingModel HoppingModel::ring(int V) {
  detail::require(V >= 3, "HoppingModel::ring: need at least three sites");
  HoppingModel m{V, Geometry::ring, CMat::Zero(V, V), 1};
  for (int i = 0; i < V; ++i) {
    const int j = (i + 1) % V;
    m.h(i, j) += 0.5;
    m.h(j, i) += 0.5;
  }
  return m;
}

HoppingModel HoppingModel::chain(int V) {
  detail::require(V >= 2, "HoppingModel::chain: need at least two sites");
  HoppingModel m{V, Geometry::chain, CMat::Zero(V, V), 1};
  for (int i = 0; i + 1 < V; ++i) {
    m.h(i, i + 1) = 0.5;
    m.h(i + 1, i) = 0.5;
  }
  return m;
}

SpectralSystem HoppingModel::spectrum() const {
  detail::require(h.rows() == V && h.cols() == V, "HoppingModel: amplitude matrix must be V x V");
  detail::require((h - h.adjoint()).cwiseAbs().maxCoeff() <= 1e-12, "HoppingModel: amplitudes are not Hermitian");
  return SpectralSystem::from_hamiltonian(h, geometry == Geometry::ring ? "ring" : "chain");
}

CMat HoppingModel::propagator(double t) const {
  const SpectralSystem sys = spectrum();
  const CVec phases = (sys.energies() * Complex(0.0, -t)).array().exp();
  return sys.eigenvectors() * phases.asDiagonal() * sys.eigenvectors().adjoint();
}

// ---------------------------------------------------------------------------

CovarianceMatrix::CovarianceMatrix(RMat gamma) : gamma_(std::move(gamma)) {
  detail::require(gamma_.rows() == gamma_.cols() && gamma_.rows() % 2 == 0,
                  "CovarianceMatrix: Gamma must be square with even dimension");
  detail::require((gamma_ + gamma_.transpose()).cwiseAbs().maxCoeff() <= 1e-10,
                  "CovarianceMatrix: Gamma is not antisymmetric to 1e-10");
}

CovarianceMatrix CovarianceMatrix::from_correlations(const CMat& C) {
  detail::require(C.rows() == C.cols(), "from_correlations: C must be square");
  detail::require((C - C.adjoint()).cwiseAbs().maxCoeff() <= 1e-10, "from_correlations: C is not Hermitian");
  const Eigen::Index v = C.rows();
  RMat g = RMat::Zero(2 * v, 2 * v);
  for (Eigen::Index j = 0; j < v; ++j)
    for (Eigen::Index k = 0; k < v; ++k) {
      const double im = -2.0 * C(j, k).imag();
      const double re = 2.0 * C(j, k).real() - (j == k ? 1.0 : 0.0);
      g(2 * j, 2 * k) = j == k ? 0.0 : im;
      g(2 * j + 1, 2 * k + 1) = j == k ? 0.0 : im;
      g(2 * j, 2 * k + 1) = re;
      g(2 * j + 1, 2 * k) = -re;
    }
  return CovarianceMatrix(std::move(g));
}

CMat CovarianceMatrix::correlations() const {
  const Eigen::Index v = gamma_.rows() / 2;
  CMat c(v, v);
  for (Eigen::Index j = 0; j < v; ++j)
    for (Eigen::Index k = 0; k < v; ++k)
      c(j, k) = Complex(0.5 * (gamma_(2 * j, 2 * k + 1) + (j == k ? 1.0 : 0.0)), -0.5 * gamma_(2 * j, 2 * k));
  return c;
}

double CovarianceMatrix::anomalous_defect() const {
  const Eigen::Index v = gamma_.rows() / 2;
  double worst = 0.0;
  for (Eigen::Index j = 0; j < v; ++j)
    for (Eigen::Index k = 0; k < v; ++k) {
      worst = std::max(worst, std::abs(gamma_(2 * j, 2 * k) - gamma_(2 * j + 1, 2 * k + 1)));
      worst = std::max(worst, std::abs(gamma_(2 * j, 2 * k + 1) + gamma_(2 * j + 1, 2 * k)));
    }
  return worst;
}

double CovarianceMatrix::max_singular_value() const {
  Eigen::JacobiSVD<RMat> svd(gamma_);
  return svd.singularValues()[0];
}

RMat majorana_rotation(const CMat& U) {
  const Eigen::Index v = U.rows();
  RMat o(2 * v, 2 * v);
  for (Eigen::Index j = 0; j < v; ++j)
    for (Eigen::Index k = 0; k < v; ++k) {
      const double x = U(j, k).real();
      const double y = U(j, k).imag();
      o(2 * j, 2 * k) = x;
      o(2 * j, 2 * k + 1) = -y;
      o(2 * j + 1, 2 * k) = y;
      o(2 * j + 1, 2 * k + 1) = x;
    }
  return o;
}

CovarianceMatrix evolve_covariance(const HoppingModel& model, const CovarianceMatrix& cov, double t) {
  detail::require(cov.modes() == model.V, "evolve_covariance: covariance and model sizes differ");
  const RMat o = majorana_rotation(model.propagator(t));
  RMat g = o * cov.gamma() * o.transpose();
  g = 0.5 * (g - g.transpose()).eval();
  return CovarianceMatrix(std::move(g));
}

Complex wick_expectation(const CovarianceMatrix& cov, const std::vector<int>& indices) {
  const int n = 2 * cov.modes();
  for (std::size_t i = 0; i < indices.size(); ++i) {
    detail::require(indices[i] >= 0 && indices[i] < n, "wick_expectation: index out of range");
    detail::require(i == 0 || indices[i] > indices[i - 1], "wick_expectation: indices must be strictly increasing");
  }
  if (indices.empty()) return 1.0;
  if (indices.size() % 2 == 1) return 0.0;
  const auto k = static_cast<Eigen::Index>(indices.size());
  RMat sub(k, k);
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = 0; b < k; ++b) sub(a, b) = cov.gamma()(indices[static_cast<std::size_t>(a)], indices[static_cast<std::size_t>(b)]);
  // tr[rho c_a c_b] = -i Gamma_ab for a < b
  Complex phase = 1.0;
  for (Eigen::Index p = 0; p < k / 2; ++p) phase *= Complex(0.0, -1.0);
  return phase * pfaffian(sub);
}

PhaseCorrelator phase_correlator(const HoppingModel& model, const CovarianceMatrix& cov0, int x, int y, double t) {
  detail::require(x >= 0 && x < model.V && y >= 0 && y < model.V, "phase_correlator: site out of range");
  const CMat c = evolve_covariance(model, cov0, t).correlations();
  PhaseCorrelator out;
  out.direct = c(x, y);
  if (x == y) {
    out.decomposed = c(x, x);
    return out;
  }
  const double r = 1.0 / std::sqrt(2.0);
  auto density = [&](Complex cx, Complex cy) {
    CVec phi = CVec::Zero(model.V);
    phi[x] = cx;
    phi[y] = cy;
    return (phi.transpose() * c * phi.conjugate())(0, 0);
  };
  const Complex n1 = density(r, r);
  const Complex n2 = density(r, -r);
  const Complex n3 = density(r, Complex(0.0, -r));
  const Complex n4 = density(r, Complex(0.0, r));
  out.decomposed = 0.5 * (n1 - n2 - kI * n3 + kI * n4);
  return out;
}

// ---------------------------------------------------------------------------

double ring_density(int L, double E) {
  detail::require(std::abs(E) < 1.0, "ring_density: energy must lie inside the band");
  return L / (kPi * std::sqrt(1.0 - E * E));
}

TruncatedDos truncated_dos(const HoppingModel& model, double p0) {
  require_ring(model, "truncated_dos");
  detail::require(p0 > 0.0 && p0 < kPi / 2.0, "truncated_dos: p0 must lie in (0, pi/2)");
  TruncatedDos out;
  out.n_max = model.V / (kPi * std::sin(p0));
  out.excluded_fraction = 2.0 * p0 / kPi;
  out.excluded_formula = 2.0 * p0 * model.V / kPi;

  const SpectralSystem sys = model.spectrum();
  const double edge = std::cos(p0);
  for (Eigen::Index i = 0; i < sys.dim(); ++i) {
    const double e = std::abs(sys.energies()[i]);
    if (std::abs(e - edge) <= 1e-10)
      out.excluded_direct += 0.5;
    else if (e > edge)
      out.excluded_direct += 1.0;
  }
  const int bins = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(model.V))));
  std::vector<double> kept;
  for (Eigen::Index i = 0; i < sys.dim(); ++i)
    if (std::abs(sys.energies()[i]) < edge - 1e-10) kept.push_back(sys.energies()[i]);
  if (kept.size() >= 2) out.histogram_n_max = density_of_states(kept, bins, -edge, edge).n_max;
  return out;
}

LocalBoundReport single_mode_bound_check(const HoppingModel& model, const CovarianceMatrix& cov0, const CVec& phi,
                                         int l, double T, double p0) {
  require_ring(model, "single_mode_bound_check");
  detail::require(phi.size() == model.V, "single_mode_bound_check: mode has the wrong dimension");
  detail::require(std::abs(phi.norm() - 1.0) <= 1e-10, "single_mode_bound_check: mode is not normalized");
  detail::require(l >= 1 && T > 0.0, "single_mode_bound_check: need l >= 1 and T > 0");
  detail::require(cov0.modes() == model.V, "single_mode_bound_check: covariance and model sizes differ");

  const SpectralSystem sys = model.spectrum();
  const GapStructure gaps = gap_structure(sys);
  const CMat varrho = cov0.correlations().transpose();
  const ExpectationSeries series(sys, varrho, CMat(phi * phi.adjoint()));
  // Same grid as the multi-mode check so that the two agree on a single density.
  const auto grid = uniform_grid(0.0, T, min_average_samples(T, 2.0 * gaps.max_gap));

  LocalBoundReport r;
  r.lhs = trapezoid_mean(series.deviations(grid));
  r.n_max = truncated_dos(model, p0).n_max;
  r.D_G = gaps.max_gap_degeneracy;
  r.n_d = gaps.max_level_degeneracy;
  r.d = model.V;
  r.m = r.m_prime = 1.0;
  r.m_2K = 2.0;
  r.slack = 2.0 * p0 * l / kPi;
  const double s = model.s;
  r.rhs = l * std::sqrt(kC1 * r.n_d * r.n_d * s * s * (double(r.D_G) / r.d + kC2 * r.n_max / T)) + r.slack;
  r.ok = r.lhs <= r.rhs;
  return r;
}

LocalBoundReport multi_mode_bound_check(const HoppingModel& model, const CovarianceMatrix& cov0,
                                        const std::vector<MajoranaTerm>& M, int l, double T, double p0) {
  require_ring(model, "multi_mode_bound_check");
  detail::require(cov0.modes() == model.V, "multi_mode_bound_check: covariance and model sizes differ");
  detail::require(l >= 1 && T > 0.0, "multi_mode_bound_check: need l >= 1 and T > 0");
  if (cov0.anomalous_defect() > 1e-10)
    throw PreconditionError("multi_mode_bound_check: initial state has pairing correlations (not number conserving)");

  const int n = 2 * model.V;
  int K = 0;
  for (const auto& term : M) {
    for (std::size_t i = 0; i < term.indices.size(); ++i) {
      detail::require(term.indices[i] >= 0 && term.indices[i] < n, "multi_mode_bound_check: index out of range");
      detail::require(i == 0 || term.indices[i] > term.indices[i - 1],
                      "multi_mode_bound_check: indices must be strictly increasing");
    }
    if (term.indices.size() > 4)
      throw InputError("multi_mode_bound_check: strings longer than four Majoranas are not supported");
    K = std::max(K, static_cast<int>(term.indices.size() / 2));
  }

  const SpectralSystem sys = model.spectrum();
  const GapStructure gaps = gap_structure(sys);
  const PairSeries pairs(sys.energies(), kDefaultGapTolerance);
  const CMat& V = sys.eigenvectors();
  const Eigen::Index d = sys.dim();
  const CMat Ct = V.transpose() * cov0.correlations() * V.conjugate();

  std::map<std::pair<int, int>, CMat> cache;
  auto gamma_series = [&](int a, int b) -> const CMat& {
    auto it = cache.find({a, b});
    if (it != cache.end()) return it->second;
    const int j = a / 2;
    const int k = b / 2;
    const CMat sc = V.row(j).conjugate().transpose().asDiagonal() * Ct * V.row(k).transpose().asDiagonal();
    CMat s;
    const bool ax = a % 2 == 0;
    const bool bx = b % 2 == 0;
    if (ax == bx) {
      s = kI * (sc - sc.adjoint());
    } else {
      s = sc + sc.adjoint();
      if (j == k) s.diagonal().array() -= 1.0 / static_cast<double>(d);
      if (!ax) s = -s;
    }
    return cache.emplace(std::make_pair(a, b), std::move(s)).first->second;
  };

  const std::size_t samples = min_average_samples(T, 2.0 * gaps.max_gap);
  const auto grid = uniform_grid(0.0, T, samples);
  std::vector<Complex> F(grid.size(), 0.0);
  Complex F_bar = 0.0;
  std::map<std::pair<int, int>, std::vector<Complex>> sampled;
  auto samples_of = [&](int a, int b) -> const std::vector<Complex>& {
    auto it = sampled.find({a, b});
    if (it != sampled.end()) return it->second;
    return sampled.emplace(std::make_pair(a, b), pairs.values(gamma_series(a, b), grid)).first->second;
  };

  LocalBoundReport r;
  for (const auto& term : M) {
    const auto& R = term.indices;
    r.m = std::max(r.m, std::abs(term.coefficient));
    r.m_prime += std::abs(term.coefficient);
    if (R.size() % 2 == 1) continue;
    if (R.empty()) {
      for (auto& f : F) f += term.coefficient;
      F_bar += term.coefficient;
      continue;
    }
    const Complex phase = R.size() == 2 ? Complex(0.0, -1.0) : Complex(-1.0, 0.0);
    const Complex c = term.coefficient * phase;
    if (R.size() == 2) {
      const auto& g = samples_of(R[0], R[1]);
      for (std::size_t i = 0; i < F.size(); ++i) F[i] += c * g[i];
      F_bar += c * pairs.average(gamma_series(R[0], R[1]));
      continue;
    }
    // pf of a 4x4 block: G_ab G_cd - G_ac G_bd + G_ad G_bc
    const int a = R[0], b = R[1], cc = R[2], dd = R[3];
    const std::array<std::array<std::pair<int, int>, 2>, 3> pairings{{{{{a, b}, {cc, dd}}},
                                                                     {{{a, cc}, {b, dd}}},
                                                                     {{{a, dd}, {b, cc}}}}};
    const std::array<double, 3> signs{1.0, -1.0, 1.0};
    for (std::size_t p = 0; p < 3; ++p) {
      const auto [p1, p2] = pairings[p];
      const auto& g1 = samples_of(p1.first, p1.second);
      const auto& g2 = samples_of(p2.first, p2.second);
      for (std::size_t i = 0; i < F.size(); ++i) F[i] += c * signs[p] * g1[i] * g2[i];
      F_bar += c * signs[p] *
               pairs.product_average(gamma_series(p1.first, p1.second), gamma_series(p2.first, p2.second));
    }
  }

  std::vector<double> dev(F.size());
  for (std::size_t i = 0; i < F.size(); ++i) dev[i] = std::abs(F[i] - F_bar);
  r.lhs = trapezoid_mean(dev);
  r.n_max = truncated_dos(model, p0).n_max;
  r.D_G = gaps.max_gap_degeneracy;
  r.n_d = gaps.max_level_degeneracy;
  r.d = model.V;
  r.m_2K = r.m * std::pow(2.0, K);
  r.slack = 2.0 * p0 * l / kPi;
  const double s = model.s;
  const double c3 = kC1 * r.n_d * r.n_d * s * s;
  r.rhs = std::pow(2.0, l * s + 2.0) * r.m * s * l * l *
              std::sqrt(c3 * (double(r.D_G) / r.d + kC2 * r.n_max / T)) +
          r.slack;
  r.ok = r.lhs <= r.rhs;
  return r;
}

double correlator_fluctuation(const HoppingModel& model, const CovarianceMatrix& cov0, int x, int y, double T) {
  detail::require(x >= 0 && x < model.V && y >= 0 && y < model.V, "correlator_fluctuation: site out of range");
  detail::require(T > 0.0, "correlator_fluctuation: T must be positive");
  const SpectralSystem sys = model.spectrum();
  CMat op = CMat::Zero(model.V, model.V);
  op(x, y) = 1.0;
  const ExpectationSeries series(sys, CMat(cov0.correlations().transpose()), op);
  const auto grid = uniform_grid(0.0, T, min_average_samples(T, gap_structure(sys).max_gap));
  auto dev = series.deviations(grid);
  for (double& v : dev) v *= v;
  return std::sqrt(trapezoid_mean(dev));
}

CovarianceMatrix alternating_state(int V) {
  detail::require(V >= 2, "alternating_state: need at least two sites");
  CMat c = CMat::Zero(V, V);
  for (int j = 0; j < V; j += 2) c(j, j) = 1.0;
  return CovarianceMatrix::from_correlations(c);
}

}  // namespace qgas
