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

#include "qgas/bounds.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qgas/fermi_box.hpp"
#include "qgas/lattice.hpp"

namespace qgas {

namespace {

double inverse_participation(const SpectralSystem& sys, const RVec& populations, double eps_gap) {
  double sum = 0.0;
  for (const auto& level : energy_levels(sys, eps_gap)) {
    const double p = populations.segment(level.first, level.degeneracy).sum();
    sum += p * p;
  }
  return sum;
}

}  // namespace

double effective_dimension(const SpectralSystem& sys, const StateSP& state, double eps_gap) {
  detail::require(state.dim() == sys.dim(), "effective_dimension: dimension mismatch");
  RVec pop = RVec::Zero(sys.dim());
  for (Eigen::Index k = 0; k < state.components(); ++k)
    pop += state.weights()[k] * sys.to_eigenbasis(CVec(state.vectors().col(k))).cwiseAbs2();
  return 1.0 / inverse_participation(sys, pop, eps_gap);
}

double effective_dimension(const SpectralSystem& sys, const ModeEnsemble& ensemble, double eps_gap) {
  detail::require(ensemble.dim() == sys.dim(), "effective_dimension: dimension mismatch");
  const double N = ensemble.total();
  detail::require(N > 0.0, "effective_dimension: empty ensemble");
  // n_E = sum_a n_a |<E|psi_a>|^2
  const CMat overlaps = sys.diagonal_basis() ? ensemble.modes : CMat(sys.eigenvectors().adjoint() * ensemble.modes);
  const RVec n_E = overlaps.cwiseAbs2() * ensemble.occupations;
  return 1.0 / inverse_participation(sys, n_E / N, eps_gap);
}

BoundReport deviation_bound(const BoundInputs& in) {
  detail::require(in.d > 0 && in.d_eff > 0 && in.D_G >= 1 && in.n_d >= 1 && in.n_max >= 0,
                  "deviation_bound: inputs must be positive");
  detail::require(in.T > 0.0, "deviation_bound: T must be positive");
  BoundReport r;
  r.inputs = in;
  r.degeneracy_term = kC1 * in.D_G / in.d_eff;
  r.time_term = std::isinf(in.T) ? 0.0 : kC1 * kC2 * in.n_max * in.d / (in.d_eff * in.T);
  r.bound_value = r.degeneracy_term + r.time_term;
  return r;
}

double coarse_grained_bound(int n_d, int D_G, double N) {
  detail::require(N > 0.0, "coarse_grained_bound: N must be positive");
  return std::sqrt(kC1 * n_d * D_G / N);
}

WeightedAverageReport weighted_average_check(double dG, double T) {
  detail::require(T > 0.0, "weighted_average_check: T must be positive");
  using boost::math::quadrature::gauss_kronrod;
  const double e = std::numbers::e;
  auto weight = [T, e](double t) { return e / T * std::exp(-4.0 * (t - T / 2.0) * (t - T / 2.0) / (T * T)); };
  const double lo = T / 2.0 - 4.0 * T;
  const double hi = T / 2.0 + 4.0 * T;
  double err_re = 0.0;
  double err_im = 0.0;
  const double re = gauss_kronrod<double, 61>::integrate([&](double t) { return weight(t) * std::cos(dG * t); }, lo,
                                                         hi, 25, 1e-14, &err_re);
  const double im = gauss_kronrod<double, 61>::integrate([&](double t) { return weight(t) * std::sin(dG * t); }, lo,
                                                         hi, 25, 1e-14, &err_im);
  if (err_re > 1e-10 || err_im > 1e-10) throw NumericalError("weighted_average_check: quadrature did not converge");

  WeightedAverageReport r;
  r.numeric = std::hypot(re, im);
  r.analytic = kC1 * std::exp(-dG * dG * T * T / 16.0);
  const double x = dG * T;
  r.uniform = x == 0.0 ? 1.0 : std::abs(std::sin(x / 2.0) / (x / 2.0));
  // |1 + e^{i dG t}|^2 = 2 + 2 cos(dG t)
  r.uniform_positive = 2.0 + 2.0 * (x == 0.0 ? 1.0 : std::sin(x) / x);
  double err_pos = 0.0;
  r.weighted_positive = gauss_kronrod<double, 61>::integrate(
      [&](double t) { return weight(t) * (2.0 + 2.0 * std::cos(dG * t)); }, lo, hi, 25, 1e-14, &err_pos);
  r.matches = std::abs(r.numeric - r.analytic) <= 1e-8;
  r.uniform_below = r.uniform <= r.analytic;
  r.positive_below = r.uniform_positive <= r.weighted_positive + 1e-12;
  return r;
}

double histogram_n_max(const SpectralSystem& sys) {
  const int bins = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(sys.dim()))));
  return density_of_states(sys, std::max(bins, 2)).n_max;
}

double timescale_estimate(const SpectralSystem& sys, const StateSP& state, double target_eps, double n_max) {
  detail::require(target_eps > 0.0, "timescale_estimate: target must be positive");
  const GapStructure gaps = gap_structure(sys);
  const double d_eff = effective_dimension(sys, state);
  const double eps2 = target_eps * target_eps;
  const double floor = kC1 * gaps.max_gap_degeneracy / d_eff;
  if (floor >= eps2)
    throw PreconditionError("timescale_estimate: bound cannot certify equilibration (c1 D_G / d_eff = " +
                            std::to_string(floor) + " >= target^2)");
  return kC1 * kC2 * n_max * static_cast<double>(sys.dim()) / (d_eff * eps2 - kC1 * gaps.max_gap_degeneracy);
}

std::vector<BoundCase> box_bound_cases(int N, std::span<const double> T_units) {
  BoxConfig cfg;
  cfg.N = N;
  const BoxState state = sigma0(cfg);
  const BoxSeries series(cfg, state.cutoff);
  const GapStructure gaps = gap_structure(state.sys);
  BoundInputs in;
  in.d = state.cutoff;
  in.d_eff = effective_dimension(state.sys, state.sigma);
  in.D_G = gaps.max_gap_degeneracy;
  in.n_d = gaps.max_level_degeneracy;
  in.n_max = 1.0 / (2.0 * cfg.nu());  // dn/dE of E = nu n^2 at n = 1
  std::vector<BoundCase> out;
  for (double units : T_units) {
    BoundCase c;
    c.label = "box N=" + std::to_string(N);
    c.T = units / cfg.nu();
    in.T = c.T;
    c.measured = series.mean_square(c.T);
    c.bound = deviation_bound(in);
    c.ok = c.measured <= c.bound.bound_value;
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<BoundCase> ring_bound_cases(int L, std::span<const double> T_units) {
  const HoppingModel model = HoppingModel::ring(L);
  const SpectralSystem sys = model.spectrum();
  CVec site = CVec::Zero(L);
  site[0] = 1.0;
  const StateSP state = StateSP::pure(site);
  const ExpectationSeries series(sys, state, Observable(CMat(site * site.adjoint())));
  const GapStructure gaps = gap_structure(sys);
  BoundInputs in;
  in.d = L;
  in.d_eff = effective_dimension(sys, state);
  in.D_G = gaps.max_gap_degeneracy;
  in.n_d = gaps.max_level_degeneracy;
  in.n_max = histogram_n_max(sys);
  std::vector<BoundCase> out;
  for (double T : T_units) {
    BoundCase c;
    c.label = "ring L=" + std::to_string(L);
    c.T = T;
    in.T = T;
    const auto grid = uniform_grid(0.0, T, min_average_samples(T, gaps.max_gap));
    auto dev = series.deviations(grid);
    for (double& v : dev) v *= v;
    c.measured = trapezoid_mean(dev);
    c.bound = deviation_bound(in);
    c.ok = c.measured <= c.bound.bound_value;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace qgas
