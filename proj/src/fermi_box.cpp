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

#include "qgas/fermi_box.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <unsupported/Eigen/FFT>

namespace qgas {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

double BoxConfig::nu() const { return kPi * kPi / (2.0 * mass * L * L); }

void validate(const BoxConfig& cfg) {
  detail::require(cfg.L > 0.0 && cfg.mass > 0.0, "BoxConfig: L and mass must be positive");
  detail::require(cfg.N >= 1, "BoxConfig: N must be at least 1");
  detail::require(cfg.a > 0.0 && cfg.a < 1.0, "BoxConfig: a must lie in (0, 1)");
  detail::require(cfg.samples >= 2, "BoxConfig: need at least two samples");
  detail::require(cfg.K_cutoff >= 0, "BoxConfig: K_cutoff must be non-negative");
  detail::require(cfg.basis_cutoff == 0 || cfg.basis_cutoff >= 2 * cfg.N, "BoxConfig: basis_cutoff must be >= 2N");
}

double overlap_f(int n, int m) {
  detail::require(n >= 1 && m >= 1, "overlap_f: quantum numbers start at 1");
  if (n == m) return 0.5;
  const int d = n - m;
  const int s = n + m;
  // sin(j pi / 2) for integer j
  auto sin_half = [](int j) {
    const int r = ((j % 4) + 4) % 4;
    return r == 1 ? 1.0 : (r == 3 ? -1.0 : 0.0);
  };
  return (sin_half(d) / d - sin_half(s) / s) / kPi;
}

double overlap_f_squared(int n, int k) {
  detail::require(n >= 1 && k >= 1, "overlap_f_squared: quantum numbers start at 1");
  if (n % 2 == 0) return n == 2 * k ? 0.25 : 0.0;
  const double q = static_cast<double>(n) * n - 4.0 * k * k;
  return 4.0 / (kPi * kPi) * 4.0 * k * k / (q * q);
}

double truncation_weight(const BoxConfig& cfg, int cutoff) {
  // The highest occupied mode has the widest momentum spread, but check every one.
  double worst = 0.0;
  for (int k = 1; k <= cfg.components(); ++k) {
    double kept = 0.0;
    for (int n = 1; n <= cutoff; ++n) kept += 2.0 * overlap_f_squared(n, k);
    worst = std::max(worst, 1.0 - kept);
  }
  return worst;
}

int auto_basis_cutoff(const BoxConfig& cfg) {
  int lo = std::max(8 * cfg.N, 2 * cfg.N);
  if (truncation_weight(cfg, lo) <= kBoxTruncationBudget) return lo;
  int hi = lo;
  while (truncation_weight(cfg, hi) > kBoxTruncationBudget) {
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    (truncation_weight(cfg, mid) <= kBoxTruncationBudget ? hi : lo) = mid;
  }
  return hi;
}

int resolved_cutoff(const BoxConfig& cfg) {
  validate(cfg);
  if (cfg.basis_cutoff == 0) return auto_basis_cutoff(cfg);
  const double w = truncation_weight(cfg, cfg.basis_cutoff);
  if (w > kBoxTruncationBudget)
    throw InputError("box basis: truncation weight " + std::to_string(w) + " exceeds 1e-6 at cutoff " +
                     std::to_string(cfg.basis_cutoff) + "; increase basis_cutoff (at least " +
                     std::to_string(auto_basis_cutoff(cfg)) + ")");
  return cfg.basis_cutoff;
}

BoxState sigma0(const BoxConfig& cfg) {
  const int cutoff = resolved_cutoff(cfg);
  const int nc = cfg.components();
  CMat v = CMat::Zero(cutoff, nc);
  for (int k = 1; k <= nc; ++k)
    for (int n = 1; n <= cutoff; ++n) v(n - 1, k - 1) = std::sqrt(2.0) * overlap_f(n, 2 * k);

  RVec norms(nc);
  for (int k = 0; k < nc; ++k) norms[k] = v.col(k).squaredNorm();

  // Symmetric orthonormalization removes the truncation defect with the smallest change.
  Eigen::SelfAdjointEigenSolver<CMat> gram(v.adjoint() * v);
  v = v * gram.operatorInverseSqrt();

  RVec energies(cutoff);
  for (int n = 1; n <= cutoff; ++n) energies[n - 1] = cfg.nu() * n * n;
  auto sys = SpectralSystem::from_energies(std::move(energies), "box");
  StateSP sigma = nc == 1 ? StateSP::pure(v.col(0)) : StateSP::mixed(RVec::Constant(nc, 1.0 / nc), std::move(v));
  return {std::move(sys), std::move(sigma), cutoff, truncation_weight(cfg, cutoff), std::move(norms)};
}

Observable left_half_observable(int cutoff) {
  detail::require(cutoff >= 1, "left_half_observable: cutoff must be positive");
  CMat p(cutoff, cutoff);
  for (int n = 1; n <= cutoff; ++n)
    for (int m = 1; m <= cutoff; ++m) p(n - 1, m - 1) = overlap_f(n, m);
  return Observable(std::move(p));
}

// ---------------------------------------------------------------------------

BoxSeries::BoxSeries(const BoxConfig& cfg, int n_max, int band) : nu_(cfg.nu()) {
  validate(cfg);
  detail::require(n_max >= 1, "BoxSeries: n_max must be positive");
  const int nc = cfg.components();
  scale_ = 2.0 / nc;
  std::map<long long, double> acc;
  for (int k = 1; k <= nc; ++k)
    for (int n = 1; n <= n_max; n += 2) {
      if (band > 0 && std::abs(n - 2 * k) > band) continue;
      const long long q = std::llabs(static_cast<long long>(n) * n - 4LL * k * k);
      acc[q] += overlap_f_squared(n, k);
    }
  freq_.reserve(acc.size());
  weight_.reserve(acc.size());
  for (const auto& [q, w] : acc) {
    freq_.push_back(q);
    weight_.push_back(w);
  }
}

double BoxSeries::value(double t) const {
  const double theta = nu_ * t;
  double f = 0.0;
  for (std::size_t i = 0; i < freq_.size(); ++i) f += weight_[i] * std::cos(static_cast<double>(freq_[i]) * theta);
  return scale_ * std::abs(f);
}

std::vector<double> BoxSeries::half_period_grid(std::size_t samples) const {
  detail::require(samples >= 2, "half_period_grid: need at least two samples");
  // On theta_j = pi j / (S-1) every cos(q theta_j) depends only on q mod 2(S-1).
  const std::size_t period = 2 * (samples - 1);
  std::vector<double> folded(period, 0.0);
  for (std::size_t i = 0; i < freq_.size(); ++i)
    folded[static_cast<std::size_t>(freq_[i] % static_cast<long long>(period))] += weight_[i];
  std::vector<double> table(period);
  for (std::size_t j = 0; j < period; ++j)
    table[j] = std::cos(kPi * static_cast<double>(j) / static_cast<double>(samples - 1));

  std::vector<double> out(samples, 0.0);
  for (std::size_t r = 0; r < period; ++r) {
    if (folded[r] == 0.0) continue;
    std::size_t idx = 0;
    for (std::size_t j = 0; j < samples; ++j) {
      out[j] += folded[r] * table[idx];
      idx += r;
      if (idx >= period) idx %= period;
    }
  }
  for (double& v : out) v = scale_ * std::abs(v);
  return out;
}

void BoxSeries::build_correlations() const {
  if (!autocorr_.empty()) return;
  const auto q_max = static_cast<std::size_t>(freq_.back());
  std::size_t size = 1;
  while (size < 2 * q_max + 2) size <<= 1;
  std::vector<Complex> w(size, 0.0), spectrum;
  for (std::size_t i = 0; i < freq_.size(); ++i) w[static_cast<std::size_t>(freq_[i])] = weight_[i];
  Eigen::FFT<double> fft;
  fft.fwd(spectrum, w);
  std::vector<Complex> prod(size), back;
  for (std::size_t i = 0; i < size; ++i) prod[i] = std::norm(spectrum[i]);
  fft.inv(back, prod);
  autocorr_.resize(q_max + 1);
  for (std::size_t d = 0; d <= q_max; ++d) autocorr_[d] = back[d].real();
  for (std::size_t i = 0; i < size; ++i) prod[i] = spectrum[i] * spectrum[i];
  fft.inv(back, prod);
  selfconv_.resize(2 * q_max + 1);
  for (std::size_t s = 0; s <= 2 * q_max; ++s) selfconv_[s] = back[s].real();
}

double BoxSeries::mean_square(double T) const {
  detail::require(T > 0.0, "mean_square: T must be positive");
  build_correlations();
  const double theta = nu_ * T;
  // F^2 = (1/2)[A_0 + 2 sum_d A_d cos(d th) + sum_s B_s cos(s th)], integrated termwise.
  double integral = autocorr_[0] * theta;
  for (std::size_t d = 1; d < autocorr_.size(); ++d)
    integral += 2.0 * autocorr_[d] * std::sin(static_cast<double>(d) * theta) / static_cast<double>(d);
  for (std::size_t s = 1; s < selfconv_.size(); ++s)
    integral += selfconv_[s] * std::sin(static_cast<double>(s) * theta) / static_cast<double>(s);
  integral *= 0.5;
  return scale_ * scale_ * integral / theta;
}

double distinguishability_closed_form(const BoxConfig& cfg, double t) { return BoxSeries(cfg).value(t); }

BoxSpectralRoute::BoxSpectralRoute(const BoxConfig& cfg)
    : state_(sigma0(cfg)), series_(state_.sys, state_.sigma, left_half_observable(state_.cutoff)) {}

double BoxSpectralRoute::value(double t) const { return std::abs(series_.value(t).real() - stationary()); }

std::vector<double> BoxSpectralRoute::values(std::span<const double> times) const {
  const auto v = series_.values(times);
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::abs(v[i].real() - stationary());
  return out;
}

// ---------------------------------------------------------------------------

double box_mu(int N, int K) {
  detail::require(N >= 1 && K >= 1, "box_mu: N and K must be positive");
  return 16.0 / (kPi * kPi * (K + 1)) + 6.0 / (kPi * kPi) * (std::log(N) + 1.0) * (std::log(K) + 1.0) / N;
}

double box_time_average_bound(int N, double a, int K) {
  const double x = kPi * N * a;
  return 4.0 / (3.0 * x) + 2.0 * std::log(x / 2.0) / (3.0 * N) + box_mu(N, K);
}

TimeAverageReport time_average_D(const BoxConfig& cfg) {
  const auto grid = BoxSeries(cfg).half_period_grid(static_cast<std::size_t>(cfg.samples));
  TimeAverageReport r;
  r.mean = trapezoid_mean(grid);
  r.mu = box_mu(cfg.N, cfg.K());
  r.bound = box_time_average_bound(cfg.N, cfg.a, cfg.K());
  r.within_bound = r.mean <= r.bound;
  return r;
}

EquilibrationTimeReport equilibration_time(const BoxConfig& cfg) {
  validate(cfg);
  EquilibrationTimeReport r;
  r.T_eq = 1.0 / (2.0 * cfg.N * cfg.a * cfg.nu());
  r.T_eq_loose = 2.0 * r.T_eq;
  r.bound = kPi * cfg.a / 3.0 + box_mu(cfg.N, cfg.K());
  r.D_at_T_eq = BoxSeries(cfg).value(r.T_eq);
  r.certified = r.D_at_T_eq <= r.bound;
  return r;
}

ThreeDReduction three_d_reduction(const BoxConfig& cfg3d) {
  detail::require(cfg3d.N >= 1, "three_d_reduction: N must be positive");
  const int j = static_cast<int>(std::lround(std::cbrt(static_cast<double>(cfg3d.N))));
  if (j * j * j != cfg3d.N) throw InputError("three_d_reduction: N = " + std::to_string(cfg3d.N) + " is not a perfect cube");
  ThreeDReduction r;
  r.J_max = j;
  r.equivalent = cfg3d;
  r.equivalent.N = j;
  r.equivalent.basis_cutoff = 0;
  validate(r.equivalent);
  r.T_eq = 1.0 / (2.0 * j * cfg3d.a * cfg3d.nu());
  return r;
}

ScanResult scan_N(const BoxConfig& base, std::span<const int> Ns) {
  ScanResult out;
  std::vector<double> x;
  for (int n : Ns) {
    BoxConfig cfg = base;
    cfg.N = n;
    cfg.basis_cutoff = 0;
    out.N.push_back(n);
    out.mean_D.push_back(time_average_D(cfg).mean);
    x.push_back(n);
  }
  if (out.N.size() >= 2) out.fit = fit_power_law(x, out.mean_D);
  return out;
}

}  // namespace qgas
