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

#include "qgas/boson_quench.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace qgas {

namespace {

constexpr double kPi = std::numbers::pi;

template <class F>
double integrate(F f, double a, double b, double tol) {
  double err = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, tol, &err, &l1);
  // Cancellation makes some overlaps small next to the integrand, so judge against its L1 norm.
  if (!(err <= 1e3 * tol * std::max(1.0, l1)))
    throw NumericalError("quadrature did not converge (error estimate " + format_double(err / std::max(1.0, l1)) +
                         " relative to the L1 norm)");
  return value;
}

// Bisection for the first crossing below `level` inside [lo, hi], f(lo) >= level > f(hi).
template <class F>
double bisect(F f, double lo, double hi, double level, double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < level ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

void validate(const HarmonicQuench& cfg) {
  detail::require(cfg.mass > 0.0 && cfg.omega0 > 0.0, "HarmonicQuench: mass and omega0 must be positive");
  detail::require(cfg.gamma > 0.0, "HarmonicQuench: gamma must be positive");
  detail::require(cfg.l2 >= 0.0, "HarmonicQuench: l2 must be non-negative");
}

double alpha(const HarmonicQuench& cfg, double t) {
  validate(cfg);
  const double s = std::sin(cfg.omega() * t);
  const double c = std::cos(cfg.omega() * t);
  return cfg.mass * cfg.omega0 / (cfg.gamma * cfg.gamma * s * s + c * c);
}

double erf_approx(double x) {
  const double x2 = x * x;
  const double e = std::exp(-x2 * (4.0 / kPi + kErfApproxB * x2) / (1.0 + kErfApproxB * x2));
  return std::copysign(std::sqrt(1.0 - e), x);
}

double central_mass_closed_form(const HarmonicQuench& cfg, double t) {
  return erf_approx(std::sqrt(alpha(cfg, t) * cfg.window_l2()));
}

double central_mass_numeric(const HarmonicQuench& cfg, double t) {
  validate(cfg);
  // psi(x,t) ~ exp(-m omega b(t) x^2 / 2) with b(0) = gamma.
  const double w = cfg.omega();
  const Complex b = (cfg.gamma * std::cos(w * t) + kI * std::sin(w * t)) / (std::cos(w * t) + kI * cfg.gamma * std::sin(w * t));
  const double a = cfg.mass * w * b.real();
  const double l = std::sqrt(cfg.window_l2());
  const double inside = integrate([a](double x) { return std::exp(-a * x * x); }, -l, l, 1e-14);
  return inside / std::sqrt(kPi / a);
}

QuenchTimescale quench_equilibration_time(const HarmonicQuench& cfg, double p) {
  validate(cfg);
  detail::require(p > 0.0 && p < 1.0, "quench_equilibration_time: p must lie in (0, 1)");
  QuenchTimescale r;
  r.formula = 4.0 / (std::sqrt(kPi) * cfg.omega0 * p);

  const double period = kPi / cfg.omega();
  constexpr std::size_t kGrid = 4096;
  auto mass = [&cfg](double t) { return central_mass_closed_form(cfg, t); };
  double prev_t = 0.0;
  for (std::size_t i = 1; i < kGrid; ++i) {
    const double t = period * static_cast<double>(i) / static_cast<double>(kGrid - 1);
    if (mass(t) < p) {
      r.measured = bisect(mass, prev_t, t, p, 1e-10);
      r.equilibrates = true;
      break;
    }
    prev_t = t;
  }
  return r;
}

TimeSeries harmonic_series(const HarmonicQuench& cfg, double T, std::size_t samples) {
  const auto grid = uniform_grid(0.0, T, samples);
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = central_mass_closed_form(cfg, grid[i]);
  return TimeSeries(0.0, T, std::move(v), "harmonic quench gamma=" + std::to_string(cfg.gamma));
}

int count_local_minima(const std::vector<double>& values) {
  int count = 0;
  for (std::size_t i = 1; i + 1 < values.size(); ++i)
    if (values[i] < values[i - 1] && values[i] < values[i + 1]) ++count;
  return count;
}

// ---------------------------------------------------------------------------

std::vector<std::string> validate(const SquareWellQuench& cfg) {
  detail::require(cfg.mass > 0.0 && cfg.omega0 > 0.0 && cfg.L > 0.0, "SquareWellQuench: parameters must be positive");
  detail::require(cfg.modes >= 2, "SquareWellQuench: need at least two modes");
  std::vector<std::string> warnings;
  if (cfg.sigma_wave() / cfg.L > 0.1)
    warnings.push_back("wave packet width " + std::to_string(cfg.sigma_wave() / cfg.L) +
                       " L is not small compared with the box");
  return warnings;
}

namespace {

double central_overlap(int n, int m) {
  // (2/pi) int_{pi/4}^{3pi/4} sin(n u) sin(m u) du
  auto g = [](int k) {
    if (k == 0) return kPi / 2.0;
    return (std::sin(k * 3.0 * kPi / 4.0) - std::sin(k * kPi / 4.0)) / k;
  };
  return (g(n - m) - g(n + m)) / kPi;
}

ExpectationSeries build_square_well(const SquareWellQuench& cfg, double& leakage) {
  validate(cfg);
  const double mw = cfg.mass * cfg.omega0;
  const double norm = std::pow(mw / kPi, 0.25);
  const double half = std::min(cfg.L / 2.0, 12.0 / std::sqrt(mw));
  const double k0 = kPi / cfg.L;

  // Even box modes are odd about the centre and do not overlap the Gaussian.
  std::vector<int> ns;
  for (int n = 1; n <= cfg.modes; n += 2) ns.push_back(n);
  const auto d = static_cast<Eigen::Index>(ns.size());
  CVec c(d);
  RVec energies(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const int n = ns[static_cast<std::size_t>(i)];
    c[i] = integrate(
        [&](double x) {
          return std::sqrt(2.0 / cfg.L) * std::sin(n * k0 * (x + cfg.L / 2.0)) * norm * std::exp(-mw * x * x / 2.0);
        },
        -half, half, 1e-10);
    energies[i] = cfg.nu() * n * n;
  }
  leakage = std::max(0.0, 1.0 - c.squaredNorm());
  if (leakage > kSquareWellLeakageBudget)
    throw InputError("square well: basis leakage " + std::to_string(leakage) + " exceeds 1e-6; raise modes");
  c.normalize();

  CMat p(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) p(i, j) = central_overlap(ns[static_cast<std::size_t>(i)], ns[static_cast<std::size_t>(j)]);
  const auto sys = SpectralSystem::from_energies(std::move(energies), "square well");
  return ExpectationSeries(sys, StateSP::pure(c), Observable(std::move(p)));
}

}  // namespace

SquareWellModel::SquareWellModel(const SquareWellQuench& cfg) : cfg_(cfg), series_(build_square_well(cfg, leakage_)) {}

double SquareWellModel::value(double t) const { return std::abs(series_.value(t).real() - stationary()); }

std::vector<double> SquareWellModel::values(std::span<const double> times) const {
  const auto v = series_.values(times);
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::abs(v[i].real() - stationary());
  return out;
}

TimeSeries SquareWellModel::series(double T, std::size_t samples) const {
  const auto grid = uniform_grid(0.0, T, samples);
  return TimeSeries(0.0, T, values(grid), "square well sigma/L=" + std::to_string(cfg_.sigma_wave() / cfg_.L));
}

double SquareWellModel::time_average(std::size_t samples) const {
  const auto grid = uniform_grid(0.0, cfg_.signal_period(), samples);
  return trapezoid_mean(values(grid));
}

double SquareWellModel::half_relaxation_time(std::size_t samples) const {
  const auto grid = uniform_grid(0.0, cfg_.signal_period(), samples);
  const auto v = values(grid);
  const double level = 0.5 * (v.front() + trapezoid_mean(v));
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] <= level)
      return bisect([this](double t) { return value(t); }, grid[i - 1], grid[i], level,
                    1e-12 * cfg_.signal_period());
  throw NumericalError("square well: signal never relaxes to half its initial excess");
}

TimeSeries square_well_series(const SquareWellQuench& cfg, double T, std::size_t samples) {
  return SquareWellModel(cfg).series(T, samples);
}

SquareWellScaling square_well_scaling(const SquareWellQuench& base, int count, std::size_t samples) {
  detail::require(count >= 2, "square_well_scaling: need at least two widths");
  SquareWellScaling out;
  for (int i = 0; i < count; ++i) {
    SquareWellQuench cfg = base;
    const double sigma = 0.004 * std::pow(2.0, i / 2.0) * cfg.L;
    cfg.omega0 = 1.0 / (2.0 * cfg.mass * sigma * sigma);
    const SquareWellModel model(cfg);
    out.width_parameter.push_back(cfg.width_parameter());
    out.mean_D.push_back(model.time_average(samples));
    out.T_eq_measured.push_back(model.half_relaxation_time(samples));
    out.T_eq_predicted.push_back(cfg.predicted_T_eq());
  }
  out.fit = fit_power_law(out.width_parameter, out.mean_D);
  return out;
}

}  // namespace qgas
