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

#include <optional>
#include <string>
#include <vector>

#include "qgas/common.hpp"
#include "qgas/fit.hpp"
#include "qgas/spectral.hpp"
#include "qgas/timeseries.hpp"

namespace qgas {

/// Ground state of a trap with frequency omega0, released into a weaker trap omega0 / gamma.
struct HarmonicQuench {
  double mass = 1.0;
  double omega0 = 1.0;
  double gamma = 10.0;
  double l2 = 0.0;  // squared half-width of the counting window; 0 means 4 / (m omega0)

  double omega() const { return omega0 / gamma; }
  double window_l2() const { return l2 > 0.0 ? l2 : 4.0 / (mass * omega0); }
};

void validate(const HarmonicQuench& cfg);

inline constexpr double kErfApproxB = 0.147;
inline constexpr double kErfApproxMaxError = 1.2e-4;

/// Inverse squared width of |psi(x,t)|^2.
double alpha(const HarmonicQuench& cfg, double t);
/// sqrt(1 - exp(-x^2 (4/pi + b x^2) / (1 + b x^2))), the erf approximation.
double erf_approx(double x);
/// Probability inside [-l, l] through the erf approximation.
double central_mass_closed_form(const HarmonicQuench& cfg, double t);
/// Same probability by adaptive quadrature of the propagated Gaussian.
double central_mass_numeric(const HarmonicQuench& cfg, double t);

struct QuenchTimescale {
  double formula = 0.0;  // 4 / (sqrt(pi) omega0 p)
  std::optional<double> measured;  // first time the central mass falls below p
  bool equilibrates = false;
};

QuenchTimescale quench_equilibration_time(const HarmonicQuench& cfg, double p);

/// Central-mass series sampled on [0, T].
TimeSeries harmonic_series(const HarmonicQuench& cfg, double T, std::size_t samples);

/// Strict interior local minima of a sampled series.
int count_local_minima(const std::vector<double>& values);

/// Ground state of the omega0 trap released into a box [-L/2, L/2]; counts [-L/4, L/4].
struct SquareWellQuench {
  double mass = 1.0;
  double omega0 = 1.0;
  double L = 1.0;
  int modes = 400;

  double sigma_wave() const { return 1.0 / std::sqrt(2.0 * mass * omega0); }
  double nu() const { return std::numbers::pi * std::numbers::pi / (2.0 * mass * L * L); }
  /// Period of the central-region signal: only odd modes are populated.
  double signal_period() const { return 2.0 * std::numbers::pi / (8.0 * nu()); }
  /// sqrt(8 pi / (m omega0)) / L
  double width_parameter() const { return std::sqrt(8.0 * std::numbers::pi / (mass * omega0)) / L; }
  double predicted_T_eq() const { return L / std::numbers::pi * std::sqrt(mass / (2.0 * omega0)); }
};

/// Returns warnings (wide packet); throws on invalid parameters.
std::vector<std::string> validate(const SquareWellQuench& cfg);

inline constexpr double kSquareWellLeakageBudget = 1e-6;

class SquareWellModel {
 public:
  explicit SquareWellModel(const SquareWellQuench& cfg);

  const SquareWellQuench& config() const { return cfg_; }
  double leakage() const { return leakage_; }
  double initial_central_mass() const { return series_.initial().real(); }
  double stationary() const { return series_.stationary().real(); }
  double value(double t) const;  // D_P(psi(t), <psi>)
  std::vector<double> values(std::span<const double> times) const;
  /// D over one signal period.
  TimeSeries series(double T, std::size_t samples) const;
  double time_average(std::size_t samples = 4096) const;
  /// First time D falls to (D(0) + <D>) / 2.
  double half_relaxation_time(std::size_t samples = 4096) const;

 private:
  SquareWellQuench cfg_;
  double leakage_ = 0.0;
  ExpectationSeries series_;
};

TimeSeries square_well_series(const SquareWellQuench& cfg, double T, std::size_t samples);

struct SquareWellScaling {
  std::vector<double> width_parameter;
  std::vector<double> mean_D;
  std::vector<double> T_eq_measured;
  std::vector<double> T_eq_predicted;
  PowerLawFit fit;
};

/// Sweeps sigma_wave / L = 0.004 * 2^{i/2}, i = 0..count-1, at fixed L.
SquareWellScaling square_well_scaling(const SquareWellQuench& base, int count = 5, std::size_t samples = 4096);

}  // namespace qgas
