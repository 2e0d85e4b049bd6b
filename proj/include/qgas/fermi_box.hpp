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
#include <vector>

#include "qgas/common.hpp"
#include "qgas/fit.hpp"
#include "qgas/spectral.hpp"

namespace qgas {

/// N particles released from the left half [0, L/2] of a box [0, L].
struct BoxConfig {
  double L = 1.0;
  double mass = 1.0;
  int N = 10;
  Statistics statistics = Statistics::fermion;
  int basis_cutoff = 0;  // box eigenstates kept; 0 picks the smallest cutoff >= 8N meeting the budget
  int K_cutoff = 0;      // 0 means K = N
  double a = 0.05;
  int samples = 4096;

  double nu() const;  // pi^2 / (2 m L^2)
  double recurrence_time() const { return 2.0 * std::numbers::pi / nu(); }
  int K() const { return K_cutoff > 0 ? K_cutoff : N; }
  /// Number of occupied left-half modes: N for fermions, 1 for bosons.
  int components() const { return statistics == Statistics::fermion ? N : 1; }
};

inline constexpr double kBoxTruncationBudget = 1e-6;

void validate(const BoxConfig& cfg);

/// <n|P_left|m> for box eigenstates n, m >= 1.
double overlap_f(int n, int m);
/// f(n, 2k)^2 for odd n, in rational form.
double overlap_f_squared(int n, int k);

/// Largest weight of an occupied left-half mode outside the first `cutoff` box states.
double truncation_weight(const BoxConfig& cfg, int cutoff);
int auto_basis_cutoff(const BoxConfig& cfg);
int resolved_cutoff(const BoxConfig& cfg);

struct BoxState {
  SpectralSystem sys;
  StateSP sigma;
  int cutoff = 0;
  double truncation_weight = 0.0;
  RVec component_norms;  // sum_n 2 f(n,2k)^2 before orthonormalization
};

/// Initial single-particle state in the box eigenbasis (index n-1 holds state n).
BoxState sigma0(const BoxConfig& cfg);

/// Left-half projector compressed onto the first `cutoff` box states.
Observable left_half_observable(int cutoff);

/// D(t) = (2/n_c) |sum_{n odd} sum_k cos((n^2 - 4k^2) nu t) f(n,2k)^2| with n <= n_max.
/// A positive `band` keeps only |n - 2k| <= band.
class BoxSeries {
 public:
  BoxSeries(const BoxConfig& cfg, int n_max, int band = 0);
  explicit BoxSeries(const BoxConfig& cfg) : BoxSeries(cfg, resolved_cutoff(cfg)) {}

  double value(double t) const;
  /// D on `samples` points covering [0, T_rec/2], both ends included.
  std::vector<double> half_period_grid(std::size_t samples) const;
  /// (1/T) int_0^T D(t)^2 dt, exact for the truncated series.
  double mean_square(double T) const;
  double nu() const { return nu_; }

 private:
  void build_correlations() const;

  double nu_;
  double scale_;
  std::vector<long long> freq_;  // |n^2 - 4k^2|, distinct and ascending
  std::vector<double> weight_;
  mutable std::vector<double> autocorr_;
  mutable std::vector<double> selfconv_;
};

double distinguishability_closed_form(const BoxConfig& cfg, double t);

/// Same quantity through the spectral route (sigma0, compressed projector, dephasing).
class BoxSpectralRoute {
 public:
  explicit BoxSpectralRoute(const BoxConfig& cfg);
  double value(double t) const;
  std::vector<double> values(std::span<const double> times) const;
  const BoxState& state() const { return state_; }
  double stationary() const { return series_.stationary().real(); }

 private:
  BoxState state_;
  ExpectationSeries series_;
};

/// Tail constant of the cutoff argument.
double box_mu(int N, int K);
double box_time_average_bound(int N, double a, int K);

struct TimeAverageReport {
  double mean = 0.0;
  double bound = 0.0;
  double mu = 0.0;
  bool within_bound = false;
};

/// Trapezoid mean of D over [0, T_rec/2] on cfg.samples points.
TimeAverageReport time_average_D(const BoxConfig& cfg);

struct EquilibrationTimeReport {
  double T_eq = 0.0;        // 1 / (2 N a nu)
  double T_eq_loose = 0.0;  // 1 / (N a nu)
  double bound = 0.0;       // pi a / 3 + mu
  double D_at_T_eq = 0.0;
  bool certified = false;
};

EquilibrationTimeReport equilibration_time(const BoxConfig& cfg);

struct ThreeDReduction {
  int J_max = 0;
  BoxConfig equivalent;
  double T_eq = 0.0;
};

/// N = J^3 fermions filling the lowest modes of a cubic half box reduce to J fermions in 1D.
ThreeDReduction three_d_reduction(const BoxConfig& cfg3d);

struct ScanResult {
  std::vector<int> N;
  std::vector<double> mean_D;
  PowerLawFit fit;
};

ScanResult scan_N(const BoxConfig& base, std::span<const int> Ns);

}  // namespace qgas
