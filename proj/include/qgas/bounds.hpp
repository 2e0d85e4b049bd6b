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

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "qgas/bridge.hpp"
#include "qgas/common.hpp"
#include "qgas/spectral.hpp"

namespace qgas {

/// 1 / sum_E (tr[sigma P_E])^2 over eps-clustered levels.
double effective_dimension(const SpectralSystem& sys, const StateSP& state, double eps_gap = kDefaultGapTolerance);
/// Same quantity from mode occupations: 1 / sum_E (n_E / N)^2.
double effective_dimension(const SpectralSystem& sys, const ModeEnsemble& ensemble,
                           double eps_gap = kDefaultGapTolerance);

struct BoundInputs {
  double d = 0.0;
  double d_eff = 1.0;
  int D_G = 1;
  int n_d = 1;
  double n_max = 0.0;
  double T = std::numeric_limits<double>::infinity();
};

struct BoundReport {
  BoundInputs inputs;
  double c1 = kC1;
  double c2 = kC2;
  double degeneracy_term = 0.0;  // c1 D_G / d_eff
  double time_term = 0.0;        // c1 c2 n_max d / (d_eff T)
  double bound_value = 0.0;
};

/// Upper bound on the time-averaged squared deviation: (c1/d_eff)(D_G + c2 n_max d / T).
BoundReport deviation_bound(const BoundInputs& in);

/// sqrt(c1 n_d D_G / N)
double coarse_grained_bound(int n_d, int D_G, double N);

struct WeightedAverageReport {
  double numeric = 0.0;   // |(e/T) int exp(-4(t-T/2)^2/T^2) exp(i dG t) dt| over the real line
  double analytic = 0.0;  // c1 exp(-dG^2 T^2 / 16)
  double uniform = 0.0;   // |(1/T) int_0^T exp(i dG t) dt|
  /// Same comparison for the non-negative signal |1 + exp(i dG t)|^2.
  double uniform_positive = 0.0;
  double weighted_positive = 0.0;
  bool matches = false;         // |numeric - analytic| <= 1e-8
  bool uniform_below = false;   // uniform <= analytic
  bool positive_below = false;  // uniform_positive <= weighted_positive
};

WeightedAverageReport weighted_average_check(double dG, double T);

/// n_max from a ceil(sqrt(d))-bin histogram of the spectrum.
double histogram_n_max(const SpectralSystem& sys);

/// Smallest T at which deviation_bound reaches target_eps^2. Throws PreconditionError when the
/// degeneracy term alone is already too large.
double timescale_estimate(const SpectralSystem& sys, const StateSP& state, double target_eps, double n_max);

struct BoundCase {
  std::string label;
  double T = 0.0;
  double measured = 0.0;  // time-averaged squared deviation on [0, T]
  BoundReport bound;
  bool ok = false;
};

/// Fermion box, T given in units of 1/nu.
std::vector<BoundCase> box_bound_cases(int N, std::span<const double> T_units);
/// One particle starting on site 0 of a ring, counted on site 0; T in hopping units.
std::vector<BoundCase> ring_bound_cases(int L, std::span<const double> T_units);

}  // namespace qgas
