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

#include <cmath>
#include <vector>

#include "doctest.h"

#include "../support/random_instances.hpp"
#include "qgas/bounds.hpp"
#include "qgas/fermi_box.hpp"
#include "qgas/lattice.hpp"

using namespace qgas;

TEST_CASE("effective_dimension") {
  const auto sys = SpectralSystem::from_energies(RVec::LinSpaced(6, 0.0, 5.0));
  CVec e = CVec::Zero(6);
  e[2] = 1.0;
  CHECK(effective_dimension(sys, StateSP::pure(e)) == doctest::Approx(1.0));
  const CVec flat = CVec::Constant(6, 1.0 / std::sqrt(6.0));
  CHECK(effective_dimension(sys, StateSP::pure(flat)) == doctest::Approx(6.0));

  BoxConfig cfg;
  cfg.N = 10;
  const BoxState s = sigma0(cfg);
  // Occupation form: N orthonormal modes each holding one fermion.
  const CMat modes = s.sigma.vectors();
  const auto ens = make_ensemble(Statistics::fermion, modes, RVec::Ones(modes.cols()));
  CHECK(effective_dimension(s.sys, s.sigma) == doctest::Approx(effective_dimension(s.sys, ens)).epsilon(1e-10));
}

TEST_CASE("deviation_bound") {
  BoundInputs in;
  in.d = 100;
  in.d_eff = 10;
  in.D_G = 2;
  in.n_max = 3;
  in.T = 50;
  const auto r = deviation_bound(in);
  CHECK(r.bound_value == doctest::Approx(kC1 / 10.0 * (2.0 + kC2 * 3.0 * 100.0 / 50.0)));
  in.T = 100;
  CHECK(deviation_bound(in).time_term == doctest::Approx(r.time_term / 2.0));
  in.T = std::numeric_limits<double>::infinity();
  CHECK(deviation_bound(in).bound_value == doctest::Approx(kC1 * 2.0 / 10.0));
  in.T = -1.0;
  CHECK_THROWS_AS(deviation_bound(in), InputError);

  // d_eff = N, D_G = 1 reduces to the coarse-grained display.
  in.T = std::numeric_limits<double>::infinity();
  in.D_G = 1;
  in.d_eff = 40;
  CHECK(std::sqrt(deviation_bound(in).bound_value) == doctest::Approx(coarse_grained_bound(1, 1, 40.0)));
}

TEST_CASE("weighted_average_check") {
  CHECK(weighted_average_check(0.0, 3.0).analytic == doctest::Approx(std::numbers::e * std::sqrt(std::numbers::pi) / 2.0));
  CHECK(kC1 == doctest::Approx(2.4089).epsilon(1e-4));
  const auto r = weighted_average_check(2.0, 4.0);
  CHECK(r.analytic == doctest::Approx(kC1 * std::exp(-4.0)));
  CHECK(std::abs(r.numeric - r.analytic) < 1e-10);
  CHECK(r.matches);
  CHECK(r.positive_below);
  CHECK(weighted_average_check(0.3, 1.0).uniform_below);
}

TEST_CASE("timescale_estimate") {
  const auto sys = SpectralSystem::from_energies(RVec::LinSpaced(8, 0.0, 7.0) + RVec::LinSpaced(8, 0.0, 7.0).array().square().matrix() * 0.01);
  const CVec flat = CVec::Constant(8, 1.0 / std::sqrt(8.0));
  const auto state = StateSP::pure(flat);
  const auto g = gap_structure(sys);
  const double d_eff = effective_dimension(sys, state);
  const double eps = std::sqrt(2.0 * kC1 * g.max_gap_degeneracy / d_eff);
  CHECK(timescale_estimate(sys, state, eps, 1.5) == doctest::Approx(kC1 * kC2 * 1.5 * 8.0 / (kC1 * g.max_gap_degeneracy)));
  CHECK_THROWS_AS(timescale_estimate(sys, state, 0.5 * std::sqrt(kC1 * g.max_gap_degeneracy / d_eff), 1.5),
                  PreconditionError);
}

TEST_CASE("hopping ring: time needed for a fixed time term grows linearly with L") {
  // Truncated n_max, d = L and d_eff of a site-localized state, as in the lattice bound.
  auto needed = [](int L) {
    const HoppingModel model = HoppingModel::ring(L);
    CVec site = CVec::Zero(L);
    site[0] = 1.0;
    BoundInputs in;
    in.d = L;
    in.d_eff = effective_dimension(model.spectrum(), StateSP::pure(site));
    in.n_max = truncated_dos(model).n_max;
    in.T = 1.0;
    return deviation_bound(in).time_term / 0.01;
  };
  const double t1 = needed(100);
  const double t2 = needed(200);
  const double t4 = needed(400);
  CHECK(t2 / t1 == doctest::Approx(2.0).epsilon(0.05));
  CHECK(t4 / t2 == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("box and ring bound cases hold") {
  const std::vector<double> Ts{10.0, 100.0, 1000.0};
  for (const auto& c : box_bound_cases(10, Ts)) CHECK(c.ok);
  for (const auto& c : ring_bound_cases(51, Ts)) CHECK(c.ok);
}
