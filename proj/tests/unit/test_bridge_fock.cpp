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

#include <algorithm>
#include <vector>

#include "doctest.h"

#include "../support/random_instances.hpp"
#include "qgas/bridge.hpp"
#include "qgas/fock.hpp"

using namespace qgas;

namespace {

CMat unitary_at(const SpectralSystem& sys, double t) {
  const CVec phases = (sys.energies() * Complex(0.0, -t)).array().exp();
  return sys.eigenvectors() * phases.asDiagonal() * sys.eigenvectors().adjoint();
}

}  // namespace

TEST_CASE("make_ensemble validation") {
  CHECK_THROWS_AS(make_ensemble(Statistics::fermion, CMat::Identity(3, 2), RVec::Constant(2, 2.0)), InputError);
  CHECK_THROWS_AS(make_ensemble(Statistics::boson, CMat::Identity(3, 2), RVec::Constant(3, 1.0)), InputError);
  CMat skew = CMat::Identity(3, 2);
  skew(0, 1) = 0.5;
  CHECK_THROWS_AS(make_ensemble(Statistics::boson, skew, RVec::Constant(2, 1.0)), InputError);
}

TEST_CASE("reduce") {
  testing::Rng rng(11);
  SUBCASE("one particle counted in its own mode") {
    const CVec psi = testing::random_unitary(rng, 4).col(0);
    const auto ens = make_ensemble(Statistics::fermion, psi, RVec::Ones(1));
    const auto red = reduce(ens, ProjectorObservable(4, psi));
    CHECK(red.N * expectation_P(red.sigma, red.projector) == doctest::Approx(1.0));
  }
  SUBCASE("three bosons in one mode, orthogonal counter") {
    const CMat U = testing::random_unitary(rng, 4);
    const auto ens = make_ensemble(Statistics::boson, U.col(0), RVec::Constant(1, 3.0));
    const auto red = reduce(ens, ProjectorObservable(4, U.col(1)));
    CHECK(red.N * expectation_P(red.sigma, red.projector) == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("diagonalize_correlations") {
  SUBCASE("diagonal input keeps the modes") {
    CMat C = CMat::Zero(3, 3);
    C(0, 0) = 1.0;
    C(2, 2) = 1.0;
    const auto ens = diagonalize_correlations(CorrelationMatrix(C, Statistics::fermion), CMat::Identity(3, 3));
    CHECK(ens.integral);
    CHECK(ens.total() == doctest::Approx(2.0));
    CHECK(std::abs(std::abs(ens.modes(0, 0)) + std::abs(ens.modes(2, 0)) - 1.0) < 1e-12);
  }
  SUBCASE("one fermion in (|1> + |2>)/sqrt 2") {
    CMat C = CMat::Constant(2, 2, 0.5);
    const auto ens = diagonalize_correlations(CorrelationMatrix(C, Statistics::fermion), CMat::Identity(2, 2));
    CHECK(ens.occupations[0] == doctest::Approx(1.0));
    CHECK(ens.occupations[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(ens.modes(0, 0)) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(std::abs(ens.modes(0, 0) - ens.modes(1, 0)) < 1e-12);
  }
  SUBCASE("random thermal-like correlations become diagonal") {
    testing::Rng rng(12);
    for (int draw = 0; draw < 100; ++draw) {
      const CMat U = testing::random_unitary(rng, 5);
      RVec n(5);
      for (auto& x : n) x = testing::uniform_real(rng, 0.0, 1.0);
      const CMat C = U * n.cast<Complex>().asDiagonal() * U.adjoint();
      const auto ens = diagonalize_correlations(CorrelationMatrix(C, Statistics::fermion), CMat::Identity(5, 5));
      CHECK_FALSE(ens.integral);
      // Rotated correlations: M^dagger C^T M in the raw basis convention.
      const CMat rotated = ens.modes.adjoint() * C.transpose() * ens.modes;
      const CMat off = rotated - CMat(rotated.diagonal().asDiagonal());
      CHECK(off.cwiseAbs().maxCoeff() < 1e-10);
    }
  }
  SUBCASE("fermion occupations above one are rejected") {
    CHECK_THROWS_AS(diagonalize_correlations(CorrelationMatrix(CMat::Identity(2, 2) * 1.5, Statistics::fermion),
                                             CMat::Identity(2, 2)),
                    InputError);
  }
}

TEST_CASE("delta_M edge cases") {
  testing::Rng rng(13);
  const auto sys = SpectralSystem::from_hamiltonian(testing::random_hermitian(rng, 4));
  const auto stationary = make_ensemble(Statistics::fermion, sys.eigenvectors().leftCols(2), RVec::Ones(2));
  const auto P = testing::random_projector(rng, 4, 2);
  const auto ens = testing::random_ensemble(rng, Statistics::fermion, 4, 2);
  for (double t : {0.4, 3.0, 50.0}) {
    CHECK(delta_M(stationary, P, sys, t) < 1e-12);
    CHECK(delta_M(ens, ProjectorObservable::identity(4), sys, t) < 1e-12);
  }
}

TEST_CASE("Fock operator algebra") {
  for (Statistics s : {Statistics::fermion, Statistics::boson}) {
    const FockSpace space(s, 3, 3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const RMat& a = space.annihilation(i);
        const RMat& b = space.annihilation(j);
        const RMat bd = space.creation(j);
        if (s == Statistics::fermion) {
          const RMat anti = a * bd + bd * a;
          const RMat expect = (i == j ? 1.0 : 0.0) * RMat::Identity(space.dim(), space.dim());
          CHECK((anti - expect).cwiseAbs().maxCoeff() < 1e-12);
          CHECK((a * b + b * a).cwiseAbs().maxCoeff() < 1e-12);
        } else {
          CHECK((a * b - b * a).cwiseAbs().maxCoeff() < 1e-12);
          if (i == j) continue;
          // Truncation breaks [a_i, a_j^dagger] = 0 only where a_j^dagger hits the cap.
          const RMat comm = a * bd - bd * a;
          for (Eigen::Index col = 0; col < space.dim(); ++col) {
            const auto& occ = space.basis()[static_cast<std::size_t>(col)];
            int total = 0;
            for (int n : occ) total += n;
            if (total < space.max_total()) CHECK(comm.col(col).cwiseAbs().maxCoeff() < 1e-12);
          }
        }
      }
  }
  // Truncated boson space: [a, a^dagger] = 1 on states below the cap.
  const FockSpace bos(Statistics::boson, 1, 4);
  const RMat comm = bos.annihilation(0) * bos.creation(0) - bos.creation(0) * bos.annihilation(0);
  for (Eigen::Index k = 0; k + 1 < bos.dim(); ++k) CHECK(comm(k, k) == doctest::Approx(1.0));
}

TEST_CASE("FockSpace dimension cap") {
  CHECK_THROWS_AS(FockSpace(Statistics::boson, 8, 4), InputError);
  CHECK(FockSpace(Statistics::fermion, 12).dim() == 4096);
}

TEST_CASE("build_hamiltonian") {
  SUBCASE("diagonal single-particle system gives a diagonal many-body matrix") {
    RVec e(3);
    e << 0.2, 0.9, 1.4;
    const FockSpace space(Statistics::fermion, 3);
    const CMat H = build_hamiltonian(space, SpectralSystem::from_energies(e)).matrix;
    CHECK((H - CMat(H.diagonal().asDiagonal())).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("single mode") {
    RVec e(1);
    e << 0.7;
    const FockSpace space(Statistics::fermion, 1);
    const ManyBodyEvolution evo(build_hamiltonian(space, SpectralSystem::from_energies(e)));
    CHECK(evo.energies()[0] == doctest::Approx(0.0));
    CHECK(evo.energies()[1] == doctest::Approx(0.7));
  }
  SUBCASE("fermion spectrum is the set of subset sums") {
    testing::Rng rng(14);
    const auto sys = SpectralSystem::from_hamiltonian(testing::random_hermitian(rng, 3));
    const FockSpace space(Statistics::fermion, 3);
    const ManyBodyEvolution evo(build_hamiltonian(space, sys));
    std::vector<double> sums;
    for (int mask = 0; mask < 8; ++mask) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k)
        if (mask & (1 << k)) s += sys.energies()[k];
      sums.push_back(s);
    }
    std::sort(sums.begin(), sums.end());
    for (int i = 0; i < 8; ++i) CHECK(evo.energies()[i] == doctest::Approx(sums[static_cast<std::size_t>(i)]));
  }
}

TEST_CASE("many-body evolution against the single-particle route") {
  testing::Rng rng(15);
  const auto sys = SpectralSystem::from_hamiltonian(testing::random_hermitian(rng, 4));
  const auto ens = make_ensemble(Statistics::fermion, CMat::Identity(4, 2), RVec::Ones(2));
  const FockSpace space(Statistics::fermion, 4);
  const CVec psi = space.product_state(ens);
  const ManyBodyOperator H = build_hamiltonian(space, sys);
  const auto P = testing::random_projector(rng, 4, 2);
  const CMat M = space.counting_operator(P);
  const CMat rho = psi * psi.adjoint();
  const auto red = reduce(ens, P);
  CHECK(evolve_expectation(space, H, rho, M, 0.0) == doctest::Approx(red.N * expectation_P(red.sigma, P)));
  for (int i = 0; i < 20; ++i) {
    const double t = testing::uniform_real(rng, 0.0, 30.0);
    const double many = evolve_expectation(space, H, rho, M, t);
    CHECK(std::abs(many - red.N * expectation_P(evolve(sys, red.sigma, t), P)) < 1e-10);
    CHECK(std::abs(evolve_expectation(space, H, rho, space.number_operator(), t) - 2.0) < 1e-10);
  }
  const ManyBodyEvolution evo(H);
  const double avg = evo.time_average(rho, M);
  const CMat sigma_avg = time_average_state(sys, red.sigma);
  CHECK(std::abs(avg - red.N * (sigma_avg * P.matrix()).trace().real()) < 1e-10);
}

TEST_CASE("product_state_modes") {
  testing::Rng rng(16);
  const FockSpace space(Statistics::fermion, 4);
  const auto ens = testing::random_ensemble(rng, Statistics::fermion, 4, 2);
  const auto back = product_state_modes(space, space.product_state(ens));
  REQUIRE(back.has_value());
  CHECK(back->total() == doctest::Approx(2.0));

  // An entangled two-fermion state is not a single Slater determinant.
  CVec psi = CVec::Zero(space.dim());
  psi[space.index_of({1, 1, 0, 0})] = 1.0 / std::sqrt(2.0);
  psi[space.index_of({0, 0, 1, 1})] = 1.0 / std::sqrt(2.0);
  CHECK_FALSE(product_state_modes(space, psi).has_value());
  CHECK_THROWS_AS(fluctuation_check(space, psi, ProjectorObservable::identity(4)), InputError);
}

TEST_CASE("fluctuation_check") {
  testing::Rng rng(17);
  SUBCASE("counting the occupied modes") {
    const CMat U = testing::random_unitary(rng, 4);
    const auto ens = make_ensemble(Statistics::fermion, U.leftCols(2), RVec::Ones(2));
    const FockSpace space(Statistics::fermion, 4);
    const auto r = fluctuation_check(space, space.product_state(ens), ProjectorObservable(4, U.leftCols(2)));
    CHECK(r.mean == doctest::Approx(2.0));
    CHECK(r.second_moment == doctest::Approx(4.0));
    CHECK(r.bound - r.second_moment == doctest::Approx(2.0));
    CHECK(r.bound_ok);
  }
  SUBCASE("an empty orthogonal mode has no variance") {
    const CMat U = testing::random_unitary(rng, 4);
    const auto ens = make_ensemble(Statistics::boson, U.col(0), RVec::Constant(1, 2.0));
    const FockSpace space(Statistics::boson, 4, 2, 2);
    const auto r = fluctuation_check(space, ens, ProjectorObservable(4, U.col(3)));
    CHECK(std::abs(r.variance) < 1e-12);
  }
  SUBCASE("random sweep") {
    for (int draw = 0; draw < 100; ++draw) {
      const Statistics s = draw % 2 == 0 ? Statistics::fermion : Statistics::boson;
      const int m = testing::uniform_int(rng, 2, 5);
      const int N = testing::uniform_int(rng, 1, s == Statistics::fermion ? std::min(3, m) : 3);
      const FockSpace space(s, m, N, N);
      const auto ens = testing::random_ensemble(rng, s, m, N);
      CHECK(fluctuation_check(space, ens, testing::random_projector(rng, m, testing::uniform_int(rng, 1, m))).bound_ok);
    }
  }
}

TEST_CASE("time_avg_fluctuation") {
  testing::Rng rng(18);
  RVec e(4);
  e << 0.0, 1.0, std::sqrt(5.0), std::numbers::pi + 0.3;
  const auto sys = SpectralSystem(e, testing::random_unitary(rng, 4));
  const FockSpace space(Statistics::fermion, 4);
  const auto P = testing::random_projector(rng, 4, 2);

  SUBCASE("two fermions stay below sqrt 2") {
    const auto ens = testing::random_ensemble(rng, Statistics::fermion, 4, 2);
    const auto r = time_avg_fluctuation(space, sys, space.product_state(ens), P, 1000, 42);
    CHECK(r.ok);
    CHECK(r.bound == doctest::Approx(std::sqrt(2.0)));
  }
  SUBCASE("stationary state keeps its initial spread") {
    const auto ens = make_ensemble(Statistics::fermion, sys.eigenvectors().leftCols(2), RVec::Ones(2));
    const CVec psi = space.product_state(ens);
    const auto r = time_avg_fluctuation(space, sys, psi, P, 200, 42);
    CHECK(r.mean_sigma == doctest::Approx(std::sqrt(fluctuation_check(space, psi, P).variance)).epsilon(1e-9));
  }
  SUBCASE("number operator does not fluctuate") {
    const auto ens = testing::random_ensemble(rng, Statistics::fermion, 4, 2);
    const auto r = time_avg_fluctuation(space, sys, ens, ProjectorObservable::identity(4), 100, 1);
    CHECK(r.mean_sigma < 1e-6);
  }
  SUBCASE("degenerate gaps are rejected") {
    const auto harmonic = SpectralSystem::from_energies(RVec::LinSpaced(4, 0.0, 3.0));
    const auto ens = testing::random_ensemble(rng, Statistics::fermion, 4, 2);
    CHECK_THROWS_AS(time_avg_fluctuation(space, harmonic, ens, P, 10, 1), PreconditionError);
  }
}

TEST_CASE("evolved modes reproduce the evolved many-body state") {
  testing::Rng rng(19);
  const auto sys = SpectralSystem::from_hamiltonian(testing::random_hermitian(rng, 3));
  const FockSpace space(Statistics::boson, 3, 3, 3);
  const auto ens = make_ensemble(Statistics::boson, testing::random_unitary(rng, 3).leftCols(2), RVec::Constant(2, 1.0));
  const ManyBodyEvolution evo(build_hamiltonian(space, sys));
  const double t = 2.3;
  const auto moved = make_ensemble(Statistics::boson, unitary_at(sys, t) * ens.modes, ens.occupations);
  CHECK(std::abs(std::abs(space.product_state(moved).dot(evo.evolve(space.product_state(ens), t))) - 1.0) < 1e-12);
}
