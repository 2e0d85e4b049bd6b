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

#include <Eigen/LU>

#include "doctest.h"

#include "../support/random_instances.hpp"
#include "qgas/fock.hpp"
#include "qgas/lattice.hpp"
#include "qgas/pfaffian.hpp"

using namespace qgas;

namespace {

constexpr double kPi = std::numbers::pi;

RMat random_skew(testing::Rng& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  RMat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = g(rng);
  return a - a.transpose();
}

CovarianceMatrix random_gaussian_state(testing::Rng& rng, int V) {
  const CMat U = testing::random_unitary(rng, V);
  RVec n(V);
  for (auto& x : n) x = testing::uniform_real(rng, 0.0, 1.0) < 0.5 ? 0.0 : 1.0;
  return CovarianceMatrix::from_correlations((U * n.cast<Complex>().asDiagonal() * U.adjoint()).transpose());
}

}  // namespace

TEST_CASE("pfaffian small cases") {
  RMat a(2, 2);
  a << 0.0, 1.7, -1.7, 0.0;
  CHECK(pfaffian(a) == doctest::Approx(1.7));
  CHECK(pfaffian(RMat::Zero(0, 0)) == 1.0);
  CHECK(pfaffian(RMat::Zero(3, 3)) == 0.0);

  testing::Rng rng(21);
  const RMat a1 = random_skew(rng, 4);
  const RMat a2 = random_skew(rng, 6);
  RMat sum = RMat::Zero(10, 10);
  sum.topLeftCorner(4, 4) = a1;
  sum.bottomRightCorner(6, 6) = a2;
  CHECK(pfaffian(sum) == doctest::Approx(pfaffian(a1) * pfaffian(a2)).epsilon(1e-10));

  RMat zero_row = random_skew(rng, 6);
  zero_row.row(3).setZero();
  zero_row.col(3).setZero();
  CHECK(std::abs(pfaffian(zero_row)) < 1e-12);

  RMat not_skew = RMat::Identity(4, 4);
  CHECK_THROWS_AS(pfaffian(not_skew), InputError);
}

TEST_CASE("pfaffian against cofactor expansion and determinant") {
  testing::Rng rng(22);
  for (int n : {2, 4, 6, 8}) {
    for (int draw = 0; draw < 20; ++draw) {
      const RMat a = random_skew(rng, n);
      const double pf = pfaffian(a);
      CHECK(pf == doctest::Approx(pfaffian_cofactor(a)).epsilon(1e-10));
      CHECK(pf * pf == doctest::Approx(a.partialPivLu().determinant()).epsilon(1e-10));
    }
  }
  CHECK_THROWS_AS(pfaffian_cofactor(RMat::Zero(10, 10)), InputError);
  const RMat big = random_skew(rng, 40);
  const double pf = pfaffian(big);
  CHECK(pf * pf == doctest::Approx(big.partialPivLu().determinant()).epsilon(1e-8));
}

TEST_CASE("block_canonical_form") {
  testing::Rng rng(23);
  const auto cov = random_gaussian_state(rng, 6);
  const auto bcf = block_canonical_form(cov.gamma());
  CHECK((bcf.reconstruct() - cov.gamma()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((bcf.O.transpose() * bcf.O - RMat::Identity(12, 12)).cwiseAbs().maxCoeff() < 1e-10);
  for (Eigen::Index i = 0; i < bcf.lambda.size(); ++i) CHECK(std::abs(bcf.lambda[i]) <= 1.0 + 1e-10);

  const RMat odd_zero = random_skew(rng, 5);
  RMat padded = RMat::Zero(6, 6);
  padded.topLeftCorner(5, 5) = odd_zero;
  CHECK((block_canonical_form(padded).reconstruct() - padded).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("covariance round trip and purity") {
  testing::Rng rng(24);
  const auto cov = random_gaussian_state(rng, 8);
  CHECK(cov.anomalous_defect() < 1e-14);
  CHECK((cov.gamma() * cov.gamma().transpose() - RMat::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-8);
  const auto model = HoppingModel::ring(8);
  const auto later = evolve_covariance(model, cov, 3.3);
  CHECK((later.gamma() * later.gamma().transpose() - RMat::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((evolve_covariance(model, cov, 0.0).gamma() - cov.gamma()).cwiseAbs().maxCoeff() < 1e-14);
  const CMat C = CovarianceMatrix::from_correlations(cov.correlations()).correlations();
  CHECK((C - cov.correlations()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(cov.max_singular_value() == doctest::Approx(1.0));
}

TEST_CASE("ground state covariance is stationary") {
  const auto model = HoppingModel::chain(6);
  const auto sys = model.spectrum();
  const CMat lower = sys.eigenvectors().leftCols(3);
  const auto cov = CovarianceMatrix::from_correlations((lower * lower.adjoint()).transpose());
  CHECK((evolve_covariance(model, cov, 4.1).gamma() - cov.gamma()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Gamma(t) against the Fock oracle for one occupied site") {
  const int L = 6;
  const auto model = HoppingModel::ring(L);
  CMat C = CMat::Zero(L, L);
  C(2, 2) = 1.0;
  const auto cov = CovarianceMatrix::from_correlations(C);
  const FockSpace space(Statistics::fermion, L);
  CVec psi = CVec::Zero(space.dim());
  psi[space.index_of({0, 0, 1, 0, 0, 0})] = 1.0;
  const ManyBodyEvolution evo(build_hamiltonian(space, model.spectrum()));
  for (double t : {0.0, 0.8, 2.5}) {
    const CVec psi_t = evo.evolve(psi, t);
    const CMat Ct = evolve_covariance(model, cov, t).correlations();
    for (int x = 0; x < L; ++x)
      for (int y = 0; y < L; ++y) {
        const Complex fock = psi_t.dot(space.creation(x) * space.annihilation(y) * psi_t);
        CHECK(std::abs(Ct(x, y) - fock) < 1e-10);
      }
  }
}

TEST_CASE("wick_expectation") {
  testing::Rng rng(25);
  const auto cov = random_gaussian_state(rng, 4);
  CHECK(wick_expectation(cov, {}) == Complex(1.0));
  CHECK(std::abs(wick_expectation(cov, {1, 4}) - Complex(0.0, -cov.gamma()(1, 4))) < 1e-15);
  CHECK_THROWS_AS(wick_expectation(cov, {3, 1}), InputError);

  // Four-Majorana strings against explicit operators.
  const int m = 4;
  CMat C = CMat::Zero(m, m);
  const CMat U = testing::random_unitary(rng, m);
  C = (U.leftCols(2) * U.leftCols(2).adjoint()).transpose();
  const auto state = CovarianceMatrix::from_correlations(C);
  const FockSpace space(Statistics::fermion, m);
  const auto ens = make_ensemble(Statistics::fermion, U.leftCols(2), RVec::Ones(2));
  const CVec psi = space.product_state(ens);
  for (int draw = 0; draw < 20; ++draw) {
    const auto idx = testing::random_subset(rng, 2 * m, 4);
    CMat op = CMat::Identity(space.dim(), space.dim());
    for (int r : idx) op = op * space.majorana(r);
    CHECK(std::abs(wick_expectation(state, idx) - psi.dot(op * psi)) < 1e-10);
  }
}

TEST_CASE("phase_correlator") {
  const int L = 20;
  const auto model = HoppingModel::ring(L);
  const auto cov = alternating_state(L);
  const auto same = phase_correlator(model, cov, 4, 4, 1.3);
  CHECK(std::abs(same.direct.imag()) < 1e-12);
  CHECK(same.direct.real() >= -1e-12);
  CHECK(same.direct.real() <= 1.0 + 1e-12);
  CHECK(std::abs(phase_correlator(model, cov, 0, 3, 0.0).direct) < 1e-14);
  for (double t : {0.5, 3.0, 11.0}) {
    const auto pc = phase_correlator(model, cov, 2, 7, t);
    CHECK(std::abs(pc.direct - pc.decomposed) < 1e-12);
  }
}

TEST_CASE("truncated_dos") {
  const auto r = truncated_dos(HoppingModel::ring(120), kPi / 6.0);
  CHECK(r.n_max == doctest::Approx(2.0 * 120 / kPi));
  const auto d = truncated_dos(HoppingModel::ring(400));
  CHECK(std::abs(d.excluded_direct - d.excluded_formula) <= 1.0);
  CHECK(truncated_dos(HoppingModel::ring(200)).n_max / truncated_dos(HoppingModel::ring(100)).n_max == 2.0);
  CHECK(ring_density(200, 0.0) == doctest::Approx(200.0 / kPi));
}

TEST_CASE("single_mode_bound_check") {
  const int L = 101;
  const auto model = HoppingModel::ring(L);
  SUBCASE("energy eigenmode is stationary") {
    const CVec phi = model.spectrum().eigenvectors().col(10);
    testing::Rng rng(26);
    const auto r = single_mode_bound_check(model, random_gaussian_state(rng, L), phi, L, 50.0);
    CHECK(r.lhs < 1e-10);
  }
  SUBCASE("random Gaussian states") {
    testing::Rng rng(27);
    CVec phi = CVec::Zero(L);
    phi[0] = 1.0;
    for (int draw = 0; draw < 20; ++draw) {
      const auto r = single_mode_bound_check(model, random_gaussian_state(rng, L), phi, 1, 200.0);
      CHECK(r.ok);
      CHECK(r.lhs <= r.rhs);
    }
  }
  SUBCASE("doubling T halves the time term under the root") {
    CVec phi = CVec::Zero(L);
    phi[0] = 1.0;
    const auto cov = alternating_state(L);
    const auto a = single_mode_bound_check(model, cov, phi, 1, 100.0);
    const auto b = single_mode_bound_check(model, cov, phi, 1, 200.0);
    // rhs - slack = l sqrt(c1 n_d^2 s^2 (D_G/d + c2 n_max/T))
    const double base = kC1 * a.n_d * a.n_d * static_cast<double>(a.D_G) / a.d;
    const double ta = std::pow(a.rhs - a.slack, 2) / kC1 / (a.n_d * a.n_d) - static_cast<double>(a.D_G) / a.d;
    const double tb = std::pow(b.rhs - b.slack, 2) / kC1 / (b.n_d * b.n_d) - static_cast<double>(b.D_G) / b.d;
    CHECK(base > 0.0);
    CHECK(tb == doctest::Approx(ta / 2.0).epsilon(1e-10));
  }
}

TEST_CASE("multi_mode_bound_check") {
  const int L = 101;
  const auto model = HoppingModel::ring(L);
  testing::Rng rng(28);

  SUBCASE("identity has no fluctuations") {
    const auto r = multi_mode_bound_check(model, alternating_state(L), {{1.0, {}}}, 1, 100.0);
    CHECK(r.lhs < 1e-14);
  }
  SUBCASE("density term reduces to the single-mode check") {
    // a_0^dagger a_0 = (1 + i c_0 c_1) / 2
    const std::vector<MajoranaTerm> density{{0.5, {}}, {Complex(0.0, 0.5), {0, 1}}};
    CVec phi = CVec::Zero(L);
    phi[0] = 1.0;
    const auto cov = random_gaussian_state(rng, L);
    const auto multi = multi_mode_bound_check(model, cov, density, 1, 150.0);
    const auto single = single_mode_bound_check(model, cov, phi, 1, 150.0);
    CHECK(std::abs(multi.lhs - single.lhs) < 1e-12);
  }
  SUBCASE("two-site correlator on random states") {
    // a_0^dagger a_1 + h.c. = (i/2)(c_0 c_3 - c_1 c_2)
    const std::vector<MajoranaTerm> hop{{Complex(0.0, 0.5), {0, 3}}, {Complex(0.0, -0.5), {1, 2}}};
    for (int draw = 0; draw < 10; ++draw) {
      const auto r = multi_mode_bound_check(model, random_gaussian_state(rng, L), hop, 2, 200.0);
      CHECK(r.ok);
    }
  }
  SUBCASE("pairing correlations are rejected") {
    RMat g = alternating_state(4).gamma();
    g(0, 2) = 0.3;
    g(2, 0) = -0.3;
    CHECK_THROWS_AS(multi_mode_bound_check(HoppingModel::ring(4), CovarianceMatrix(g), {{1.0, {0, 1}}}, 1, 10.0),
                    PreconditionError);
  }
}

TEST_CASE("correlator fluctuations shrink with system size") {
  const double small = correlator_fluctuation(HoppingModel::ring(50), alternating_state(50), 0, 10, 1000.0);
  const double large = correlator_fluctuation(HoppingModel::ring(200), alternating_state(200), 0, 10, 1000.0);
  CHECK(large < small);
}
