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

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/QR>

#include "qgas/bridge.hpp"
#include "qgas/common.hpp"

namespace qgas::testing {

using Rng = std::mt19937_64;

inline CMat random_complex(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMat m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

inline CMat random_hermitian(Rng& rng, Eigen::Index n) {
  const CMat a = random_complex(rng, n, n);
  return 0.5 * (a + a.adjoint());
}

/// Haar-ish unitary from the QR factor of a complex Gaussian matrix.
inline CMat random_unitary(Rng& rng, Eigen::Index n) {
  Eigen::HouseholderQR<CMat> qr(random_complex(rng, n, n));
  return qr.householderQ() * CMat::Identity(n, n);
}

/// k distinct integers from [0, n), ascending.
inline std::vector<int> random_subset(Rng& rng, int n, int k) {
  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(static_cast<std::size_t>(k));
  std::sort(all.begin(), all.end());
  return all;
}

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Random product state of N particles: fermions on N distinct modes, bosons spread over
/// randomly chosen modes with integer occupations.
inline ModeEnsemble random_ensemble(Rng& rng, Statistics s, int modes, int N) {
  const CMat U = random_unitary(rng, modes);
  RVec occ = RVec::Zero(modes);
  if (s == Statistics::fermion) {
    for (int a = 0; a < N; ++a) occ[a] = 1.0;
  } else {
    for (int p = 0; p < N; ++p) occ[uniform_int(rng, 0, std::min(modes, N) - 1)] += 1.0;
  }
  std::vector<int> keep;
  for (int a = 0; a < modes; ++a)
    if (occ[a] > 0) keep.push_back(a);
  CMat cols(modes, static_cast<Eigen::Index>(keep.size()));
  RVec n(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    cols.col(static_cast<Eigen::Index>(i)) = U.col(keep[i]);
    n[static_cast<Eigen::Index>(i)] = occ[keep[i]];
  }
  return make_ensemble(s, cols, n);
}

/// Projector onto r random orthonormal modes.
inline ProjectorObservable random_projector(Rng& rng, int modes, int r) {
  const CMat U = random_unitary(rng, modes);
  return ProjectorObservable(modes, U.leftCols(r));
}

}  // namespace qgas::testing
