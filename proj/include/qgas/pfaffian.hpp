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

#include "qgas/common.hpp"

namespace qgas {

/// Pfaffian by Householder reduction to skew-tridiagonal form. Odd dimension gives 0.
double pfaffian(const RMat& A);

/// Recursive expansion along the first row; dimension <= 8 only.
double pfaffian_cofactor(const RMat& A);

/// O^T A O = diag(blocks [[0, lambda_n], [-lambda_n, 0]]) with O orthogonal.
struct BlockCanonicalForm {
  RMat O;
  RVec lambda;

  RMat reconstruct() const;
};

BlockCanonicalForm block_canonical_form(const RMat& A);

}  // namespace qgas
