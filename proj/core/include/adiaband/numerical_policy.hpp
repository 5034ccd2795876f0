// Copyright 2026 The adiaband Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>

namespace adiaband {

/// Every numerical tolerance the library uses lives here and is passed
/// explicitly. Defaults are the documented values.
struct NumericalPolicy {
  /// Hermiticity: max |A_jk - conj(A_kj)| <= hermitian_tol * (1 + ||A||).
  double hermitian_tol = 1e-12;
  /// Unitarity: ||U^dagger U - I|| <= unitarity_tol.
  double unitarity_tol = 1e-10;
  /// Eigenvalues closer than cluster_rel_tol * ||A|| are merged into one
  /// cluster. Negative means use exactly zero.
  double cluster_rel_tol = 1e-8;
  /// Minimum acceptable spectral gap / contour margin.
  double gap_floor = 1e-12;
  /// Self-convergence threshold for the propagators (operator norm of U(1)).
  double step_tol = 1e-6;
  /// Cap on the total number of exponential steps per evolution.
  std::size_t max_steps = std::size_t{1} << 20;
  /// Central-difference step for derivative checks.
  double fd_step = 1e-4;
  /// Step used for the finite-difference second derivative of P(s).
  double fd_step_second = 1e-3;
  /// Default number of trapezoid nodes on a resolvent contour.
  std::size_t contour_nodes = 128;
  /// Relative disagreement allowed between Simpson refinements.
  double quadrature_rel_tol = 1e-6;
};

}  // namespace adiaband
