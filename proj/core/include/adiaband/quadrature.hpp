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
#include <functional>
#include <span>
#include <vector>

#include "adiaband/error.hpp"

namespace adiaband::quadrature {

/// Running integral of uniformly spaced samples: out[k] approximates the
/// integral from x_0 to x_k. Pairs of panels use Simpson's rule; the odd
/// interior points and a trailing odd panel use the three-point quadratic
/// rule on the neighbouring samples. Works for scalars and Eigen matrices.
template <typename T>
std::vector<T> CumulativeSimpson(std::span<const T> f, double h) {
  const std::size_t n = f.size();
  if (n < 3) Fail(ErrorCode::kInsufficientPoints, "CumulativeSimpson needs >= 3 samples");
  std::vector<T> out(n);
  out[0] = f[0] * 0.0;
  std::size_t k = 0;
  for (; k + 2 < n; k += 2) {
    out[k + 1] = out[k] + (h / 12.0) * (5.0 * f[k] + 8.0 * f[k + 1] - f[k + 2]);
    out[k + 2] = out[k] + (h / 3.0) * (f[k] + 4.0 * f[k + 1] + f[k + 2]);
  }
  if (k + 1 < n) {
    out[k + 1] = out[k] + (h / 12.0) * (-1.0 * f[k - 1] + 8.0 * f[k] + 5.0 * f[k + 1]);
  }
  return out;
}

/// Composite Simpson over an odd number of uniformly spaced samples.
double Simpson(std::span<const double> f, double h);

/// Adaptive Simpson on [a, b] to absolute tolerance `tol`.
double AdaptiveSimpson(const std::function<double(double)>& f, double a, double b, double tol,
                       int max_depth = 60);

/// Fixed 15-point Gauss-Legendre rule on [a, b].
double GaussLegendre15(const std::function<double(double)>& f, double a, double b);

}  // namespace adiaband::quadrature
