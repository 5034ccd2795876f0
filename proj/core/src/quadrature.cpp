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

#include "adiaband/quadrature.hpp"

#include <cmath>

#include <boost/math/quadrature/gauss.hpp>

namespace adiaband::quadrature {

double Simpson(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 3 || n % 2 == 0) {
    Fail(ErrorCode::kInsufficientPoints, "Simpson needs an odd number >= 3 of samples");
  }
  double sum = f[0] + f[n - 1];
  for (std::size_t i = 1; i + 1 < n; ++i) sum += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
  return sum * h / 3.0;
}

namespace {

double SimpsonStep(const std::function<double(double)>& f, double a, double fa, double b,
                   double fb, double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return SimpsonStep(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         SimpsonStep(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double AdaptiveSimpson(const std::function<double(double)>& f, double a, double b, double tol,
                       int max_depth) {
  // Split into a few panels first so narrow features near the midpoint are seen.
  constexpr int kPanels = 16;
  const double width = (b - a) / kPanels;
  double total = 0.0;
  for (int p = 0; p < kPanels; ++p) {
    const double lo = a + p * width;
    const double hi = p + 1 == kPanels ? b : lo + width;
    const double mid = 0.5 * (lo + hi);
    const double flo = f(lo), fhi = f(hi), fmid = f(mid);
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    total += SimpsonStep(f, lo, flo, hi, fhi, mid, fmid, whole, tol / kPanels, max_depth);
  }
  return total;
}

double GaussLegendre15(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss<double, 15>::integrate(f, a, b);
}

}  // namespace adiaband::quadrature
