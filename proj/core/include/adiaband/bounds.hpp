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
#include <string>
#include <vector>

#include "adiaband/family.hpp"
#include "adiaband/numerical_policy.hpp"
#include "adiaband/propagator.hpp"
#include "adiaband/spectral.hpp"

namespace adiaband {

/// Pointwise quantities entering the gap-dependent bounds.
struct BoundIngredients {
  double s = 0.0;
  double m = 0.0;
  double gap = 0.0;
  double norm_dP = 0.0;          // ||P'||
  double norm_tdP = 0.0;         // ||(P')~||
  double norm_qd2Pp = 0.0;       // ||Q P'' P||
  double norm_qdtdPp = 0.0;      // ||Q [d/ds (P')~] P||
  double norm_dH = 0.0;
  double norm_d2H = 0.0;
  double norm_d3H = 0.0;
  double h = 0.0;                // max(||H'||, ||H''||, ||H'''||)
};

BoundIngredients EvaluateIngredients(const HamiltonianFamily& family, double s,
                                     const BandSelector& band, const NumericalPolicy& policy = {});

/// sqrt(m) ||P'|| / g, the boundary term of the tight first-order bound.
double TightBoundary(const BoundIngredients& x);
/// sqrt(m)(||QP''P|| + ||P'||^2)/g + 2m ||H'|| ||P'|| / g^2.
double TightIntegrand(const BoundIngredients& x);
/// m ||H'|| / g^2.
double CoarseBoundary(const BoundIngredients& x);
/// m ||H''|| / g^2 + 7 m sqrt(m) ||H'||^2 / g^3.
double CoarseIntegrand(const BoundIngredients& x);

struct FirstOrderBound {
  double a_tight = 0.0;
  double a_coarse = 0.0;
  BoundIngredients at_zero;
  BoundIngredients at_s;
  double tight_integral = 0.0;   // integral_0^s of TightIntegrand
  double coarse_integral = 0.0;  // integral_0^s of CoarseIntegrand
};

/// First-order gap bound A(s) in its tight and coarse forms, integrals by
/// composite Simpson with `quadrature_points` (odd, >= 3) nodes, checked
/// against the half-resolution rule (kQuadratureNotConverged).
FirstOrderBound Theorem3Bound(const HamiltonianFamily& family, const BandSelector& band,
                              double tau, double s, std::size_t quadrature_points = 2049,
                              const NumericalPolicy& policy = {});

/// The same bound on every point of `grid`, sharing one set of samples.
/// The quadrature mesh refines the grid until successive refinements agree.
struct BoundProfile {
  std::vector<double> s;
  std::vector<double> a_tight;
  std::vector<double> a_coarse;
  std::vector<double> a_theorem4;
  /// Per-point first-order part [m h / (tau g^2)]|u.b. and the bracket
  /// multiplying C / tau^2, so A4 = first + C / tau^2 * bracket.
  std::vector<double> theorem4_first;
  std::vector<double> theorem4_bracket;
  std::vector<BoundIngredients> ingredients;  // at grid points
  std::size_t refinement = 0;
};

BoundProfile EvaluateBoundProfile(const HamiltonianFamily& family, const BandSelector& band,
                                  double tau, const TimeGrid& grid, double theorem4_c = 1.0,
                                  const NumericalPolicy& policy = {});

/// Second-order gap bound with caller-supplied constant C.
double Theorem4Bound(const HamiltonianFamily& family, const BandSelector& band, double tau,
                     double s, double c, std::size_t quadrature_points = 2049,
                     const NumericalPolicy& policy = {});

struct InequalityCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// The norm-bound chain for P', (P')~, Q P'' P and Q [d/ds (P')~] P.
std::vector<InequalityCheck> Lemma8Chain(const HamiltonianFamily& family, const BandSelector& band,
                                         double s, double slack = 1e-8,
                                         const NumericalPolicy& policy = {});

/// max over the grid of || Q0 Omega(s) P0 - (second-order expansion) ||.
/// Needs traces from EvolveReal/EvolveAdiabatic on the same grid.
double ExpansionResidual(const HamiltonianFamily& family, const BandSelector& band,
                         const WaveOperatorTrace& wave, const NumericalPolicy& policy = {});

/// sup over a uniform grid of ||H'(s)|| / g(s)^2.
double TraditionalCriterion(const HamiltonianFamily& family, const BandSelector& band,
                            std::size_t points = 1001, const NumericalPolicy& policy = {});

/// Smallest C with measured(s) <= first(s) + C / tau^2 * bracket(s) at every
/// point. Can be negative when the first-order part alone dominates.
double FitTheorem4Constant(const BoundProfile& profile, const std::vector<double>& measured,
                           double tau);

}  // namespace adiaband
