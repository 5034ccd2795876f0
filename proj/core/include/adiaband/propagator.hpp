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
#include <vector>

#include "adiaband/family.hpp"
#include "adiaband/numerical_policy.hpp"
#include "adiaband/operator.hpp"
#include "adiaband/spectral.hpp"

namespace adiaband {

/// Uniform grid on [0, 1] including both endpoints.
class TimeGrid {
 public:
  static TimeGrid Uniform(std::size_t points);

  std::size_t size() const noexcept { return s_.size(); }
  double step() const noexcept { return step_; }
  double operator[](std::size_t k) const { return s_[k]; }
  const std::vector<double>& values() const noexcept { return s_; }
  bool operator==(const TimeGrid& other) const { return s_ == other.s_; }

 private:
  std::vector<double> s_;
  double step_ = 0.0;
};

enum class PropagatorKind { kReal, kAdiabatic };

enum class Stepper {
  /// exp(-i dt G(s + dt/2)); second order.
  kExponentialMidpoint,
  /// Two-exponential commutator-free Magnus scheme; fourth order.
  kMagnus4,
};

struct EvolveOptions {
  Stepper stepper = Stepper::kExponentialMidpoint;
  /// Exponential steps per grid interval. 0 selects the count automatically
  /// by doubling until U(1) changes by at most policy.step_tol.
  std::size_t substeps = 0;
};

struct PropagatorTrace {
  double tau = 0.0;
  TimeGrid grid;
  PropagatorKind kind = PropagatorKind::kReal;
  std::vector<UnitaryOperator> U;  // one per grid point, U[0] = I
  std::size_t substeps = 0;
  /// ||U_S(1) - U_{S/2}(1)|| for the accepted substep count S; NaN when the
  /// substep count was fixed by the caller.
  double self_convergence = 0.0;
};

/// U_tau(s) for i dU/ds = tau H(s) U.
PropagatorTrace EvolveReal(const HamiltonianFamily& family, double tau, const TimeGrid& grid,
                           const NumericalPolicy& policy = {}, const EvolveOptions& options = {});

/// U_tau^A(s) generated by tau H(s) + i [P'(s), P(s)].
PropagatorTrace EvolveAdiabatic(const HamiltonianFamily& family, const BandSelector& band,
                                double tau, const TimeGrid& grid,
                                const NumericalPolicy& policy = {},
                                const EvolveOptions& options = {});

struct WaveOperatorTrace {
  double tau = 0.0;
  TimeGrid grid;
  std::vector<Operator> omega;       // U^A(s)^dagger U(s)
  std::vector<Operator> adiabatic;   // U^A(s), kept for the [s]-conjugations
};

WaveOperatorTrace WaveOperator(const PropagatorTrace& real, const PropagatorTrace& adiabatic);

/// || Omega(s) - (I - integral_0^s K(s') Omega(s') ds') || per grid point, with
/// K = U^A^dagger [P', P] U^A and cumulative Simpson quadrature on the grid.
std::vector<double> VolterraResidualProfile(const WaveOperatorTrace& wave,
                                            const HamiltonianFamily& family,
                                            const BandSelector& band,
                                            const NumericalPolicy& policy = {});
/// Maximum of VolterraResidualProfile.
double VolterraResidual(const WaveOperatorTrace& wave, const HamiltonianFamily& family,
                        const BandSelector& band, const NumericalPolicy& policy = {});

struct DiagnosticPoint {
  double s = 0.0;
  double transition_prob = 0.0;  // ||Q(s) U(s) P(0)||^2
  double proj_distance = 0.0;    // ||U(s) P(0) U(s)^dagger - P(s)||
  double gap = 0.0;
  std::size_t m = 0;
};

/// Per-grid-point transition probability and projector distance. Also checks
/// band continuity along the grid (kBandTrackingFailure).
std::vector<DiagnosticPoint> AdiabaticDiagnostics(const PropagatorTrace& real,
                                                  const HamiltonianFamily& family,
                                                  const BandSelector& band,
                                                  const NumericalPolicy& policy = {});

/// ||U^A(s) P(0) - P(s) U^A(s)|| per grid point.
std::vector<double> IntertwiningResidual(const PropagatorTrace& adiabatic,
                                         const HamiltonianFamily& family,
                                         const BandSelector& band,
                                         const NumericalPolicy& policy = {});

}  // namespace adiaband
