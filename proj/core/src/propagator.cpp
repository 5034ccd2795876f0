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

#include "adiaband/propagator.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "adiaband/error.hpp"
#include "adiaband/quadrature.hpp"

namespace adiaband {

TimeGrid TimeGrid::Uniform(std::size_t points) {
  if (points < 64) Fail(ErrorCode::kInvalidArgument, "time grid needs >= 64 points");
  TimeGrid g;
  g.s_.resize(points);
  const double n = static_cast<double>(points - 1);
  for (std::size_t k = 0; k < points; ++k) g.s_[k] = static_cast<double>(k) / n;
  g.step_ = 1.0 / n;
  return g;
}

namespace {

// Scaled generator G(s); the propagator solves i dU/ds = G(s) U.
using Generator = std::function<HermitianOperator(double)>;

std::vector<UnitaryOperator> Integrate(const Generator& generator, Eigen::Index dim,
                                       const TimeGrid& grid, std::size_t substeps,
                                       Stepper stepper) {
  std::vector<UnitaryOperator> out;
  out.reserve(grid.size());
  Operator u = Operator::Identity(dim, dim);
  out.push_back(UnitaryOperator::Trusted(u));
  const double h = grid.step() / static_cast<double>(substeps);
  // Gauss nodes and weights of the fourth-order commutator-free scheme.
  const double c1 = 0.5 - std::sqrt(3.0) / 6.0;
  const double c2 = 0.5 + std::sqrt(3.0) / 6.0;
  const double a1 = 0.25 + std::sqrt(3.0) / 6.0;
  const double a2 = 0.25 - std::sqrt(3.0) / 6.0;
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    for (std::size_t j = 0; j < substeps; ++j) {
      const double s = grid[k] + static_cast<double>(j) * h;
      if (stepper == Stepper::kExponentialMidpoint) {
        u = UnitaryExp(generator(s + 0.5 * h), h).matrix() * u;
      } else {
        const Operator g1 = generator(s + c1 * h).matrix();
        const Operator g2 = generator(s + c2 * h).matrix();
        u = UnitaryExp(HermitianOperator::Symmetrized(a1 * g1 + a2 * g2), h).matrix() * u;
        u = UnitaryExp(HermitianOperator::Symmetrized(a2 * g1 + a1 * g2), h).matrix() * u;
      }
    }
    out.push_back(UnitaryOperator::Trusted(u));
  }
  return out;
}

PropagatorTrace Evolve(const Generator& generator, Eigen::Index dim, double tau,
                       const TimeGrid& grid, PropagatorKind kind, const NumericalPolicy& policy,
                       const EvolveOptions& options) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) Fail(ErrorCode::kInvalidArgument, "tau must be >= 0");
  PropagatorTrace trace;
  trace.tau = tau;
  trace.grid = grid;
  trace.kind = kind;
  const std::size_t intervals = grid.size() - 1;

  if (options.substeps > 0) {
    if (intervals * options.substeps > policy.max_steps) {
      Fail(ErrorCode::kStepLimitExceeded, "requested step count exceeds the cap");
    }
    trace.U = Integrate(generator, dim, grid, options.substeps, options.stepper);
    trace.substeps = options.substeps;
    trace.self_convergence = std::numeric_limits<double>::quiet_NaN();
    return trace;
  }

  std::size_t substeps = 1;
  std::vector<UnitaryOperator> coarse = Integrate(generator, dim, grid, substeps, options.stepper);
  while (true) {
    if (intervals * substeps * 2 > policy.max_steps) {
      std::ostringstream msg;
      msg << "no self-convergence within " << policy.max_steps << " steps (tau = " << tau << ")";
      Fail(ErrorCode::kStepLimitExceeded, msg.str());
    }
    std::vector<UnitaryOperator> fine = Integrate(generator, dim, grid, substeps * 2, options.stepper);
    const double change = OperatorNorm(fine.back().matrix() - coarse.back().matrix());
    substeps *= 2;
    if (change <= policy.step_tol) {
      trace.U = std::move(fine);
      trace.substeps = substeps;
      trace.self_convergence = change;
      return trace;
    }
    coarse = std::move(fine);
  }
}

}  // namespace

PropagatorTrace EvolveReal(const HamiltonianFamily& family, double tau, const TimeGrid& grid,
                           const NumericalPolicy& policy, const EvolveOptions& options) {
  auto generator = [&family, tau](double s) {
    return HermitianOperator::Symmetrized(tau * family.H(s).matrix());
  };
  return Evolve(generator, family.dim(), tau, grid, PropagatorKind::kReal, policy, options);
}

PropagatorTrace EvolveAdiabatic(const HamiltonianFamily& family, const BandSelector& band,
                                double tau, const TimeGrid& grid, const NumericalPolicy& policy,
                                const EvolveOptions& options) {
  const BandSelector resolved = ResolveBand(family, band, policy);
  auto generator = [&family, &resolved, &policy, tau](double s) {
    const FamilySample sample = family(s);
    const ProjectorBundle bundle =
        BandProjector(SpectralDecompose(sample.H, policy), resolved, policy);
    const Operator dP = ProjectorDerivative(sample, bundle);
    const Operator correction = Complex(0.0, 1.0) * Commutator(dP, bundle.P);
    return HermitianOperator::Symmetrized(tau * sample.H.matrix() + correction);
  };
  return Evolve(generator, family.dim(), tau, grid, PropagatorKind::kAdiabatic, policy, options);
}

WaveOperatorTrace WaveOperator(const PropagatorTrace& real, const PropagatorTrace& adiabatic) {
  if (!(real.grid == adiabatic.grid) || real.tau != adiabatic.tau ||
      real.kind != PropagatorKind::kReal || adiabatic.kind != PropagatorKind::kAdiabatic) {
    Fail(ErrorCode::kGridMismatch, "wave operator needs a real and an adiabatic trace on one grid");
  }
  WaveOperatorTrace wave;
  wave.tau = real.tau;
  wave.grid = real.grid;
  wave.omega.reserve(real.U.size());
  wave.adiabatic.reserve(real.U.size());
  for (std::size_t k = 0; k < real.U.size(); ++k) {
    wave.omega.push_back(adiabatic.U[k].matrix().adjoint() * real.U[k].matrix());
    wave.adiabatic.push_back(adiabatic.U[k].matrix());
  }
  return wave;
}

std::vector<double> VolterraResidualProfile(const WaveOperatorTrace& wave,
                                            const HamiltonianFamily& family,
                                            const BandSelector& band,
                                            const NumericalPolicy& policy) {
  const BandSelector resolved = ResolveBand(family, band, policy);
  const std::size_t n = wave.grid.size();
  std::vector<Operator> integrand(n);
  for (std::size_t k = 0; k < n; ++k) {
    const FamilySample sample = family(wave.grid[k]);
    const ProjectorBundle bundle = BandProjector(SpectralDecompose(sample.H, policy), resolved, policy);
    const Operator dP = ProjectorDerivative(sample, bundle);
    const Operator& ua = wave.adiabatic[k];
    integrand[k] = ua.adjoint() * Commutator(dP, bundle.P) * ua * wave.omega[k];
  }
  const auto integral =
      quadrature::CumulativeSimpson<Operator>(integrand, wave.grid.step());
  const Eigen::Index d = family.dim();
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = OperatorNorm(wave.omega[k] - (Operator::Identity(d, d) - integral[k]));
  }
  return out;
}

double VolterraResidual(const WaveOperatorTrace& wave, const HamiltonianFamily& family,
                        const BandSelector& band, const NumericalPolicy& policy) {
  const auto profile = VolterraResidualProfile(wave, family, band, policy);
  return *std::max_element(profile.begin(), profile.end());
}

std::vector<DiagnosticPoint> AdiabaticDiagnostics(const PropagatorTrace& real,
                                                  const HamiltonianFamily& family,
                                                  const BandSelector& band,
                                                  const NumericalPolicy& policy) {
  const BandSelector resolved = ResolveBand(family, band, policy);
  std::vector<DiagnosticPoint> out;
  out.reserve(real.grid.size());
  Operator p0;
  ProjectorBundle previous;
  for (std::size_t k = 0; k < real.grid.size(); ++k) {
    ProjectorBundle bundle = BundleAt(family, real.grid[k], resolved, policy);
    if (k == 0) {
      p0 = bundle.P;
    } else if (!IsBandSuccessor(previous, bundle)) {
      std::ostringstream msg;
      msg << "band projector discontinuous at s = " << real.grid[k];
      Fail(ErrorCode::kBandTrackingFailure, msg.str());
    }
    const Operator& u = real.U[k].matrix();
    const Operator moved = u * p0;
    const double leak = OperatorNorm(bundle.Q * moved);
    const double dist = OperatorNorm(moved * u.adjoint() - bundle.P);
    out.push_back({real.grid[k], leak * leak, dist, bundle.gap, bundle.m});
    previous = std::move(bundle);
  }
  return out;
}

std::vector<double> IntertwiningResidual(const PropagatorTrace& adiabatic,
                                         const HamiltonianFamily& family,
                                         const BandSelector& band, const NumericalPolicy& policy) {
  const BandSelector resolved = ResolveBand(family, band, policy);
  std::vector<double> out;
  out.reserve(adiabatic.grid.size());
  Operator p0;
  for (std::size_t k = 0; k < adiabatic.grid.size(); ++k) {
    const ProjectorBundle bundle = BundleAt(family, adiabatic.grid[k], resolved, policy);
    if (k == 0) p0 = bundle.P;
    const Operator& u = adiabatic.U[k].matrix();
    out.push_back(OperatorNorm(u * p0 - bundle.P * u));
  }
  return out;
}

}  // namespace adiaband
