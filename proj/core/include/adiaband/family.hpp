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

#include <cstdint>
#include <functional>
#include <string>

#include "adiaband/operator.hpp"
#include "adiaband/schedule.hpp"

namespace adiaband {

/// H(s) together with its first three s-derivatives.
struct FamilySample {
  HermitianOperator H;
  HermitianOperator dH;
  HermitianOperator d2H;
  HermitianOperator d3H;
};

enum class DerivativeMode { kAnalytic, kFiniteDifference };

/// s -> H(s) on [0, 1]. Only families parameterized by the scaled time s are
/// representable, so Hamiltonians with a second, tau-independent clock cannot
/// be expressed.
class HamiltonianFamily {
 public:
  using SampleFn = std::function<FamilySample(double)>;
  using ValueFn = std::function<Operator(double)>;

  HamiltonianFamily(Eigen::Index dim, ValueFn value, SampleFn sample, DerivativeMode mode,
                    std::string description);

  FamilySample operator()(double s) const { return sample_(s); }
  /// H(s) alone, without derivatives.
  HermitianOperator H(double s) const { return HermitianOperator::Symmetrized(value_(s)); }

  Eigen::Index dim() const noexcept { return dim_; }
  DerivativeMode derivative_mode() const noexcept { return mode_; }
  const std::string& description() const noexcept { return description_; }
  HamiltonianFamily Renamed(std::string description) const;

 private:
  Eigen::Index dim_;
  ValueFn value_;
  SampleFn sample_;
  DerivativeMode mode_;
  std::string description_;
};

/// H(s) = [1 - f(s)] H0 + f(s) H1.
HamiltonianFamily InterpolatingFamily(const HermitianOperator& h0, const HermitianOperator& h1,
                                      const Schedule& schedule);

/// s -> family(f(s)), derivatives by the chain rule.
HamiltonianFamily Reparametrized(const HamiltonianFamily& family, const Schedule& schedule);

/// H(s) = [1 - f(s)] H0 + f(s) H1 + k(s) H2 with k(0) = k(1) = 0.
HamiltonianFamily ThreeTermFamily(const HermitianOperator& h0, const HermitianOperator& h1,
                                  const HermitianOperator& h2, const Schedule& f,
                                  const Schedule& k);

/// Derivatives by once-Richardson-extrapolated central differences.
HamiltonianFamily FiniteDifferenceFamily(Eigen::Index dim, HamiltonianFamily::ValueFn value,
                                         std::string description);

/// A0 + sum_r [A_r cos(2 pi r s) + B_r sin(2 pi r s)] with seeded random
/// Hermitian coefficients scaled so that ||H(s)|| <= 1.
HamiltonianFamily RandomSmoothFamily(Eigen::Index dim, std::uint64_t seed, int num_harmonics);

/// Max over `samples` seeded points of ||dH - central difference of H||.
double DerivativeConsistency(const HamiltonianFamily& family, std::uint64_t seed,
                             int samples = 10, double h = 1e-4);

enum class GroverRepresentation { kFull, kReduced };

struct GroverProblem {
  int n = 2;
  std::uint64_t marked = 0;
  GroverRepresentation representation = GroverRepresentation::kFull;
};

struct GroverFamily {
  HamiltonianFamily family;
  /// s -> g(f(s)).
  std::function<double(double)> analytic_gap;
};

/// g(u) = sqrt(2^-n + 4 (1 - 2^-n) (u - 1/2)^2) with its derivative.
GapFunction GroverGap(int n);
double GroverMinimalGap(int n);

/// (H0, H1) in the requested representation. The reduced basis is
/// {|u>, normalized component of the uniform state orthogonal to |u>}.
std::pair<HermitianOperator, HermitianOperator> GroverEndpoints(const GroverProblem& problem);

GroverFamily MakeGroverFamily(const GroverProblem& problem, const Schedule& schedule);

}  // namespace adiaband
