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

#include "adiaband/family.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "adiaband/error.hpp"

namespace adiaband {

HamiltonianFamily::HamiltonianFamily(Eigen::Index dim, ValueFn value, SampleFn sample,
                                     DerivativeMode mode, std::string description)
    : dim_(dim),
      value_(std::move(value)),
      sample_(std::move(sample)),
      mode_(mode),
      description_(std::move(description)) {
  if (dim_ < 1) Fail(ErrorCode::kInvalidArgument, "family dimension must be >= 1");
}

HamiltonianFamily HamiltonianFamily::Renamed(std::string description) const {
  HamiltonianFamily out = *this;
  out.description_ = std::move(description);
  return out;
}

HamiltonianFamily InterpolatingFamily(const HermitianOperator& h0, const HermitianOperator& h1,
                                      const Schedule& schedule) {
  RequireSameDim(h0, h1, "InterpolatingFamily");
  const Operator a = h0.matrix();
  const Operator diff = h1.matrix() - h0.matrix();
  auto value = [a, diff, schedule](double s) -> Operator { return a + schedule(s).f * diff; };
  auto sample = [a, diff, schedule](double s) {
    const ScheduleValue f = schedule(s);
    return FamilySample{HermitianOperator::Symmetrized(a + f.f * diff),
                        HermitianOperator::Symmetrized(f.df * diff),
                        HermitianOperator::Symmetrized(f.d2f * diff),
                        HermitianOperator::Symmetrized(f.d3f * diff)};
  };
  return HamiltonianFamily(h0.dim(), std::move(value), std::move(sample),
                           DerivativeMode::kAnalytic, "interpolating[" + schedule.name() + "]");
}

HamiltonianFamily Reparametrized(const HamiltonianFamily& family, const Schedule& schedule) {
  auto value = [family, schedule](double s) -> Operator { return family.H(schedule(s).f).matrix(); };
  auto sample = [family, schedule](double s) {
    const ScheduleValue f = schedule(s);
    const FamilySample x = family(f.f);
    const Operator& h1 = x.dH.matrix();
    const Operator& h2 = x.d2H.matrix();
    const Operator& h3 = x.d3H.matrix();
    return FamilySample{x.H,
                        HermitianOperator::Symmetrized(f.df * h1),
                        HermitianOperator::Symmetrized(f.df * f.df * h2 + f.d2f * h1),
                        HermitianOperator::Symmetrized(f.df * f.df * f.df * h3 +
                                                       3.0 * f.df * f.d2f * h2 + f.d3f * h1)};
  };
  return HamiltonianFamily(family.dim(), std::move(value), std::move(sample),
                           family.derivative_mode(),
                           family.description() + "[" + schedule.name() + "]");
}

HamiltonianFamily ThreeTermFamily(const HermitianOperator& h0, const HermitianOperator& h1,
                                  const HermitianOperator& h2, const Schedule& f,
                                  const Schedule& k) {
  RequireSameDim(h0, h1, "ThreeTermFamily");
  RequireSameDim(h0, h2, "ThreeTermFamily");
  const double k0 = k(0.0).f;
  const double k1 = k(1.0).f;
  if (std::abs(k0) > 1e-12 || std::abs(k1) > 1e-12) {
    std::ostringstream msg;
    msg << "k(0) = " << k0 << ", k(1) = " << k1;
    Fail(ErrorCode::kEndpointViolation, msg.str());
  }
  const Operator a = h0.matrix();
  const Operator diff = h1.matrix() - h0.matrix();
  const Operator c = h2.matrix();
  auto value = [a, diff, c, f, k](double s) -> Operator {
    return a + f(s).f * diff + k(s).f * c;
  };
  auto sample = [a, diff, c, f, k](double s) {
    const ScheduleValue fv = f(s);
    const ScheduleValue kv = k(s);
    return FamilySample{HermitianOperator::Symmetrized(a + fv.f * diff + kv.f * c),
                        HermitianOperator::Symmetrized(fv.df * diff + kv.df * c),
                        HermitianOperator::Symmetrized(fv.d2f * diff + kv.d2f * c),
                        HermitianOperator::Symmetrized(fv.d3f * diff + kv.d3f * c)};
  };
  return HamiltonianFamily(h0.dim(), std::move(value), std::move(sample),
                           DerivativeMode::kAnalytic,
                           "three-term[" + f.name() + ", " + k.name() + "]");
}

HamiltonianFamily FiniteDifferenceFamily(Eigen::Index dim, HamiltonianFamily::ValueFn value,
                                         std::string description) {
  auto sample = [value](double s) {
    const Operator h = value(s);
    // Each derivative: central difference at step h and h/2, Richardson
    // combined (4 D(h/2) - D(h)) / 3. Steps grow with order to balance
    // truncation against roundoff.
    auto first = [&](double step) -> Operator {
      return (value(s + step) - value(s - step)) / (2.0 * step);
    };
    auto second = [&](double step) -> Operator {
      return (value(s + step) - 2.0 * h + value(s - step)) / (step * step);
    };
    auto third = [&](double step) -> Operator {
      return (value(s + 2 * step) - 2.0 * value(s + step) + 2.0 * value(s - step) -
              value(s - 2 * step)) /
             (2.0 * step * step * step);
    };
    auto richardson = [](const Operator& coarse, const Operator& fine) -> Operator {
      return (4.0 * fine - coarse) / 3.0;
    };
    return FamilySample{HermitianOperator::Symmetrized(h),
                        HermitianOperator::Symmetrized(richardson(first(1e-4), first(5e-5))),
                        HermitianOperator::Symmetrized(richardson(second(1e-3), second(5e-4))),
                        HermitianOperator::Symmetrized(richardson(third(1e-2), third(5e-3)))};
  };
  return HamiltonianFamily(dim, std::move(value), std::move(sample),
                           DerivativeMode::kFiniteDifference, std::move(description));
}

namespace {

Operator RandomHermitian(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Operator m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = Complex(normal(rng), normal(rng));
  }
  return 0.5 * (m + m.adjoint());
}

}  // namespace

HamiltonianFamily RandomSmoothFamily(Eigen::Index dim, std::uint64_t seed, int num_harmonics) {
  if (dim < 2) Fail(ErrorCode::kInvalidArgument, "random family needs dim >= 2");
  if (num_harmonics < 0) Fail(ErrorCode::kInvalidArgument, "num_harmonics must be >= 0");
  std::mt19937_64 rng(seed);
  // coeffs[0] = A0, then (A_r, B_r) pairs.
  std::vector<Operator> coeffs;
  coeffs.push_back(RandomHermitian(dim, rng));
  for (int r = 1; r <= num_harmonics; ++r) {
    coeffs.push_back(RandomHermitian(dim, rng));
    coeffs.push_back(RandomHermitian(dim, rng));
  }
  double total = 0.0;
  for (const auto& c : coeffs) total += OperatorNorm(c);
  for (auto& c : coeffs) c /= total;

  auto sample = [coeffs, num_harmonics](double s) {
    Operator h = coeffs[0];
    Operator d1 = Operator::Zero(h.rows(), h.cols());
    Operator d2 = d1, d3 = d1;
    for (int r = 1; r <= num_harmonics; ++r) {
      const double w = 2.0 * std::numbers::pi * r;
      const double c = std::cos(w * s), sn = std::sin(w * s);
      const Operator& a = coeffs[2 * r - 1];
      const Operator& b = coeffs[2 * r];
      h += c * a + sn * b;
      d1 += w * (-sn * a + c * b);
      d2 += w * w * (-c * a - sn * b);
      d3 += w * w * w * (sn * a - c * b);
    }
    return FamilySample{HermitianOperator::Symmetrized(h), HermitianOperator::Symmetrized(d1),
                        HermitianOperator::Symmetrized(d2), HermitianOperator::Symmetrized(d3)};
  };
  auto value = [sample](double s) -> Operator { return sample(s).H.matrix(); };
  std::ostringstream desc;
  desc << "random[dim=" << dim << ",seed=" << seed << ",harmonics=" << num_harmonics << "]";
  return HamiltonianFamily(dim, std::move(value), std::move(sample), DerivativeMode::kAnalytic,
                           desc.str());
}

double DerivativeConsistency(const HamiltonianFamily& family, std::uint64_t seed, int samples,
                             double h) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(h, 1.0 - h);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double s = uniform(rng);
    const Operator fd = (family.H(s + h).matrix() - family.H(s - h).matrix()) / (2.0 * h);
    worst = std::max(worst, OperatorNorm(family(s).dH.matrix() - fd));
  }
  return worst;
}

GapFunction GroverGap(int n) {
  const double eps = std::ldexp(1.0, -n);
  GapFunction g;
  g.value = [eps](double u) { return std::sqrt(eps + 4.0 * (1.0 - eps) * (u - 0.5) * (u - 0.5)); };
  g.derivative = [eps](double u) {
    const double value = std::sqrt(eps + 4.0 * (1.0 - eps) * (u - 0.5) * (u - 0.5));
    return 4.0 * (1.0 - eps) * (u - 0.5) / value;
  };
  return g;
}

double GroverMinimalGap(int n) { return std::sqrt(std::ldexp(1.0, -n)); }

std::pair<HermitianOperator, HermitianOperator> GroverEndpoints(const GroverProblem& problem) {
  const int n = problem.n;
  if (n < 1) Fail(ErrorCode::kInvalidArgument, "Grover problem needs n >= 1");
  if (problem.representation == GroverRepresentation::kFull && n > 12) {
    Fail(ErrorCode::kDimensionTooLarge, "full Grover representation supports n <= 12");
  }
  if (n > 40) Fail(ErrorCode::kDimensionTooLarge, "Grover problem supports n <= 40");
  if (n < 64 && problem.marked >= (std::uint64_t{1} << n)) {
    Fail(ErrorCode::kInvalidArgument, "marked element out of range");
  }

  if (problem.representation == GroverRepresentation::kReduced) {
    // |0^> = a|u> + b|phi>, a = 2^(-n/2), b = sqrt(1 - 2^-n).
    const double a = std::sqrt(std::ldexp(1.0, -n));
    const double b = std::sqrt(1.0 - std::ldexp(1.0, -n));
    Eigen::Vector2cd uniform(a, b);
    Operator h0 = Operator::Identity(2, 2) - uniform * uniform.adjoint();
    Operator h1 = Operator::Identity(2, 2);
    h1(0, 0) = 0.0;
    return {HermitianOperator::Symmetrized(h0), HermitianOperator::Symmetrized(h1)};
  }

  const Eigen::Index dim = Eigen::Index{1} << n;
  const Eigen::VectorXcd uniform =
      Eigen::VectorXcd::Constant(dim, Complex(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
  Operator h0 = Operator::Identity(dim, dim) - uniform * uniform.adjoint();
  Operator h1 = Operator::Identity(dim, dim);
  h1(static_cast<Eigen::Index>(problem.marked), static_cast<Eigen::Index>(problem.marked)) = 0.0;
  return {HermitianOperator::Symmetrized(h0), HermitianOperator::Symmetrized(h1)};
}

GroverFamily MakeGroverFamily(const GroverProblem& problem, const Schedule& schedule) {
  auto [h0, h1] = GroverEndpoints(problem);
  const GapFunction gap = GroverGap(problem.n);
  HamiltonianFamily base = InterpolatingFamily(h0, h1, schedule);
  std::ostringstream desc;
  desc << "grover[n=" << problem.n << ","
       << (problem.representation == GroverRepresentation::kFull ? "full" : "reduced") << ","
       << schedule.name() << "]";
  return GroverFamily{base.Renamed(desc.str()),
                      [gap, schedule](double s) { return gap.value(schedule(s).f); }};
}

}  // namespace adiaband
