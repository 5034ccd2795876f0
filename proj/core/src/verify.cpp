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

#include "adiaband/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>

#include <nlohmann/json.hpp>

#include "adiaband/bounds.hpp"
#include "adiaband/error.hpp"
#include "adiaband/family.hpp"
#include "adiaband/propagator.hpp"
#include "adiaband/schedule.hpp"

namespace adiaband {

bool VerifyReport::passed() const { return failures() == 0; }

std::size_t VerifyReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const VerifyCheck& c) { return !c.passed; }));
}

const std::vector<std::pair<std::string, std::vector<std::string>>>& VerifyGroups() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> groups = {
      {"gap_formula", {"gap"}},
      {"twiddle_blocks", {"lemma2", "twiddle"}},
      {"twiddle_contour", {"lemma5", "twiddle"}},
      {"g_operator", {"lemma5"}},
      {"projector_derivative", {"lemma6"}},
      {"twiddle_norm", {"lemma7"}},
      {"norm_chain", {"lemma8"}},
      {"intertwining", {"lemma1", "dynamics"}},
      {"volterra", {"dynamics"}},
      {"expansion", {"dynamics"}},
      {"bound_validity", {"theorem3", "dynamics"}},
  };
  return groups;
}

namespace {

/// Running worst case of one named check.
class Tally {
 public:
  Tally(std::string group, std::string name, double threshold)
      : check_{std::move(group), std::move(name), -std::numeric_limits<double>::infinity(),
               threshold, 0, true} {}
  void Add(double value) {
    ++check_.cases;
    if (std::isnan(value) || value > check_.threshold) check_.passed = false;
    if (std::isnan(value) || value > check_.value) check_.value = value;
  }
  VerifyCheck Done() const { return check_; }

 private:
  VerifyCheck check_;
};

struct Instance {
  HamiltonianFamily family;
  BandSelector band;
  double s;
  Operator x;
  Operator y;
};

Operator RandomUnitNorm(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Operator x(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) x(i, j) = Complex(normal(rng), normal(rng));
  }
  return x / OperatorNorm(x);
}

std::vector<Instance> MakeInstances(const VerifyOptions& options) {
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  std::vector<Instance> out;
  for (std::size_t i = 0; i < options.instances; ++i) {
    const double s = unit(rng);
    if (i % 4 == 3) {
      const int n = 2 + static_cast<int>((i / 4) % 3);
      const auto grover = MakeGroverFamily({n, 0, GroverRepresentation::kFull}, LinearSchedule());
      const Eigen::Index d = grover.family.dim();
      const BandSelector band = (i / 4) % 2 == 0
                                    ? BandSelector::Eigen(0, 1)
                                    : BandSelector::Eigen(2, static_cast<std::size_t>(d - 2));
      out.push_back({grover.family, band, s, RandomUnitNorm(d, rng), RandomUnitNorm(d, rng)});
      continue;
    }
    const Eigen::Index dim = 2 + static_cast<Eigen::Index>((i / 4) % 7);
    const HamiltonianFamily family = RandomSmoothFamily(dim, options.seed + i, 2);
    const auto count = 1 + static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(dim - 1));
    const auto first = static_cast<std::size_t>(rng() % (static_cast<std::uint64_t>(dim) - count + 1));
    out.push_back({family, BandSelector::Eigen(first, count), s, RandomUnitNorm(dim, rng),
                   RandomUnitNorm(dim, rng)});
  }
  return out;
}

Operator ConvergedContour(const std::function<Operator(const ContourSpec&)>& integral) {
  ContourSpec spec;
  Operator previous = integral(spec);
  while (spec.nodes < 16384) {
    spec.nodes *= 2;
    Operator current = integral(spec);
    const double change = OperatorNorm(current - previous);
    previous = std::move(current);
    if (change <= 1e-13 * std::max(1.0, OperatorNorm(previous))) break;
  }
  return previous;
}

/// Fourth-order central difference of an operator-valued function.
Operator Derivative(const std::function<Operator(double)>& f, double s, double h) {
  const Operator d1 = (f(s + h) - f(s - h)) / (2.0 * h);
  const Operator d2 = (f(s + 2 * h) - f(s - 2 * h)) / (4.0 * h);
  return (4.0 * d1 - d2) / 3.0;
}

void StaticChecks(const VerifyOptions& options, const std::string& group,
                  std::vector<VerifyCheck>& out) {
  const NumericalPolicy policy;
  const auto instances = MakeInstances(options);
  Tally commutator(group, "[H, X~] = PX - XP", 1e-8);
  Tally blocks(group, "P X~ P = Q X~ Q = 0", 1e-9);
  Tally adiabatic(group, "P[H^A, X~]Q = PXQ, Q[H^A, X~]P = -QXP", 1e-8);
  Tally contour(group, "X~ vs contour quadrature (relative)", 1e-8);
  Tally riesz(group, "P vs Riesz contour quadrature", 1e-8);
  Tally gop(group, "G(A, B) vs contour quadrature (relative)", 1e-7);
  Tally dp(group, "P' = (H')~ vs finite differences", 1e-6);
  Tally dtdp(group, "Q ((P')~)' P vs finite differences (relative)", 1e-5);
  Tally norm(group, "||X~|| - sqrt(m)||X||/g", 1e-10);
  Tally chain(group, "norm chain violations", 0.0);

  for (const Instance& inst : instances) {
    const FamilySample sample = inst.family(inst.s);
    const ProjectorBundle bundle = BundleAt(inst.family, inst.s, inst.band, policy);
    const Operator& H = sample.H.matrix();
    const Operator& P = bundle.P;
    const Operator& Q = bundle.Q;
    const Operator& X = inst.x;
    const Operator tx = options.twiddle(X, bundle);
    if (group == "twiddle_blocks") {
      commutator.Add(OperatorNorm(Commutator(H, tx) - (P * X - X * P)));
      blocks.Add(std::max(OperatorNorm(P * tx * P), OperatorNorm(Q * tx * Q)));
      const double tau = 10.0;
      const Operator dP = ProjectorDerivative(sample, bundle);
      const Operator ha = H + Complex(0.0, 1.0 / tau) * Commutator(dP, P);
      const Operator c = Commutator(ha, tx);
      adiabatic.Add(std::max(OperatorNorm(P * c * Q - P * X * Q), OperatorNorm(Q * c * P + Q * X * P)));
    } else if (group == "twiddle_contour") {
      const Operator oracle = ConvergedContour([&](const ContourSpec& spec) {
        return TwiddleContourOracle(X, sample.H, bundle, spec, policy);
      });
      contour.Add(OperatorNorm(tx - oracle) / std::max(OperatorNorm(oracle), 1e-300));
      const Operator p_oracle = ConvergedContour([&](const ContourSpec& spec) {
        return RieszProjectorOracle(sample.H, bundle, spec, policy);
      });
      riesz.Add(OperatorNorm(P - p_oracle));
    } else if (group == "g_operator") {
      const Operator oracle = ConvergedContour([&](const ContourSpec& spec) {
        return GOperator(X, inst.y, sample.H, bundle, spec, policy);
      });
      const Operator algebraic = GOperatorAlgebraic(X, inst.y, bundle);
      gop.Add(OperatorNorm(algebraic - oracle) / std::max(OperatorNorm(oracle), 1e-300));
    } else if (group == "projector_derivative") {
      const double h = 1e-3 * std::min(1.0, bundle.gap);
      auto projector = [&](double t) { return BundleAt(inst.family, t, inst.band, policy).P; };
      dp.Add(OperatorNorm(ProjectorDerivative(sample, bundle) - Derivative(projector, inst.s, h)));
      auto tdp = [&](double t) {
        const FamilySample x = inst.family(t);
        const ProjectorBundle b = BundleAt(inst.family, t, inst.band, policy);
        return Twiddle(ProjectorDerivative(x, b), b);
      };
      const Operator fd = Q * Derivative(tdp, inst.s, h) * P;
      const Operator analytic = TwiddleDerivative(inst.family, inst.s, inst.band, policy);
      dtdp.Add(OperatorNorm(analytic - fd) / std::max(1.0, OperatorNorm(analytic)));
    } else if (group == "twiddle_norm") {
      const double rm = std::sqrt(static_cast<double>(bundle.m));
      for (const Operator& y : {X, Operator(sample.dH.matrix()), ProjectorDerivative(sample, bundle)}) {
        const double rhs = rm * OperatorNorm(y) / bundle.gap;
        norm.Add((OperatorNorm(options.twiddle(y, bundle)) - rhs) / std::max(rhs, 1e-300));
      }
    } else if (group == "norm_chain") {
      const auto checks = Lemma8Chain(inst.family, inst.band, inst.s);
      chain.Add(static_cast<double>(
          std::count_if(checks.begin(), checks.end(), [](const InequalityCheck& c) { return !c.holds; })));
    }
  }
  for (const Tally* t : {&commutator, &blocks, &adiabatic, &contour, &riesz, &gop, &dp, &dtdp,
                         &norm, &chain}) {
    if (t->Done().cases > 0) out.push_back(t->Done());
  }
}

void GapChecks(std::vector<VerifyCheck>& out) {
  Tally formula("gap_formula", "full-matrix gap vs closed form, n = 2..6", 1e-10);
  Tally minimum("gap_formula", "g(1/2) = 2^(-n/2), n = 2..6", 1e-10);
  for (int n = 2; n <= 6; ++n) {
    const auto grover = MakeGroverFamily({n, 0, GroverRepresentation::kFull}, LinearSchedule());
    const GapFunction gap = GroverGap(n);
    const BandSelector band = BandSelector::Ground();
    for (int k = 0; k < 20; ++k) {
      const double s = k / 19.0;
      formula.Add(std::abs(BundleAt(grover.family, s, band).gap - gap.value(s)));
    }
    minimum.Add(std::abs(BundleAt(grover.family, 0.5, band).gap - std::pow(2.0, -0.5 * n)));
  }
  out.push_back(formula.Done());
  out.push_back(minimum.Done());
}

struct FleetMember {
  HamiltonianFamily family;
  double tau;
  /// Second-order expansion terms scale like ||H'||^2 / g^4; only members
  /// deep in the adiabatic regime give a well-conditioned residual.
  bool expansion;
};

std::vector<FleetMember> StandardFleet() {
  const GroverProblem n3{3, 0, GroverRepresentation::kFull};
  const GroverProblem n2{2, 0, GroverRepresentation::kFull};
  return {
      {MakeGroverFamily(n3, LinearSchedule()).family, 100.0, true},
      {MakeGroverFamily(n2, AdaptiveSchedule(GroverGap(2), 1.5)).family, 100.0, true},
      {RandomSmoothFamily(6, 7, 2), 50.0, false},
  };
}

void DynamicChecks(const std::string& group, std::vector<VerifyCheck>& out) {
  const NumericalPolicy policy;
  const TimeGrid grid = TimeGrid::Uniform(1025);
  const BandSelector band = BandSelector::Ground();
  Tally intertwining(group, "||U^A(s) P(0) - P(s) U^A(s)||", 1e-6);
  Tally volterra(group, "Volterra equation residual", 1e-5);
  Tally expansion(group, "second-order expansion residual", 1e-4);
  Tally distance(group, "||P_tau - P|| - A_tight", 1e-6);
  Tally leak(group, "transition probability - A_tight^2", 1e-6);
  Tally order(group, "A_tight - A_coarse", 0.0);
  for (const FleetMember& member : StandardFleet()) {
    if (group == "expansion" && !member.expansion) continue;
    const PropagatorTrace adiabatic = EvolveAdiabatic(member.family, band, member.tau, grid, policy);
    if (group == "intertwining") {
      const auto r = IntertwiningResidual(adiabatic, member.family, band, policy);
      intertwining.Add(*std::max_element(r.begin(), r.end()));
      continue;
    }
    const PropagatorTrace real = EvolveReal(member.family, member.tau, grid, policy);
    if (group == "volterra" || group == "expansion") {
      const WaveOperatorTrace wave = WaveOperator(real, adiabatic);
      if (group == "volterra") {
        volterra.Add(VolterraResidual(wave, member.family, band, policy));
      } else {
        expansion.Add(ExpansionResidual(member.family, band, wave, policy));
      }
      continue;
    }
    const auto diag = AdiabaticDiagnostics(real, member.family, band, policy);
    const auto profile = EvaluateBoundProfile(member.family, band, member.tau, grid, 1.0, policy);
    for (std::size_t k = 0; k < diag.size(); ++k) {
      const double a = profile.a_tight[k];
      distance.Add(diag[k].proj_distance - a);
      leak.Add(diag[k].transition_prob - a * a);
      order.Add(a - profile.a_coarse[k]);
    }
  }
  for (const Tally* t : {&intertwining, &volterra, &expansion, &distance, &leak, &order}) {
    if (t->Done().cases > 0) out.push_back(t->Done());
  }
}

bool Selected(const std::string& filter, const std::string& group,
              const std::vector<std::string>& aliases) {
  if (filter.empty() || filter == group) return true;
  return std::find(aliases.begin(), aliases.end(), filter) != aliases.end();
}

}  // namespace

VerifyReport RunVerifySuite(const VerifyOptions& options) {
  VerifyReport report;
  bool any = false;
  for (const auto& [group, aliases] : VerifyGroups()) {
    if (!Selected(options.filter, group, aliases)) continue;
    any = true;
    if (group == "gap_formula") {
      GapChecks(report.checks);
    } else if (group == "intertwining" || group == "volterra" || group == "expansion" ||
               group == "bound_validity") {
      DynamicChecks(group, report.checks);
    } else {
      StaticChecks(options, group, report.checks);
    }
  }
  if (!any) Fail(ErrorCode::kInvalidArgument, "verify filter matches no check: " + options.filter);
  return report;
}

void WriteVerifyJson(std::ostream& out, const VerifyReport& report) {
  nlohmann::ordered_json doc;
  doc["passed"] = report.passed();
  doc["failures"] = report.failures();
  doc["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    doc["checks"].push_back({{"group", c.group},
                             {"name", c.name},
                             {"value", c.value},
                             {"threshold", c.threshold},
                             {"cases", c.cases},
                             {"passed", c.passed}});
  }
  out << doc.dump(2) << '\n';
}

}  // namespace adiaband
