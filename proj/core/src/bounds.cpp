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

#include "adiaband/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <Eigen/Eigenvalues>
#include <limits>
#include <sstream>

#include "adiaband/error.hpp"
#include "adiaband/quadrature.hpp"

namespace adiaband {

namespace {

// Largest singular value of a d x m matrix through its m x m Gram matrix.
double BandColumnNorm(const Operator& a) {
  RequireFinite(a, "BandColumnNorm");
  if (a.cols() == 1) return a.norm();
  const Operator gram = a.adjoint() * a;
  Eigen::SelfAdjointEigenSolver<Operator> solver(gram, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) Fail(ErrorCode::kConvergenceFailure, "eigensolver failed");
  return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
}

}  // namespace

BoundIngredients EvaluateIngredients(const HamiltonianFamily& family, double s,
                                     const BandSelector& band, const NumericalPolicy& policy) {
  const BandDerivatives d = EvaluateBandDerivatives(family, s, band, policy);
  BoundIngredients x;
  x.s = s;
  x.m = static_cast<double>(d.bundle.m);
  x.gap = d.bundle.gap;
  // P', (P')~ are off-diagonal, so their norms equal those of the Q.P
  // blocks; each of these operators then equals itself times V_b V_b^dagger.
  const auto vb = d.bundle.spectrum.eigenvectors.middleCols(
      static_cast<Eigen::Index>(d.bundle.first), static_cast<Eigen::Index>(d.bundle.rank));
  x.norm_dP = BandColumnNorm(d.dP * vb);
  x.norm_tdP = BandColumnNorm(d.tdP * vb);
  x.norm_qd2Pp = BandColumnNorm(d.bundle.Q * (d.d2P * vb));
  x.norm_qdtdPp = BandColumnNorm(d.q_dtdP_p * vb);
  x.norm_dH = OperatorNorm(d.sample.dH);
  x.norm_d2H = OperatorNorm(d.sample.d2H);
  x.norm_d3H = OperatorNorm(d.sample.d3H);
  x.h = std::max({x.norm_dH, x.norm_d2H, x.norm_d3H});
  return x;
}

double TightBoundary(const BoundIngredients& x) { return std::sqrt(x.m) * x.norm_dP / x.gap; }

double TightIntegrand(const BoundIngredients& x) {
  const double g = x.gap;
  return std::sqrt(x.m) * (x.norm_qd2Pp + x.norm_dP * x.norm_dP) / g +
         2.0 * x.m * x.norm_dH * x.norm_dP / (g * g);
}

double CoarseBoundary(const BoundIngredients& x) { return x.m * x.norm_dH / (x.gap * x.gap); }

double CoarseIntegrand(const BoundIngredients& x) {
  const double g = x.gap;
  return x.m * x.norm_d2H / (g * g) + 7.0 * x.m * std::sqrt(x.m) * x.norm_dH * x.norm_dH / (g * g * g);
}

namespace {

double Theorem4FirstTerm(const BoundIngredients& x) { return x.m * x.h / (x.gap * x.gap); }
double Pow(double v, int k) { return std::pow(v, k); }
double H2G3(const BoundIngredients& x) { return x.h * x.h / Pow(x.gap, 3); }
double H2G4(const BoundIngredients& x) { return x.h * x.h / Pow(x.gap, 4); }
double H2G5(const BoundIngredients& x) { return x.h * x.h / Pow(x.gap, 5); }

bool Agrees(double fine, double coarse, double rel_tol) {
  return std::abs(fine - coarse) <= rel_tol * std::max(std::abs(fine), 1e-14);
}

void RequireTau(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) Fail(ErrorCode::kInvalidArgument, "tau must be > 0");
}

std::vector<BoundIngredients> SampleMesh(const HamiltonianFamily& family, const BandSelector& band,
                                         double s, std::size_t points,
                                         const NumericalPolicy& policy) {
  std::vector<BoundIngredients> out(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double t = s * static_cast<double>(i) / static_cast<double>(points - 1);
    out[i] = EvaluateIngredients(family, t, band, policy);
  }
  return out;
}

template <typename F>
std::vector<double> Map(const std::vector<BoundIngredients>& xs, F f) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(f(x));
  return out;
}

std::vector<double> EveryOther(const std::vector<double>& v) {
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); i += 2) out.push_back(v[i]);
  return out;
}

}  // namespace

FirstOrderBound Theorem3Bound(const HamiltonianFamily& family, const BandSelector& band,
                              double tau, double s, std::size_t quadrature_points,
                              const NumericalPolicy& policy) {
  RequireTau(tau);
  if (quadrature_points < 5 || quadrature_points % 4 != 1) {
    Fail(ErrorCode::kInvalidArgument, "quadrature_points must be 4k + 1 and >= 5");
  }
  const BandSelector resolved = ResolveBand(family, band, policy);
  FirstOrderBound out;
  if (s <= 0.0) {
    out.at_zero = EvaluateIngredients(family, 0.0, resolved, policy);
    out.at_s = out.at_zero;
  } else {
    const auto mesh = SampleMesh(family, resolved, s, quadrature_points, policy);
    out.at_zero = mesh.front();
    out.at_s = mesh.back();
    const double h = s / static_cast<double>(quadrature_points - 1);
    const auto tight = Map(mesh, TightIntegrand);
    const auto coarse = Map(mesh, CoarseIntegrand);
    out.tight_integral = quadrature::Simpson(tight, h);
    out.coarse_integral = quadrature::Simpson(coarse, h);
    const double tight_half = quadrature::Simpson(EveryOther(tight), 2.0 * h);
    const double coarse_half = quadrature::Simpson(EveryOther(coarse), 2.0 * h);
    if (!Agrees(out.tight_integral, tight_half, policy.quadrature_rel_tol) ||
        !Agrees(out.coarse_integral, coarse_half, policy.quadrature_rel_tol)) {
      std::ostringstream msg;
      msg << "Simpson refinement disagrees: " << out.tight_integral << " vs " << tight_half;
      Fail(ErrorCode::kQuadratureNotConverged, msg.str());
    }
  }
  out.a_tight = (TightBoundary(out.at_zero) + TightBoundary(out.at_s) + out.tight_integral) / tau;
  out.a_coarse =
      (CoarseBoundary(out.at_zero) + CoarseBoundary(out.at_s) + out.coarse_integral) / tau;
  return out;
}

double Theorem4Bound(const HamiltonianFamily& family, const BandSelector& band, double tau,
                     double s, double c, std::size_t quadrature_points,
                     const NumericalPolicy& policy) {
  RequireTau(tau);
  if (quadrature_points < 5 || quadrature_points % 4 != 1) {
    Fail(ErrorCode::kInvalidArgument, "quadrature_points must be 4k + 1 and >= 5");
  }
  const BandSelector resolved = ResolveBand(family, band, policy);
  const auto mesh = SampleMesh(family, resolved, std::max(s, 0.0), quadrature_points, policy);
  const auto& x0 = mesh.front();
  const auto& xs = mesh.back();
  const double first = (Theorem4FirstTerm(x0) + Theorem4FirstTerm(xs)) / tau;
  if (c == 0.0) return first;
  double bracket = H2G4(x0) + H2G4(xs);
  if (s > 0.0) {
    const double h = s / static_cast<double>(quadrature_points - 1);
    const auto q3 = Map(mesh, H2G3);
    const auto q5 = Map(mesh, H2G5);
    const auto inner = quadrature::CumulativeSimpson<double>(q3, h);
    std::vector<double> nested(q3.size());
    for (std::size_t i = 0; i < q3.size(); ++i) nested[i] = q3[i] * inner[i];
    bracket += x0.h / (x0.gap * x0.gap) * inner.back() + quadrature::Simpson(q5, h) +
               quadrature::Simpson(nested, h);
  }
  return first + c / (tau * tau) * bracket;
}

BoundProfile EvaluateBoundProfile(const HamiltonianFamily& family, const BandSelector& band,
                                  double tau, const TimeGrid& grid, double theorem4_c,
                                  const NumericalPolicy& policy) {
  RequireTau(tau);
  const BandSelector resolved = ResolveBand(family, band, policy);
  const std::size_t n = grid.size();

  // Mesh with `r` panels per grid interval; refined by doubling.
  std::size_t r = 1;
  std::vector<BoundIngredients> mesh(n);
  for (std::size_t k = 0; k < n; ++k) mesh[k] = EvaluateIngredients(family, grid[k], resolved, policy);

  struct Totals {
    double tight, coarse, q3, q5;
  };
  auto totals = [](const std::vector<BoundIngredients>& xs, double h) {
    auto total = [&](auto f) {
      return quadrature::CumulativeSimpson<double>(Map(xs, f), h).back();
    };
    return Totals{total(TightIntegrand), total(CoarseIntegrand), total(H2G3), total(H2G5)};
  };
  Totals previous = totals(mesh, grid.step());
  constexpr std::size_t kMaxRefinement = 64;
  while (true) {
    if (r >= kMaxRefinement) {
      Fail(ErrorCode::kQuadratureNotConverged, "bound integrals did not converge under refinement");
    }
    const std::size_t r2 = 2 * r;
    const std::size_t points = (n - 1) * r2 + 1;
    std::vector<BoundIngredients> finer(points);
    for (std::size_t i = 0; i < points; ++i) {
      if (i % 2 == 0) {
        finer[i] = mesh[i / 2];
      } else {
        const double t = static_cast<double>(i) / static_cast<double>(points - 1);
        finer[i] = EvaluateIngredients(family, t, resolved, policy);
      }
    }
    const Totals current = totals(finer, 1.0 / static_cast<double>(points - 1));
    mesh = std::move(finer);
    r = r2;
    const double tol = policy.quadrature_rel_tol;
    if (Agrees(current.tight, previous.tight, tol) && Agrees(current.coarse, previous.coarse, tol) &&
        Agrees(current.q3, previous.q3, tol) && Agrees(current.q5, previous.q5, tol)) {
      break;
    }
    previous = current;
  }

  const double h = 1.0 / static_cast<double>(mesh.size() - 1);
  const auto tight = quadrature::CumulativeSimpson<double>(Map(mesh, TightIntegrand), h);
  const auto coarse = quadrature::CumulativeSimpson<double>(Map(mesh, CoarseIntegrand), h);
  const auto q3 = Map(mesh, H2G3);
  const auto inner = quadrature::CumulativeSimpson<double>(q3, h);
  std::vector<double> nested_integrand(q3.size());
  for (std::size_t i = 0; i < q3.size(); ++i) nested_integrand[i] = q3[i] * inner[i];
  const auto nested = quadrature::CumulativeSimpson<double>(nested_integrand, h);
  const auto q5 = quadrature::CumulativeSimpson<double>(Map(mesh, H2G5), h);

  BoundProfile out;
  out.refinement = r;
  const auto& x0 = mesh.front();
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = k * r;
    const auto& xs = mesh[i];
    out.s.push_back(grid[k]);
    out.ingredients.push_back(xs);
    out.a_tight.push_back((TightBoundary(x0) + TightBoundary(xs) + tight[i]) / tau);
    out.a_coarse.push_back((CoarseBoundary(x0) + CoarseBoundary(xs) + coarse[i]) / tau);
    const double first = (Theorem4FirstTerm(x0) + Theorem4FirstTerm(xs)) / tau;
    const double bracket =
        H2G4(x0) + H2G4(xs) + x0.h / (x0.gap * x0.gap) * inner[i] + q5[i] + nested[i];
    out.theorem4_first.push_back(first);
    out.theorem4_bracket.push_back(bracket);
    out.a_theorem4.push_back(first + theorem4_c / (tau * tau) * bracket);
  }
  return out;
}

double FitTheorem4Constant(const BoundProfile& profile, const std::vector<double>& measured,
                           double tau) {
  if (measured.size() != profile.s.size()) Fail(ErrorCode::kGridMismatch, "measured vs profile size");
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < measured.size(); ++k) {
    const double bracket = profile.theorem4_bracket[k];
    if (!(bracket > 0.0)) continue;
    best = std::max(best, (measured[k] - profile.theorem4_first[k]) * tau * tau / bracket);
  }
  return best;
}

std::vector<InequalityCheck> Lemma8Chain(const HamiltonianFamily& family, const BandSelector& band,
                                         double s, double slack, const NumericalPolicy& policy) {
  const BoundIngredients x = EvaluateIngredients(family, s, band, policy);
  const double m = x.m, g = x.gap, rm = std::sqrt(m);
  std::vector<InequalityCheck> out;
  auto add = [&](std::string name, double lhs, double rhs) {
    out.push_back({std::move(name), lhs, rhs, lhs <= rhs + slack});
  };
  add("|P'| <= sqrt(m)|H'|/g", x.norm_dP, rm * x.norm_dH / g);
  add("|(P')~| <= sqrt(m)|P'|/g", x.norm_tdP, rm * x.norm_dP / g);
  add("sqrt(m)|P'|/g <= m|H'|/g^2", rm * x.norm_dP / g, m * x.norm_dH / (g * g));
  add("|QP''P| <= sqrt(m)|H''|/g + 4m|H'|^2/g^2", x.norm_qd2Pp,
      rm * x.norm_d2H / g + 4.0 * m * x.norm_dH * x.norm_dH / (g * g));
  const double middle = rm * x.norm_qd2Pp / g + 2.0 * m * x.norm_dH * x.norm_dP / (g * g);
  add("|Q((P')~)'P| <= sqrt(m)|QP''P|/g + 2m|H'||P'|/g^2", x.norm_qdtdPp, middle);
  add("sqrt(m)|QP''P|/g + 2m|H'||P'|/g^2 <= m|H''|/g^2 + 6m sqrt(m)|H'|^2/g^3", middle,
      m * x.norm_d2H / (g * g) + 6.0 * m * rm * x.norm_dH * x.norm_dH / (g * g * g));
  return out;
}

namespace {

// (T2, Q T1' P) at s, where T1 = (P')~ and T2 = (T1')~ built from the
// off-diagonal blocks of T1'.
struct SecondOrderTerms {
  BandDerivatives d;
  Operator q_dT1_p;
  Operator T2;
};

SecondOrderTerms SecondOrderAt(const HamiltonianFamily& family, double s, const BandSelector& band,
                               const NumericalPolicy& policy) {
  SecondOrderTerms t;
  t.d = EvaluateBandDerivatives(family, s, band, policy);
  t.q_dT1_p = t.d.q_dtdP_p;
  const Operator off_diagonal = t.q_dT1_p + t.q_dT1_p.adjoint();
  t.T2 = Twiddle(off_diagonal, t.d.bundle);
  return t;
}

}  // namespace

double ExpansionResidual(const HamiltonianFamily& family, const BandSelector& band,
                         const WaveOperatorTrace& wave, const NumericalPolicy& policy) {
  RequireTau(wave.tau);
  const BandSelector resolved = ResolveBand(family, band, policy);
  const std::size_t n = wave.grid.size();
  const double tau = wave.tau;
  const double fd = policy.fd_step;
  const Complex i_unit(0.0, 1.0);

  std::vector<Operator> a1(n), a2(n), f3(n), f4(n), f5(n), exact(n);
  Operator p0, q0, t1_zero;
  for (std::size_t k = 0; k < n; ++k) {
    const double s = wave.grid[k];
    const SecondOrderTerms t = SecondOrderAt(family, s, resolved, policy);
    // dT2/ds by central differences, one-sided at the ends of [0, 1].
    Operator dT2;
    if (s - fd < 0.0) {
      dT2 = (-3.0 * t.T2 + 4.0 * SecondOrderAt(family, s + fd, resolved, policy).T2 -
             SecondOrderAt(family, s + 2 * fd, resolved, policy).T2) / (2.0 * fd);
    } else if (s + fd > 1.0) {
      dT2 = (3.0 * t.T2 - 4.0 * SecondOrderAt(family, s - fd, resolved, policy).T2 +
             SecondOrderAt(family, s - 2 * fd, resolved, policy).T2) / (2.0 * fd);
    } else {
      dT2 = (SecondOrderAt(family, s + fd, resolved, policy).T2 -
             SecondOrderAt(family, s - fd, resolved, policy).T2) / (2.0 * fd);
    }
    const Operator& P = t.d.bundle.P;
    const Operator& dP = t.d.dP;
    const Operator& T1 = t.d.tdP;
    if (k == 0) {
      p0 = P;
      q0 = t.d.bundle.Q;
      t1_zero = T1;
    }
    const Operator& ua = wave.adiabatic[k];
    auto conj = [&](const Operator& x) -> Operator { return ua.adjoint() * x * ua; };
    const Operator& omega = wave.omega[k];
    const Operator w = p0 * omega * p0;
    a1[k] = q0 * conj(T1) * w;
    a2[k] = q0 * conj(t.T2) * w;
    f3[k] = q0 * conj(dT2 * P + t.T2 * dP + T1 * dP * T1) * omega * p0;
    f4[k] = q0 * conj(T1 * dP);
    f5[k] = q0 * conj(t.q_dT1_p + T1 * dP) * omega * p0;
    exact[k] = q0 * omega * p0;
  }
  const double h = wave.grid.step();
  const auto i3 = quadrature::CumulativeSimpson<Operator>(f3, h);
  const auto i4 = quadrature::CumulativeSimpson<Operator>(f4, h);
  const auto i5 = quadrature::CumulativeSimpson<Operator>(f5, h);
  std::vector<Operator> f6(n);
  for (std::size_t k = 0; k < n; ++k) f6[k] = f4[k] * i5[k];
  const auto i6 = quadrature::CumulativeSimpson<Operator>(f6, h);

  const double inv2 = 1.0 / (tau * tau);
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const Operator rhs = -(i_unit / tau) * (a1[k] - a1[0]) - inv2 * (a2[k] - a2[0]) +
                         inv2 * i3[k] - inv2 * i4[k] * t1_zero * p0 - inv2 * i6[k];
    worst = std::max(worst, OperatorNorm(exact[k] - rhs));
  }
  return worst;
}

double TraditionalCriterion(const HamiltonianFamily& family, const BandSelector& band,
                            std::size_t points, const NumericalPolicy& policy) {
  if (points < 2) Fail(ErrorCode::kInvalidArgument, "criterion grid needs >= 2 points");
  const BandSelector resolved = ResolveBand(family, band, policy);
  double best = 0.0;
  for (std::size_t k = 0; k < points; ++k) {
    const double s = static_cast<double>(k) / static_cast<double>(points - 1);
    const FamilySample sample = family(s);
    const ProjectorBundle bundle = BandProjector(SpectralDecompose(sample.H, policy), resolved, policy);
    best = std::max(best, OperatorNorm(sample.dH) / (bundle.gap * bundle.gap));
  }
  return best;
}

}  // namespace adiaband
