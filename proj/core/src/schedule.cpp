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

#include "adiaband/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <vector>

#include "adiaband/error.hpp"
#include "adiaband/quadrature.hpp"

namespace adiaband {

Schedule::Schedule(ScheduleKind kind, std::string name, Eval eval)
    : kind_(kind), name_(std::move(name)), eval_(std::move(eval)) {}

Schedule Schedule::WithAdaptiveParams(const AdaptiveScheduleParams& params) const {
  Schedule out = *this;
  out.adaptive_ = params;
  return out;
}

void ValidateSchedule(const Schedule& schedule) {
  if (schedule.kind() != ScheduleKind::kCustom) {
    const double f0 = schedule(0.0).f;
    const double f1 = schedule(1.0).f;
    if (std::abs(f0) > 1e-10 || std::abs(f1 - 1.0) > 1e-10) {
      std::ostringstream msg;
      msg << schedule.name() << ": f(0) = " << f0 << ", f(1) = " << f1;
      Fail(ErrorCode::kEndpointViolation, msg.str());
    }
  }
  double prev = schedule(0.0).f;
  for (int i = 1; i <= 1000; ++i) {
    const double cur = schedule(i * 1e-3).f;
    if (cur < prev - 1e-14) {
      Fail(ErrorCode::kInvalidArgument, schedule.name() + ": not monotone near s = " +
                                            std::to_string(i * 1e-3));
    }
    prev = cur;
  }
}

Schedule LinearSchedule() {
  return Schedule(ScheduleKind::kLinear, "linear",
                  [](double s) { return ScheduleValue{s, 1.0, 0.0, 0.0}; });
}

namespace {

// Polynomial with ascending coefficients.
struct Polynomial {
  std::vector<double> c;

  double operator()(double x) const {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Polynomial Derivative() const {
    Polynomial d;
    for (std::size_t i = 1; i < c.size(); ++i) d.c.push_back(static_cast<double>(i) * c[i]);
    if (d.c.empty()) d.c.push_back(0.0);
    return d;
  }
};

double Binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

Schedule SmoothSwitchingSchedule(int k) {
  if (k < 2) Fail(ErrorCode::kInvalidArgument, "smooth switching order must be >= 2");
  // f'(s) = s^(k-1) (1-s)^(k-1) / B(k, k), B(k, k) = ((k-1)!)^2 / (2k-1)!.
  const double inv_beta = Binomial(2 * k - 2, k - 1) * (2 * k - 1);
  Polynomial f;
  f.c.assign(static_cast<std::size_t>(2 * k), 0.0);
  for (int i = 0; i <= k - 1; ++i) {
    const int power = k - 1 + i;
    const double coeff = inv_beta * Binomial(k - 1, i) * (i % 2 == 0 ? 1.0 : -1.0);
    f.c[static_cast<std::size_t>(power + 1)] += coeff / (power + 1);
  }
  const Polynomial df = f.Derivative();
  const Polynomial d2f = df.Derivative();
  const Polynomial d3f = d2f.Derivative();
  return Schedule(ScheduleKind::kSmoothSwitching, "beta:k=" + std::to_string(k),
                  [f, df, d2f, d3f](double s) {
                    // Monomials cancel badly near s = 1; use I_s(k,k) = 1 - I_{1-s}(k,k).
                    if (s <= 0.5) return ScheduleValue{f(s), df(s), d2f(s), d3f(s)};
                    const double r = 1.0 - s;
                    return ScheduleValue{1.0 - f(r), df(r), -d2f(r), d3f(r)};
                  });
}

namespace {

struct BumpTable {
  static constexpr int kCells = 2048;
  std::vector<double> cumulative;  // unnormalized integral up to cell boundary
  double total = 0.0;

  static double Phi(double s) {
    if (s <= 0.0 || s >= 1.0) return 0.0;
    return std::exp(-1.0 / (s * (1.0 - s)));
  }

  BumpTable() {
    cumulative.resize(kCells + 1, 0.0);
    for (int i = 0; i < kCells; ++i) {
      const double a = static_cast<double>(i) / kCells;
      const double b = static_cast<double>(i + 1) / kCells;
      cumulative[i + 1] = cumulative[i] + quadrature::GaussLegendre15(Phi, a, b);
    }
    total = cumulative[kCells];
  }

  ScheduleValue Eval(double s) const {
    if (s <= 0.0) return {0.0, 0.0, 0.0, 0.0};
    if (s >= 1.0) return {1.0, 0.0, 0.0, 0.0};
    const int cell = std::min(kCells - 1, static_cast<int>(s * kCells));
    const double a = static_cast<double>(cell) / kCells;
    const double partial = cumulative[cell] + quadrature::GaussLegendre15(Phi, a, s);
    const double q = s * (1.0 - s);
    const double dq = 1.0 - 2.0 * s;
    const double phi = Phi(s);
    const double dphi = phi * dq / (q * q);
    const double d2phi = phi * (dq * dq / (q * q * q * q) - 2.0 / (q * q) - 2.0 * dq * dq / (q * q * q));
    return {partial / total, phi / total, dphi / total, d2phi / total};
  }
};

}  // namespace

Schedule BumpSchedule() {
  auto table = std::make_shared<const BumpTable>();
  return Schedule(ScheduleKind::kBump, "bump", [table](double s) { return table->Eval(s); });
}

namespace {

double GapDerivative(const GapFunction& gap, double u) {
  if (gap.derivative) return gap.derivative(u);
  constexpr double h = 1e-6;
  return (gap.value(u + h) - gap.value(u - h)) / (2.0 * h);
}

struct AdaptiveTable {
  GapFunction gap;
  double p = 1.5;
  double k = 1.0;
  std::size_t steps = 0;
  std::vector<double> f;   // f at s_i = i / steps
  std::vector<double> df;  // f' at s_i

  double Rate(double u) const { return k * std::pow(gap.value(u), p); }

  // f'' = k^2 p g^(2p-1)(f) g'(f), by the chain rule on f' = k g(f)^p.
  double SecondDerivative(double u) const {
    return k * k * p * std::pow(gap.value(u), 2.0 * p - 1.0) * GapDerivative(gap, u);
  }

  ScheduleValue Eval(double s) const {
    const double clamped = std::clamp(s, 0.0, 1.0);
    const double x = clamped * static_cast<double>(steps);
    const std::size_t i = std::min(steps - 1, static_cast<std::size_t>(x));
    const double h = 1.0 / static_cast<double>(steps);
    const double t = x - static_cast<double>(i);
    // Cubic Hermite interpolation between grid nodes.
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    const double value = h00 * f[i] + h10 * h * df[i] + h01 * f[i + 1] + h11 * h * df[i + 1];
    const double rate = Rate(value);
    const double second = SecondDerivative(value);
    constexpr double du = 1e-5;
    const double third = rate * (SecondDerivative(value + du) - SecondDerivative(value - du)) /
                         (2.0 * du);
    return {value, rate, second, third};
  }
};

}  // namespace

double AdaptiveNormalization(const GapFunction& gap, double p) {
  if (!gap.value) Fail(ErrorCode::kInvalidArgument, "gap function is empty");
  return quadrature::AdaptiveSimpson(
      [&](double u) {
        const double g = gap.value(u);
        if (!(g > 0.0)) {
          Fail(ErrorCode::kNonPositiveGap, "gap(" + std::to_string(u) + ") = " + std::to_string(g));
        }
        return std::pow(g, -p);
      },
      0.0, 1.0, 1e-12);
}

Schedule AdaptiveSchedule(const GapFunction& gap, double p, std::size_t grid_points) {
  if (!(p > 1.0 && p < 2.0)) Fail(ErrorCode::kInvalidArgument, "adaptive exponent must lie in (1, 2)");
  if (grid_points < 100) Fail(ErrorCode::kInvalidArgument, "adaptive schedule needs >= 100 steps");
  auto table = std::make_shared<AdaptiveTable>();
  table->gap = gap;
  table->p = p;
  table->k = AdaptiveNormalization(gap, p);
  table->steps = grid_points;
  table->f.resize(grid_points + 1);
  table->df.resize(grid_points + 1);

  const double h = 1.0 / static_cast<double>(grid_points);
  double u = 0.0;
  table->f[0] = 0.0;
  table->df[0] = table->Rate(0.0);
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double k1 = table->Rate(u);
    const double k2 = table->Rate(u + 0.5 * h * k1);
    const double k3 = table->Rate(u + 0.5 * h * k2);
    const double k4 = table->Rate(u + h * k3);
    u += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    table->f[i + 1] = u;
    table->df[i + 1] = table->Rate(u);
  }
  if (std::abs(u - 1.0) > 1e-6) {
    Fail(ErrorCode::kNormalizationFailure, "adaptive schedule ends at f(1) = " + std::to_string(u));
  }

  std::ostringstream name;
  name << "adaptive:p=" << p;
  Schedule out(ScheduleKind::kAdaptive, name.str(),
               [table = std::shared_ptr<const AdaptiveTable>(table)](double s) {
                 return table->Eval(s);
               });
  return out.WithAdaptiveParams({p, table->k, grid_points});
}

}  // namespace adiaband
