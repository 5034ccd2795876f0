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
#include <optional>
#include <string>

namespace adiaband {

/// f(s) and its first three derivatives.
struct ScheduleValue {
  double f = 0.0;
  double df = 0.0;
  double d2f = 0.0;
  double d3f = 0.0;
};

struct AdaptiveScheduleParams {
  double p = 1.5;
  double k = 1.0;
  std::size_t grid_points = 10000;
};

enum class ScheduleKind { kLinear, kSmoothSwitching, kBump, kAdaptive, kCustom };

/// Interpolation schedule s -> f(s) on [0, 1]. Immutable; cheap to copy.
class Schedule {
 public:
  using Eval = std::function<ScheduleValue(double)>;

  Schedule(ScheduleKind kind, std::string name, Eval eval);

  ScheduleValue operator()(double s) const { return eval_(s); }
  ScheduleKind kind() const noexcept { return kind_; }
  /// Config-style name: "linear", "beta:k=3", "bump", "adaptive:p=1.5".
  const std::string& name() const noexcept { return name_; }
  /// Set only for adaptive schedules.
  const std::optional<AdaptiveScheduleParams>& adaptive_params() const noexcept {
    return adaptive_;
  }
  Schedule WithAdaptiveParams(const AdaptiveScheduleParams& params) const;

 private:
  ScheduleKind kind_;
  std::string name_;
  Eval eval_;
  std::optional<AdaptiveScheduleParams> adaptive_;
};

/// Throws kEndpointViolation / kInvalidArgument unless f(0) = 0, f(1) = 1
/// (within 1e-10) and f is non-decreasing on a 1e-3 grid. Custom schedules
/// skip the endpoint check.
void ValidateSchedule(const Schedule& schedule);

Schedule LinearSchedule();

/// Regularized incomplete beta I_s(k, k): derivatives 1..k-1 vanish at both
/// endpoints.
Schedule SmoothSwitchingSchedule(int k);

/// Normalized running integral of exp(-1/(s(1-s))); C-infinity, every
/// derivative vanishes at the endpoints.
Schedule BumpSchedule();

/// Gap profile u -> g(u) on [0, 1]. `derivative` may be empty, in which case
/// a central difference is used.
struct GapFunction {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};

/// k = integral over [0, 1] of g(u)^-p.
double AdaptiveNormalization(const GapFunction& gap, double p);

/// Solves f(0) = 0, f' = k g(f)^p with RK4 on `grid_points` uniform steps.
Schedule AdaptiveSchedule(const GapFunction& gap, double p, std::size_t grid_points = 10000);

}  // namespace adiaband
