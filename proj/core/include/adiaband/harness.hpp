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
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "adiaband/bounds.hpp"
#include "adiaband/family.hpp"
#include "adiaband/numerical_policy.hpp"
#include "adiaband/propagator.hpp"
#include "adiaband/schedule.hpp"
#include "adiaband/spectral.hpp"

namespace adiaband {

enum class ProblemKind { kGrover, kRandom, kMatrixFile };

struct ProblemSpec {
  ProblemKind kind = ProblemKind::kGrover;
  int n = 2;
  GroverRepresentation representation = GroverRepresentation::kFull;
  std::uint64_t marked = 0;
  Eigen::Index dim = 4;
  std::uint64_t seed = 0;
  int harmonics = 2;
  /// JSON file {"h0": M, "h1": M}; entries are numbers or [re, im] pairs.
  std::string path;
};

struct BoundSelection {
  bool tight = true;
  bool coarse = true;
  bool theorem4 = true;
  double theorem4_c = 1.0;
};

/// One fully specified run.
struct RunConfig {
  ProblemSpec problem;
  std::string schedule = "linear";
  double tau = 100.0;
  std::size_t grid_points = 1024;
  BandSelector band = BandSelector::Ground();
  BoundSelection bounds;
  std::string output;
  NumericalPolicy policy;
  EvolveOptions evolve;
  /// Record walltime_ms. Off by default so that output is byte-reproducible.
  bool timing = false;
};

/// Parameter lists; the Cartesian product n x schedule x tau is run in
/// that nesting order.
struct SweepConfig {
  RunConfig base;
  std::vector<int> n_values;
  std::vector<std::string> schedules;
  std::vector<double> tau_values;
  std::size_t workers = 0;  // 0: ADIABAND_WORKERS, else hardware concurrency
  std::string points_output;
};

/// Parses a config document. Unknown keys and malformed values raise
/// ConfigError naming the offending field path.
SweepConfig ParseConfig(const std::string& json_text);
SweepConfig LoadConfig(const std::string& path);

/// Requires every list in `sweep` to hold exactly one value.
RunConfig SingleRun(const SweepConfig& sweep);
std::vector<RunConfig> ExpandSweep(const SweepConfig& sweep);

/// Schedule from its textual name: linear, beta:k=K, bump, adaptive:p=P.
/// `gap` is required for adaptive schedules.
Schedule ParseSchedule(const std::string& name, const GapFunction* gap = nullptr);

/// Family of `problem` under `schedule_name`, with the gap function used by
/// adaptive schedules derived from the linearly parametrized problem.
HamiltonianFamily BuildFamily(const RunConfig& config);

/// Minimal band gap over s in [0, 1]: grid scan refined by Brent's method.
double MinimalGap(const HamiltonianFamily& family, const BandSelector& band, std::size_t points,
                  const NumericalPolicy& policy = {});

struct RunReport {
  std::size_t run_id = 0;
  RunConfig config;
  std::string problem_label;
  std::optional<int> n;
  Eigen::Index dim = 0;
  std::string schedule_name;
  std::optional<double> p;
  std::vector<DiagnosticPoint> diagnostics;
  std::optional<BoundProfile> profile;
  std::vector<double> intertwining;
  std::vector<double> volterra;
  double g_min = 0.0;
  double walltime_ms = 0.0;
  bool ok = true;
  std::string error;
};

RunReport RunSingle(const RunConfig& config, std::size_t run_id = 0);

/// Runs concurrently; reports come back in parameter order. Failed runs are
/// reported with ok = false instead of throwing.
std::vector<RunReport> Sweep(const SweepConfig& sweep);

/// Worker count: explicit > ADIABAND_WORKERS > hardware concurrency.
std::size_t ResolveWorkers(std::size_t requested);

extern const std::vector<std::string> kRunColumns;
extern const std::vector<std::string> kSummaryColumns;

/// Per-grid-point rows.
void WriteRunCsv(std::ostream& out, const std::vector<RunReport>& reports, bool header = true);
/// One row per run: maxima over s of the measured quantities, bounds at s = 1.
void WriteSummaryCsv(std::ostream& out, const std::vector<RunReport>& reports);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  std::vector<std::pair<double, double>> points;
};

/// Least squares on (log x, log y).
ScalingFit FitScaling(const std::vector<std::pair<double, double>>& points);

struct FitOptions {
  /// Keep only x values whose rows all have A_tight below this (when the
  /// column is present and filled). Infinity disables the filter.
  double max_a_tight = 0.5;
};

/// Reads columns `x` and `y` of a CSV written by this library. Repeated x
/// values are merged keeping the largest y (per-point files fit max_s y).
ScalingFit FitCsv(std::istream& in, const std::string& x, const std::string& y,
                  const FitOptions& options = {});

}  // namespace adiaband
