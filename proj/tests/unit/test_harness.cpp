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

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "adiaband/harness.hpp"
#include "test_util.hpp"

namespace adiaband {
namespace {

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> Split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string Join(const std::vector<std::string>& cols) {
  std::string out;
  for (std::size_t i = 0; i < cols.size(); ++i) out += (i ? "," : "") + cols[i];
  return out;
}

std::string ConfigMessage(const std::string& json) {
  try {
    ParseConfig(json);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfigError) << e.what();
    return e.what();
  }
  ADD_FAILURE() << "accepted: " << json;
  return {};
}

TEST(Config, Defaults) {
  const RunConfig c = SingleRun(ParseConfig(R"({"problem": {"type": "grover", "n": 3}, "tau": 5})"));
  EXPECT_EQ(c.problem.kind, ProblemKind::kGrover);
  EXPECT_EQ(c.problem.n, 3);
  EXPECT_EQ(c.schedule, "linear");
  EXPECT_EQ(c.grid_points, 1024u);
  EXPECT_EQ(c.evolve.stepper, Stepper::kExponentialMidpoint);
}

TEST(Config, FullDocument) {
  const SweepConfig s = ParseConfig(R"({
    "problem": {"type": "grover", "n": [2, 4], "representation": "reduced"},
    "schedule": ["linear", "adaptive:p=1.5"],
    "tau": [10, 20, 40],
    "grid": {"points": 128},
    "band": {"eigen": [0, 1]},
    "bounds": {"theorem4_c": 2.5, "coarse": false},
    "policy": {"step_tol": 1e-7},
    "stepper": "magnus4",
    "substeps": 2,
    "workers": 3
  })");
  EXPECT_EQ(s.n_values, (std::vector<int>{2, 4}));
  EXPECT_EQ(s.tau_values.size(), 3u);
  EXPECT_EQ(s.workers, 3u);
  EXPECT_EQ(s.base.bounds.theorem4_c, 2.5);
  EXPECT_FALSE(s.base.bounds.coarse);
  EXPECT_EQ(s.base.policy.step_tol, 1e-7);
  EXPECT_EQ(s.base.evolve.stepper, Stepper::kMagnus4);
  EXPECT_EQ(s.base.evolve.substeps, 2u);
  const auto runs = ExpandSweep(s);
  ASSERT_EQ(runs.size(), 12u);
  EXPECT_EQ(runs[0].problem.n, 2);
  EXPECT_EQ(runs[0].schedule, "linear");
  EXPECT_EQ(runs[0].tau, 10.0);
  EXPECT_EQ(runs[1].tau, 20.0);
  EXPECT_EQ(runs[3].schedule, "adaptive:p=1.5");
  EXPECT_EQ(runs[6].problem.n, 4);
  EXPECT_ADIABAND_ERROR(SingleRun(s), ErrorCode::kConfigError);
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_NE(ConfigMessage(R"({"problem": {"type": "grover", "n": 3, "colour": 1}})")
                .find("problem.colour"),
            std::string::npos);
  EXPECT_NE(ConfigMessage(R"({"problem": {"type": "grover"}, "tau": 1, "taux": 3})").find("taux"),
            std::string::npos);
  EXPECT_NE(ConfigMessage(R"({"problem": {"type": "grover", "n": 3}, "tau": []})").find("tau"),
            std::string::npos);
  EXPECT_NE(ConfigMessage(R"({"problem": {"type": "grover", "n": 3}, "schedule": "cubic"})")
                .find("schedule"),
            std::string::npos);
  EXPECT_NE(ConfigMessage(R"({"problem": {"type": "grover"}, "tau": 1, "grid": {"points": 10}})")
                .find("grid.points"),
            std::string::npos);
  EXPECT_NE(ConfigMessage(R"({"problem": {"type": "spin"}})").find("problem.type"),
            std::string::npos);
  EXPECT_NE(ConfigMessage(R"({"problem": {"type": "grover"}, "tau": 1, "band": {"window": [1]}})")
                .find("band.window"),
            std::string::npos);
  EXPECT_NE(ConfigMessage(R"({"problem": {"type": "grover"}, "tau": 1, "policy": {"nope": 1}})")
                .find("policy.nope"),
            std::string::npos);
  ConfigMessage(R"({"problem": {"type": "grover"}, "tau": 1, "schedule": "adaptive:p=2.5"})");
  ConfigMessage(R"({"problem": {"type": "grover"}, "tau": "fast"})");
  ConfigMessage("not json");
  EXPECT_ADIABAND_ERROR(LoadConfig("/nonexistent/config.json"), ErrorCode::kIoError);
  ConfigMessage(R"({"problem": {"type": "grover", "n": 3}})");
}

TEST(Config, ScheduleNames) {
  const GapFunction g = GroverGap(3);
  EXPECT_EQ(ParseSchedule("linear").name(), "linear");
  EXPECT_EQ(ParseSchedule("beta:k=3").name(), "beta:k=3");
  EXPECT_EQ(ParseSchedule("bump").name(), "bump");
  EXPECT_EQ(ParseSchedule("adaptive:p=1.5", &g).adaptive_params()->p, 1.5);
  EXPECT_EQ(ParseSchedule("adaptive", &g).adaptive_params()->p, 1.5);
  EXPECT_ADIABAND_ERROR(ParseSchedule("adaptive:p=1.5"), ErrorCode::kInvalidArgument);
  EXPECT_ANY_THROW(ParseSchedule("beta:k=x"));
}

TEST(Config, MatrixFileProblem) {
  const auto path = std::filesystem::temp_directory_path() / "adiaband_matrix_test.json";
  {
    std::ofstream out(path);
    out << R"({"h0": [[0, 1], [1, 0]], "h1": [[1, [0, -1]], [[0, 1], -1]]})";
  }
  RunConfig c = SingleRun(ParseConfig(R"({"problem": {"type": "matrix-file", "path": ")" +
                                      path.string() + R"("}, "tau": 5, "grid": {"points": 64}})"));
  const HamiltonianFamily fam = BuildFamily(c);
  EXPECT_EQ(fam.dim(), 2);
  EXPECT_EQ(fam.H(1.0).matrix()(0, 1), Complex(0, -1));
  const RunReport r = RunSingle(c);
  EXPECT_TRUE(r.ok) << r.error;
  EXPECT_EQ(r.problem_label, "matrix-file");
  std::filesystem::remove(path);
}

TEST(RunSingle, GroverCsvShapeAndDeterminism) {
  const SweepConfig s = ParseConfig(
      R"({"problem": {"type": "grover", "n": 2}, "schedule": "linear", "tau": 100})");
  std::ostringstream a, b;
  WriteRunCsv(a, {RunSingle(SingleRun(s))});
  WriteRunCsv(b, {RunSingle(SingleRun(s))});
  EXPECT_EQ(a.str(), b.str());
  const auto lines = Lines(a.str());
  ASSERT_EQ(lines.size(), 1025u);
  EXPECT_EQ(lines[0], Join(kRunColumns));
  EXPECT_EQ(Join(kRunColumns),
            "run_id,problem,n,dim,schedule,p,tau,s,gap,m,transition_prob,proj_distance,A_tight,"
            "A_coarse,A_theorem4,intertwining_residual,volterra_residual,walltime_ms");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    EXPECT_EQ(Split(lines[i]).size(), kRunColumns.size()) << lines[i];
  }
  const auto first = Split(lines[1]);
  EXPECT_EQ(first[1], "grover");
  EXPECT_EQ(first[2], "2");
  EXPECT_EQ(first[3], "4");
  EXPECT_EQ(first[4], "linear");
  EXPECT_EQ(first[5], "");
  EXPECT_EQ(first[6], "100");
  EXPECT_EQ(first[17], "");
}

TEST(RunSingle, RandomIntertwining) {
  const RunReport r = RunSingle(SingleRun(
      ParseConfig(R"({"problem": {"type": "random", "dim": 6, "seed": 7}, "tau": 50})")));
  ASSERT_TRUE(r.ok) << r.error;
  double worst = 0.0;
  for (double x : r.intertwining) worst = std::max(worst, x);
  EXPECT_LE(worst, 1e-6);
  EXPECT_EQ(r.dim, 6);
  EXPECT_FALSE(r.n.has_value());
}

TEST(RunSingle, TimingColumn) {
  RunConfig c = SingleRun(ParseConfig(
      R"({"problem": {"type": "grover", "n": 2}, "tau": 10, "grid": {"points": 64}, "timing": true})"));
  std::ostringstream out;
  WriteRunCsv(out, {RunSingle(c)});
  const auto row = Split(Lines(out.str())[1]);
  EXPECT_FALSE(row[17].empty());
  EXPECT_GE(std::stod(row[17]), 0.0);
}

TEST(Sweep, TauListRows) {
  SweepConfig s = ParseConfig(
      R"({"problem": {"type": "grover", "n": 3}, "tau": [100, 200, 400, 800],
          "grid": {"points": 256}, "stepper": "magnus4"})");
  const auto reports = Sweep(s);
  ASSERT_EQ(reports.size(), 4u);
  std::ostringstream out;
  WriteSummaryCsv(out, reports);
  const auto lines = Lines(out.str());
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0], Join(kSummaryColumns));
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_TRUE(reports[i].ok) << reports[i].error;
    EXPECT_EQ(reports[i].run_id, i);
  }
  EXPECT_EQ(reports[3].config.tau, 800.0);
}

TEST(Sweep, ReducedAdaptiveMinimalGap) {
  SweepConfig s = ParseConfig(
      R"({"problem": {"type": "grover", "n": [2, 3, 4, 5, 6, 7, 8, 9, 10],
                      "representation": "reduced"},
          "schedule": "adaptive:p=1.5", "tau": 50, "grid": {"points": 128},
          "bounds": {"tight": false, "coarse": false, "theorem4": false}})");
  const auto reports = Sweep(s);
  ASSERT_EQ(reports.size(), 9u);
  for (const auto& r : reports) {
    ASSERT_TRUE(r.ok) << r.error;
    EXPECT_NEAR(r.g_min, std::pow(2.0, -*r.n / 2.0), 1e-10)
        << *r.n;
    EXPECT_EQ(r.p, 1.5);
  }
}

TEST(Sweep, DeterministicAcrossWorkerCounts) {
  SweepConfig s = ParseConfig(
      R"({"problem": {"type": "grover", "n": [2, 3], "representation": "reduced"},
          "schedule": ["linear", "beta:k=2"], "tau": [10, 30], "grid": {"points": 64}})");
  s.workers = 1;
  std::ostringstream one;
  WriteRunCsv(one, Sweep(s));
  s.workers = 3;
  std::ostringstream three;
  WriteRunCsv(three, Sweep(s));
  EXPECT_EQ(one.str(), three.str());
}

TEST(Sweep, FailuresBecomeRows) {
  SweepConfig s = ParseConfig(
      R"({"problem": {"type": "grover", "n": 3}, "tau": [10, 20], "grid": {"points": 64},
          "policy": {"max_steps": 64, "step_tol": 1e-15}})");
  const auto reports = Sweep(s);
  ASSERT_EQ(reports.size(), 2u);
  EXPECT_FALSE(reports[0].ok);
  EXPECT_NE(reports[0].error.find("StepLimitExceeded"), std::string::npos);
  std::ostringstream out;
  WriteSummaryCsv(out, reports);
  EXPECT_NE(Lines(out.str())[1].find("failed"), std::string::npos);
}

TEST(Workers, Resolution) {
  EXPECT_EQ(ResolveWorkers(5), 5u);
  ::setenv("ADIABAND_WORKERS", "3", 1);
  EXPECT_EQ(ResolveWorkers(0), 3u);
  EXPECT_EQ(ResolveWorkers(2), 2u);
  ::unsetenv("ADIABAND_WORKERS");
  EXPECT_GE(ResolveWorkers(0), 1u);
}

TEST(FitScaling, PowerLaws) {
  std::vector<std::pair<double, double>> a, b;
  for (double x : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    a.emplace_back(x, 3.0 / x);
    b.emplace_back(x, 0.5 / (x * x));
  }
  const ScalingFit fa = FitScaling(a);
  EXPECT_NEAR(fa.slope, -1.0, 1e-12);
  EXPECT_NEAR(fa.intercept, std::log(3.0), 1e-12);
  EXPECT_LT(fa.stderr_slope, 1e-12);
  EXPECT_NEAR(FitScaling(b).slope, -2.0, 1e-12);
  EXPECT_ADIABAND_ERROR(FitScaling({{1, 1}, {2, 2}, {3, 3}}), ErrorCode::kInsufficientPoints);
  EXPECT_ADIABAND_ERROR(FitScaling({{1, 1}, {2, 0}, {3, 3}, {4, 4}}),
                        ErrorCode::kNonPositiveValue);
}

TEST(FitCsv, GroupsAndFilters) {
  std::ostringstream csv;
  csv << Join(kSummaryColumns) << "\n";
  auto row = [&](double tau, double dist, double a_tight, const char* status) {
    csv << "0,grover,3,8,linear,," << tau << ",0.1,1,1e-9," << dist << "," << a_tight
        << ",1,1,0,0,," << status << ",\n";
  };
  row(10, 0.5, 0.9, "ok");  // dropped: A_tight above the cut
  for (double tau : {100.0, 200.0, 400.0, 800.0}) {
    row(tau, 2.0 / tau, 0.1, "ok");
    row(tau, 1.0 / tau, 0.1, "ok");  // smaller duplicate, max wins
  }
  row(1600, 7.0, 0.1, "failed");
  std::istringstream in(csv.str());
  const ScalingFit fit = FitCsv(in, "tau", "proj_distance");
  EXPECT_EQ(fit.points.size(), 4u);
  EXPECT_NEAR(fit.slope, -1.0, 1e-12);
  EXPECT_NEAR(std::exp(fit.intercept), 2.0, 1e-10);
  std::istringstream again(csv.str());
  EXPECT_ADIABAND_ERROR(FitCsv(again, "tau", "nonexistent"), ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace adiaband
