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
#include <fstream>
#include <iostream>
#include <limits>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "adiaband/error.hpp"
#include "adiaband/harness.hpp"
#include "adiaband/verify.hpp"

namespace {

constexpr int kChecksFailed = 1;
constexpr int kUsageOrRuntimeError = 2;

// Writes to `path`, or stdout when it is empty or "-".
template <typename F>
void Emit(const std::string& path, F write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) adiaband::Fail(adiaband::ErrorCode::kIoError, "cannot write " + path);
  write(out);
}

int Run(const std::string& config_path, const std::string& output) {
  const adiaband::RunConfig config = adiaband::SingleRun(adiaband::LoadConfig(config_path));
  const adiaband::RunReport report = adiaband::RunSingle(config);
  Emit(output.empty() ? config.output : output,
       [&](std::ostream& out) { adiaband::WriteRunCsv(out, {report}); });
  return 0;
}

int Sweep(const std::string& config_path, const std::string& output) {
  const adiaband::SweepConfig config = adiaband::LoadConfig(config_path);
  const auto reports = adiaband::Sweep(config);
  Emit(output.empty() ? config.base.output : output,
       [&](std::ostream& out) { adiaband::WriteSummaryCsv(out, reports); });
  if (!config.points_output.empty()) {
    Emit(config.points_output, [&](std::ostream& out) { adiaband::WriteRunCsv(out, reports); });
  }
  int failed = 0;
  for (const auto& r : reports) {
    if (!r.ok) {
      ++failed;
      std::cerr << "run " << r.run_id << " failed: " << r.error << '\n';
    }
  }
  return failed == 0 ? 0 : kChecksFailed;
}

int Verify(const std::string& filter, std::size_t instances, const std::string& output) {
  adiaband::VerifyOptions options;
  options.filter = filter;
  options.instances = instances;
  const adiaband::VerifyReport report = adiaband::RunVerifySuite(options);
  for (const auto& c : report.checks) {
    std::cerr << (c.passed ? "PASS " : "FAIL ") << c.group << ": " << c.name << "  worst "
              << c.value << " (limit " << c.threshold << ", " << c.cases << " cases)\n";
  }
  Emit(output, [&](std::ostream& out) { adiaband::WriteVerifyJson(out, report); });
  return report.passed() ? 0 : kChecksFailed;
}

int Fit(const std::string& input, const std::string& x, const std::string& y, double max_a_tight) {
  std::ifstream in(input);
  if (!in) adiaband::Fail(adiaband::ErrorCode::kIoError, "cannot open " + input);
  adiaband::FitOptions options;
  options.max_a_tight = max_a_tight;
  const adiaband::ScalingFit fit = adiaband::FitCsv(in, x, y, options);
  nlohmann::ordered_json doc;
  doc["x"] = x;
  doc["y"] = y;
  doc["slope"] = fit.slope;
  doc["intercept"] = fit.intercept;
  doc["stderr"] = fit.stderr_slope;
  doc["points"] = fit.points;
  std::cout << doc.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adiaband: adiabatic evolution of spectral bands"};
  app.require_subcommand(1);

  std::string config, output, filter, input, x_column, y_column;
  std::size_t instances = 100;
  double max_a_tight = 0.5;

  auto* run = app.add_subcommand("run", "Single run; per-grid-point CSV");
  run->add_option("--config", config, "JSON config file")->required();
  run->add_option("-o,--output", output, "CSV path (overrides config output)");

  auto* sweep = app.add_subcommand("sweep", "Parameter sweep; one summary row per run");
  sweep->add_option("--config", config, "JSON config file")->required();
  sweep->add_option("-o,--output", output, "summary CSV path (overrides config output)");

  auto* verify = app.add_subcommand("verify", "Identity and inequality suite");
  verify->add_option("--filter", filter, "check group or alias, e.g. twiddle_norm");
  verify->add_option("--instances", instances, "seeded instances for static checks")
      ->check(CLI::PositiveNumber);
  verify->add_option("-o,--output", output, "JSON report path (default stdout)");

  auto* fit = app.add_subcommand("fit", "Log-log least-squares fit of two CSV columns");
  fit->add_option("--input", input, "CSV file")->required();
  fit->add_option("--x", x_column, "x column")->required();
  fit->add_option("--y", y_column, "y column")->required();
  fit->add_option("--max-a-tight", max_a_tight,
                  "drop x values with A_tight at or above this (inf disables)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return Run(config, output);
    if (*sweep) return Sweep(config, output);
    if (*verify) return Verify(filter, instances, output);
    if (*fit) return Fit(input, x_column, y_column, max_a_tight);
  } catch (const adiaband::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageOrRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageOrRuntimeError;
  }
  return kUsageOrRuntimeError;
}
