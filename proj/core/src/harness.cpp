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

#include "adiaband/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <boost/math/tools/minima.hpp>
#include <nlohmann/json.hpp>

#include "adiaband/error.hpp"

namespace adiaband {

namespace {

using nlohmann::json;

[[noreturn]] void ConfigFail(const std::string& path, const std::string& what) {
  Fail(ErrorCode::kConfigError, path + ": " + what);
}

std::string Join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void CheckKeys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) ConfigFail(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) ConfigFail(Join(path, item.key()), "unknown key");
  }
}

double Number(const json& v, const std::string& path) {
  if (!v.is_number()) ConfigFail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) ConfigFail(path, "must be finite");
  return x;
}

double PositiveNumber(const json& v, const std::string& path) {
  const double x = Number(v, path);
  if (!(x > 0.0)) ConfigFail(path, "must be > 0");
  return x;
}

std::int64_t Integer(const json& v, const std::string& path, std::int64_t lo) {
  if (!v.is_number_integer()) ConfigFail(path, "expected an integer");
  const auto x = v.get<std::int64_t>();
  if (x < lo) ConfigFail(path, "must be >= " + std::to_string(lo));
  return x;
}

bool Bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) ConfigFail(path, "expected true or false");
  return v.get<bool>();
}

std::string String(const json& v, const std::string& path) {
  if (!v.is_string()) ConfigFail(path, "expected a string");
  return v.get<std::string>();
}

/// Scalar or non-empty list of scalars.
template <typename F>
auto ScalarOrList(const json& v, const std::string& path, F parse) {
  std::vector<decltype(parse(v, path))> out;
  if (v.is_array()) {
    if (v.empty()) ConfigFail(path, "sweep list is empty");
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(parse(v[i], path + "[" + std::to_string(i) + "]"));
    }
  } else {
    out.push_back(parse(v, path));
  }
  return out;
}

void ParseProblem(const json& v, SweepConfig& cfg) {
  const std::string path = "problem";
  if (!v.is_object()) ConfigFail(path, "expected an object");
  if (!v.contains("type")) ConfigFail(Join(path, "type"), "missing");
  const std::string type = String(v["type"], Join(path, "type"));
  ProblemSpec& p = cfg.base.problem;
  if (type == "grover") {
    CheckKeys(v, path, {"type", "n", "representation", "marked"});
    p.kind = ProblemKind::kGrover;
    if (v.contains("n")) {
      cfg.n_values = ScalarOrList(v["n"], Join(path, "n"), [](const json& x, const std::string& at) {
        return static_cast<int>(Integer(x, at, 1));
      });
    } else {
      cfg.n_values = {p.n};
    }
    if (v.contains("representation")) {
      const std::string r = String(v["representation"], Join(path, "representation"));
      if (r == "full") {
        p.representation = GroverRepresentation::kFull;
      } else if (r == "reduced") {
        p.representation = GroverRepresentation::kReduced;
      } else {
        ConfigFail(Join(path, "representation"), "expected \"full\" or \"reduced\"");
      }
    }
    if (v.contains("marked")) {
      p.marked = static_cast<std::uint64_t>(Integer(v["marked"], Join(path, "marked"), 0));
    }
  } else if (type == "random") {
    CheckKeys(v, path, {"type", "dim", "seed", "harmonics"});
    p.kind = ProblemKind::kRandom;
    if (v.contains("dim")) p.dim = Integer(v["dim"], Join(path, "dim"), 1);
    if (v.contains("seed")) p.seed = static_cast<std::uint64_t>(Integer(v["seed"], Join(path, "seed"), 0));
    if (v.contains("harmonics")) {
      p.harmonics = static_cast<int>(Integer(v["harmonics"], Join(path, "harmonics"), 1));
    }
  } else if (type == "matrix-file") {
    CheckKeys(v, path, {"type", "path"});
    p.kind = ProblemKind::kMatrixFile;
    if (!v.contains("path")) ConfigFail(Join(path, "path"), "missing");
    p.path = String(v["path"], Join(path, "path"));
  } else {
    ConfigFail(Join(path, "type"), "unknown problem type \"" + type + "\"");
  }
}

BandSelector ParseBand(const json& v) {
  const std::string path = "band";
  if (v.is_string()) {
    if (v.get<std::string>() == "ground") return BandSelector::Ground();
    ConfigFail(path, "expected \"ground\" or an object");
  }
  CheckKeys(v, path, {"clusters", "window", "eigen"});
  if (v.size() != 1) ConfigFail(path, "exactly one of clusters, window, eigen");
  if (v.contains("clusters")) {
    const json& c = v["clusters"];
    if (!c.is_array() || c.empty()) ConfigFail("band.clusters", "expected a non-empty list");
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < c.size(); ++i) {
      idx.push_back(static_cast<std::size_t>(Integer(c[i], "band.clusters[" + std::to_string(i) + "]", 0)));
    }
    return BandSelector::ClusterSet(std::move(idx));
  }
  if (v.contains("window")) {
    const json& w = v["window"];
    if (!w.is_array() || w.size() != 2) ConfigFail("band.window", "expected [lower, upper]");
    const double lo = Number(w[0], "band.window[0]");
    const double hi = Number(w[1], "band.window[1]");
    if (!(lo < hi)) ConfigFail("band.window", "lower must be < upper");
    return BandSelector::EnergyWindow(lo, hi);
  }
  const json& e = v["eigen"];
  if (!e.is_array() || e.size() != 2) ConfigFail("band.eigen", "expected [first, count]");
  return BandSelector::Eigen(static_cast<std::size_t>(Integer(e[0], "band.eigen[0]", 0)),
                             static_cast<std::size_t>(Integer(e[1], "band.eigen[1]", 1)));
}

void ParsePolicy(const json& v, NumericalPolicy& policy) {
  const std::string path = "policy";
  CheckKeys(v, path,
            {"hermitian_tol", "unitarity_tol", "cluster_rel_tol", "gap_floor", "step_tol",
             "max_steps", "fd_step", "fd_step_second", "contour_nodes", "quadrature_rel_tol"});
  auto real = [&](const char* key, double& field) {
    if (v.contains(key)) field = PositiveNumber(v[key], Join(path, key));
  };
  auto count = [&](const char* key, std::size_t& field, std::int64_t lo) {
    if (v.contains(key)) field = static_cast<std::size_t>(Integer(v[key], Join(path, key), lo));
  };
  real("hermitian_tol", policy.hermitian_tol);
  real("unitarity_tol", policy.unitarity_tol);
  real("cluster_rel_tol", policy.cluster_rel_tol);
  real("gap_floor", policy.gap_floor);
  real("step_tol", policy.step_tol);
  count("max_steps", policy.max_steps, 1);
  real("fd_step", policy.fd_step);
  real("fd_step_second", policy.fd_step_second);
  count("contour_nodes", policy.contour_nodes, 16);
  real("quadrature_rel_tol", policy.quadrature_rel_tol);
}

void ParseBounds(const json& v, BoundSelection& bounds) {
  const std::string path = "bounds";
  CheckKeys(v, path, {"tight", "coarse", "theorem4", "theorem4_c"});
  if (v.contains("tight")) bounds.tight = Bool(v["tight"], "bounds.tight");
  if (v.contains("coarse")) bounds.coarse = Bool(v["coarse"], "bounds.coarse");
  if (v.contains("theorem4")) bounds.theorem4 = Bool(v["theorem4"], "bounds.theorem4");
  if (v.contains("theorem4_c")) bounds.theorem4_c = Number(v["theorem4_c"], "bounds.theorem4_c");
}

double ParseDoubleExact(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size() || !std::isfinite(x)) {
    Fail(ErrorCode::kConfigError, "schedule: bad " + what + " in \"" + text + "\"");
  }
  return x;
}

constexpr double kDefaultAdaptiveP = 1.5;

/// Adaptive exponent named by a schedule string, if it is adaptive.
std::optional<double> AdaptiveExponent(const std::string& name) {
  if (name == "adaptive") return kDefaultAdaptiveP;
  const std::string prefix = "adaptive:p=";
  if (name.rfind(prefix, 0) == 0) return ParseDoubleExact(name.substr(prefix.size()), "p");
  return std::nullopt;
}

std::string ValidateScheduleName(const json& v, const std::string& path) {
  const std::string name = String(v, path);
  try {
    if (const auto p = AdaptiveExponent(name)) {
      if (!(*p > 1.0 && *p < 2.0)) Fail(ErrorCode::kInvalidArgument, "adaptive exponent must lie in (1, 2)");
    } else {
      ParseSchedule(name);
    }
  } catch (const Error& e) {
    ConfigFail(path, e.what());
  }
  return name;
}

HermitianOperator ReadMatrix(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) ConfigFail(path, "expected a non-empty square matrix");
  const auto d = static_cast<Eigen::Index>(v.size());
  Operator m(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    const json& row = v[static_cast<std::size_t>(r)];
    const std::string rpath = path + "[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d) ConfigFail(rpath, "row length");
    for (Eigen::Index c = 0; c < d; ++c) {
      const json& e = row[static_cast<std::size_t>(c)];
      const std::string epath = rpath + "[" + std::to_string(c) + "]";
      if (e.is_array()) {
        if (e.size() != 2) ConfigFail(epath, "expected [re, im]");
        m(r, c) = Complex(Number(e[0], epath), Number(e[1], epath));
      } else {
        m(r, c) = Complex(Number(e, epath), 0.0);
      }
    }
  }
  try {
    return HermitianOperator(m);
  } catch (const Error& e) {
    ConfigFail(path, e.what());
  }
}

std::pair<HermitianOperator, HermitianOperator> LoadMatrixPair(const std::string& file) {
  std::ifstream in(file);
  if (!in) Fail(ErrorCode::kIoError, "cannot open matrix file " + file);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    Fail(ErrorCode::kConfigError, file + ": " + e.what());
  }
  CheckKeys(doc, file, {"h0", "h1"});
  if (!doc.contains("h0") || !doc.contains("h1")) ConfigFail(file, "needs h0 and h1");
  auto h0 = ReadMatrix(doc["h0"], file + ":h0");
  auto h1 = ReadMatrix(doc["h1"], file + ":h1");
  if (h0.dim() != h1.dim()) ConfigFail(file, "h0 and h1 differ in dimension");
  return {h0, h1};
}

}  // namespace

SweepConfig ParseConfig(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    Fail(ErrorCode::kConfigError, std::string("<root>: ") + e.what());
  }
  CheckKeys(doc, "",
            {"problem", "schedule", "tau", "grid", "band", "bounds", "output", "points_output",
             "policy", "stepper", "substeps", "workers", "timing"});
  SweepConfig cfg;
  RunConfig& base = cfg.base;
  if (!doc.contains("problem")) ConfigFail("problem", "missing");
  ParseProblem(doc["problem"], cfg);
  cfg.schedules = doc.contains("schedule")
                      ? ScalarOrList(doc["schedule"], "schedule", ValidateScheduleName)
                      : std::vector<std::string>{base.schedule};
  if (!doc.contains("tau")) ConfigFail("tau", "missing");
  cfg.tau_values = ScalarOrList(doc["tau"], "tau", [](const json& x, const std::string& at) {
    const double t = Number(x, at);
    if (t < 0.0) ConfigFail(at, "must be >= 0");
    return t;
  });
  if (doc.contains("grid")) {
    CheckKeys(doc["grid"], "grid", {"points"});
    if (doc["grid"].contains("points")) {
      base.grid_points = static_cast<std::size_t>(Integer(doc["grid"]["points"], "grid.points", 64));
    }
  }
  if (doc.contains("band")) base.band = ParseBand(doc["band"]);
  if (doc.contains("bounds")) ParseBounds(doc["bounds"], base.bounds);
  if (doc.contains("output")) base.output = String(doc["output"], "output");
  if (doc.contains("points_output")) cfg.points_output = String(doc["points_output"], "points_output");
  if (doc.contains("policy")) ParsePolicy(doc["policy"], base.policy);
  if (doc.contains("stepper")) {
    const std::string s = String(doc["stepper"], "stepper");
    if (s == "midpoint") {
      base.evolve.stepper = Stepper::kExponentialMidpoint;
    } else if (s == "magnus4") {
      base.evolve.stepper = Stepper::kMagnus4;
    } else {
      ConfigFail("stepper", "expected \"midpoint\" or \"magnus4\"");
    }
  }
  if (doc.contains("substeps")) base.evolve.substeps = static_cast<std::size_t>(Integer(doc["substeps"], "substeps", 0));
  if (doc.contains("workers")) cfg.workers = static_cast<std::size_t>(Integer(doc["workers"], "workers", 1));
  if (doc.contains("timing")) base.timing = Bool(doc["timing"], "timing");
  return cfg;
}

SweepConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIoError, "cannot open config " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return ParseConfig(text.str());
}

RunConfig SingleRun(const SweepConfig& sweep) {
  if (sweep.n_values.size() > 1) ConfigFail("problem.n", "run takes a single value; use sweep");
  if (sweep.schedules.size() != 1) ConfigFail("schedule", "run takes a single value; use sweep");
  if (sweep.tau_values.size() != 1) ConfigFail("tau", "run takes a single value; use sweep");
  return ExpandSweep(sweep).front();
}

std::vector<RunConfig> ExpandSweep(const SweepConfig& sweep) {
  if (sweep.tau_values.empty()) ConfigFail("tau", "sweep list is empty");
  if (sweep.schedules.empty()) ConfigFail("schedule", "sweep list is empty");
  const std::vector<int> ns = sweep.n_values.empty() ? std::vector<int>{sweep.base.problem.n}
                                                     : sweep.n_values;
  std::vector<RunConfig> out;
  for (int n : ns) {
    for (const auto& schedule : sweep.schedules) {
      for (double tau : sweep.tau_values) {
        RunConfig run = sweep.base;
        run.problem.n = n;
        run.schedule = schedule;
        run.tau = tau;
        out.push_back(std::move(run));
      }
    }
  }
  return out;
}

Schedule ParseSchedule(const std::string& name, const GapFunction* gap) {
  if (name == "linear") return LinearSchedule();
  if (name == "bump") return BumpSchedule();
  const std::string beta = "beta:k=";
  if (name.rfind(beta, 0) == 0) {
    const double k = ParseDoubleExact(name.substr(beta.size()), "k");
    if (k < 1.0 || k != std::floor(k) || k > 20.0) {
      Fail(ErrorCode::kConfigError, "schedule: k must be an integer in [1, 20]");
    }
    return SmoothSwitchingSchedule(static_cast<int>(k));
  }
  if (const auto p = AdaptiveExponent(name)) {
    if (!(*p > 1.0 && *p < 2.0)) Fail(ErrorCode::kConfigError, "schedule: p must lie in (1, 2)");
    if (gap == nullptr) Fail(ErrorCode::kInvalidArgument, "adaptive schedule needs a gap function");
    return AdaptiveSchedule(*gap, *p);
  }
  Fail(ErrorCode::kConfigError, "schedule: unknown schedule \"" + name + "\"");
}

HamiltonianFamily BuildFamily(const RunConfig& config) {
  const ProblemSpec& p = config.problem;
  const NumericalPolicy& policy = config.policy;
  const bool adaptive = AdaptiveExponent(config.schedule).has_value();
  auto numeric_gap = [&](const HamiltonianFamily& base) {
    const BandSelector band = ResolveBand(base, config.band, policy);
    return GapFunction{[base, band, policy](double u) { return BundleAt(base, u, band, policy).gap; },
                       {}};
  };
  switch (p.kind) {
    case ProblemKind::kGrover: {
      const GroverProblem problem{p.n, p.marked, p.representation};
      const GapFunction gap = GroverGap(p.n);
      return MakeGroverFamily(problem, ParseSchedule(config.schedule, &gap)).family;
    }
    case ProblemKind::kRandom: {
      const HamiltonianFamily base = RandomSmoothFamily(p.dim, p.seed, p.harmonics);
      if (config.schedule == "linear") return base;
      const GapFunction gap = adaptive ? numeric_gap(base) : GapFunction{};
      return Reparametrized(base, ParseSchedule(config.schedule, &gap));
    }
    case ProblemKind::kMatrixFile: {
      const auto [h0, h1] = LoadMatrixPair(p.path);
      const GapFunction gap =
          adaptive ? numeric_gap(InterpolatingFamily(h0, h1, LinearSchedule())) : GapFunction{};
      return InterpolatingFamily(h0, h1, ParseSchedule(config.schedule, &gap));
    }
  }
  Fail(ErrorCode::kInvalidArgument, "unknown problem kind");
}

double MinimalGap(const HamiltonianFamily& family, const BandSelector& band, std::size_t points,
                  const NumericalPolicy& policy) {
  if (points < 3) Fail(ErrorCode::kInvalidArgument, "MinimalGap needs >= 3 points");
  const BandSelector resolved = ResolveBand(family, band, policy);
  auto gap = [&](double s) { return BundleAt(family, s, resolved, policy).gap; };
  const double h = 1.0 / static_cast<double>(points - 1);
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < points; ++k) {
    const double g = gap(static_cast<double>(k) * h);
    if (g < best_value) {
      best_value = g;
      best = k;
    }
  }
  const double lo = best == 0 ? 0.0 : static_cast<double>(best - 1) * h;
  const double hi = best + 1 == points ? 1.0 : static_cast<double>(best + 1) * h;
  const auto refined =
      boost::math::tools::brent_find_minima(gap, lo, hi, std::numeric_limits<double>::digits / 2);
  return std::min(best_value, refined.second);
}

namespace {

void Describe(const RunConfig& config, RunReport& report) {
  const ProblemSpec& p = config.problem;
  switch (p.kind) {
    case ProblemKind::kGrover:
      report.problem_label = "grover";
      report.n = p.n;
      report.dim = p.representation == GroverRepresentation::kFull ? (Eigen::Index{1} << p.n) : 2;
      break;
    case ProblemKind::kRandom:
      report.problem_label = "random";
      report.dim = p.dim;
      break;
    case ProblemKind::kMatrixFile:
      report.problem_label = "matrix-file";
      break;
  }
  report.schedule_name = config.schedule;
  try {
    report.p = AdaptiveExponent(config.schedule);
  } catch (const Error&) {
  }
}

}  // namespace

RunReport RunSingle(const RunConfig& config, std::size_t run_id) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.run_id = run_id;
  report.config = config;
  Describe(config, report);
  const NumericalPolicy& policy = config.policy;
  const HamiltonianFamily family = BuildFamily(config);
  report.dim = family.dim();
  const BandSelector band = ResolveBand(family, config.band, policy);
  const TimeGrid grid = TimeGrid::Uniform(config.grid_points);

  const PropagatorTrace real = EvolveReal(family, config.tau, grid, policy, config.evolve);
  const PropagatorTrace adiabatic =
      EvolveAdiabatic(family, band, config.tau, grid, policy, config.evolve);
  report.diagnostics = AdiabaticDiagnostics(real, family, band, policy);
  report.intertwining = IntertwiningResidual(adiabatic, family, band, policy);
  report.volterra = VolterraResidualProfile(WaveOperator(real, adiabatic), family, band, policy);
  const BoundSelection& b = config.bounds;
  if ((b.tight || b.coarse || b.theorem4) && config.tau > 0.0) {
    report.profile = EvaluateBoundProfile(family, band, config.tau, grid, b.theorem4_c, policy);
  }
  report.g_min = MinimalGap(family, band, config.grid_points, policy);
  report.walltime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::size_t ResolveWorkers(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ADIABAND_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) {
      Fail(ErrorCode::kConfigError, "ADIABAND_WORKERS: expected a positive integer");
    }
    return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<RunReport> Sweep(const SweepConfig& sweep) {
  const std::vector<RunConfig> configs = ExpandSweep(sweep);
  std::vector<RunReport> reports(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        reports[i] = RunSingle(configs[i], i);
      } catch (const std::exception& e) {
        RunReport failed;
        failed.run_id = i;
        failed.config = configs[i];
        Describe(configs[i], failed);
        failed.ok = false;
        failed.error = e.what();
        reports[i] = std::move(failed);
      }
    }
  };
  const std::size_t count = std::min(ResolveWorkers(sweep.workers), configs.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return reports;
}

const std::vector<std::string> kRunColumns = {
    "run_id", "problem", "n", "dim", "schedule", "p", "tau", "s", "gap", "m", "transition_prob",
    "proj_distance", "A_tight", "A_coarse", "A_theorem4", "intertwining_residual",
    "volterra_residual", "walltime_ms"};

const std::vector<std::string> kSummaryColumns = {
    "run_id", "problem", "n", "dim", "schedule", "p", "tau", "g_min", "m", "transition_prob",
    "proj_distance", "A_tight", "A_coarse", "A_theorem4", "intertwining_residual",
    "volterra_residual", "walltime_ms", "status", "error"};

namespace {

std::string Num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string Quote(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

class Row {
 public:
  Row& operator<<(const std::string& text) {
    cells_.push_back(Quote(text));
    return *this;
  }
  Row& operator<<(double x) { return *this << Num(x); }
  Row& operator<<(std::size_t x) { return *this << std::to_string(x); }
  Row& Optional(bool present, double x) { return present ? *this << x : *this << std::string(); }
  void WriteTo(std::ostream& out) const {
    for (std::size_t i = 0; i < cells_.size(); ++i) out << (i ? "," : "") << cells_[i];
    out << '\n';
  }

 private:
  std::vector<std::string> cells_;
};

void WriteHeader(std::ostream& out, const std::vector<std::string>& columns) {
  Row row;
  for (const auto& c : columns) row << c;
  row.WriteTo(out);
}

Row Prefix(const RunReport& r) {
  Row row;
  row << r.run_id << r.problem_label;
  row.Optional(r.n.has_value(), r.n.value_or(0));
  row << static_cast<std::size_t>(r.dim) << r.schedule_name;
  row.Optional(r.p.has_value(), r.p.value_or(0.0));
  row << r.config.tau;
  return row;
}

double MaxOf(const std::vector<double>& v) {
  return v.empty() ? std::numeric_limits<double>::quiet_NaN() : *std::max_element(v.begin(), v.end());
}

}  // namespace

void WriteRunCsv(std::ostream& out, const std::vector<RunReport>& reports, bool header) {
  if (header) WriteHeader(out, kRunColumns);
  for (const auto& r : reports) {
    if (!r.ok) continue;
    const BoundSelection& b = r.config.bounds;
    const bool have = r.profile.has_value();
    for (std::size_t k = 0; k < r.diagnostics.size(); ++k) {
      const DiagnosticPoint& d = r.diagnostics[k];
      Row row = Prefix(r);
      row << d.s << d.gap << d.m << d.transition_prob << d.proj_distance;
      row.Optional(have && b.tight, have ? r.profile->a_tight[k] : 0.0);
      row.Optional(have && b.coarse, have ? r.profile->a_coarse[k] : 0.0);
      row.Optional(have && b.theorem4, have ? r.profile->a_theorem4[k] : 0.0);
      row << r.intertwining[k] << r.volterra[k];
      row.Optional(r.config.timing, r.walltime_ms);
      row.WriteTo(out);
    }
  }
}

void WriteSummaryCsv(std::ostream& out, const std::vector<RunReport>& reports) {
  WriteHeader(out, kSummaryColumns);
  for (const auto& r : reports) {
    Row row = Prefix(r);
    if (!r.ok) {
      for (std::size_t i = 0; i < 10; ++i) row << std::string();
      row << std::string("failed") << r.error;
      row.WriteTo(out);
      continue;
    }
    const BoundSelection& b = r.config.bounds;
    const bool have = r.profile.has_value();
    double tp = 0.0, dist = 0.0;
    for (const auto& d : r.diagnostics) {
      tp = std::max(tp, d.transition_prob);
      dist = std::max(dist, d.proj_distance);
    }
    row << r.g_min << r.diagnostics.back().m << tp << dist;
    row.Optional(have && b.tight, have ? r.profile->a_tight.back() : 0.0);
    row.Optional(have && b.coarse, have ? r.profile->a_coarse.back() : 0.0);
    row.Optional(have && b.theorem4, have ? r.profile->a_theorem4.back() : 0.0);
    row << MaxOf(r.intertwining) << MaxOf(r.volterra);
    row.Optional(r.config.timing, r.walltime_ms);
    row << std::string("ok") << std::string();
    row.WriteTo(out);
  }
}

ScalingFit FitScaling(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 4) {
    Fail(ErrorCode::kInsufficientPoints,
         "scaling fit needs >= 4 points, got " + std::to_string(points.size()));
  }
  double mx = 0.0, my = 0.0;
  std::vector<double> lx, ly;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
      Fail(ErrorCode::kNonPositiveValue, "log-log fit needs positive finite values, got (" +
                                             Num(x) + ", " + Num(y) + ")");
    }
    lx.push_back(std::log(x));
    ly.push_back(std::log(y));
    mx += lx.back();
    my += ly.back();
  }
  const double n = static_cast<double>(points.size());
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) Fail(ErrorCode::kInvalidArgument, "scaling fit needs distinct x values");
  ScalingFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ssr += r * r;
  }
  fit.stderr_slope = std::sqrt(ssr / (n - 2.0) / sxx);
  fit.points = points;
  return fit;
}

namespace {

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else if (c != '\r') {
      out.back() += c;
    }
  }
  return out;
}

double CsvNumber(const std::string& cell, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (end == cell.c_str() || *end != '\0') {
    Fail(ErrorCode::kInvalidArgument, "line " + std::to_string(line) + ": not a number: " + cell);
  }
  return v;
}

}  // namespace

ScalingFit FitCsv(std::istream& in, const std::string& x, const std::string& y,
                  const FitOptions& options) {
  std::string line;
  if (!std::getline(in, line)) Fail(ErrorCode::kIoError, "empty CSV input");
  const auto header = SplitCsvLine(line);
  auto column = [&](const std::string& name) -> std::optional<std::size_t> {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto xi = column(x), yi = column(y);
  if (!xi) Fail(ErrorCode::kInvalidArgument, "no column \"" + x + "\"");
  if (!yi) Fail(ErrorCode::kInvalidArgument, "no column \"" + y + "\"");
  const auto ai = column("A_tight");
  const auto status = column("status");

  struct Group {
    double y = -std::numeric_limits<double>::infinity();
    double a_tight = 0.0;
  };
  std::map<double, Group> groups;
  for (std::size_t number = 2; std::getline(in, line); ++number) {
    if (line.empty()) continue;
    const auto cells = SplitCsvLine(line);
    if (cells.size() != header.size()) {
      Fail(ErrorCode::kInvalidArgument, "line " + std::to_string(number) + ": wrong column count");
    }
    if (status && cells[*status] != "ok") continue;
    if (cells[*xi].empty() || cells[*yi].empty()) continue;
    Group& g = groups[CsvNumber(cells[*xi], number)];
    g.y = std::max(g.y, CsvNumber(cells[*yi], number));
    if (ai && !cells[*ai].empty()) g.a_tight = std::max(g.a_tight, CsvNumber(cells[*ai], number));
  }
  std::vector<std::pair<double, double>> points;
  for (const auto& [key, g] : groups) {
    if (g.a_tight < options.max_a_tight) points.emplace_back(key, g.y);
  }
  return FitScaling(points);
}

}  // namespace adiaband
