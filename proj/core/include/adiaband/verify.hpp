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
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "adiaband/operator.hpp"
#include "adiaband/spectral.hpp"

namespace adiaband {

struct VerifyCheck {
  std::string group;
  std::string name;
  double value = 0.0;      // worst observed residual or violation
  double threshold = 0.0;
  std::size_t cases = 0;
  bool passed = false;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool passed() const;
  std::size_t failures() const;
};

using TwiddleFn = std::function<Operator(const Operator&, const ProjectorBundle&)>;

struct VerifyOptions {
  /// Group name or alias ("twiddle_norm", "norm_chain", ...). Empty runs all.
  std::string filter;
  std::size_t instances = 100;
  std::uint64_t seed = 20240611;
  /// The twiddle map under test; replaced by test fixtures for mutation runs.
  TwiddleFn twiddle = [](const Operator& x, const ProjectorBundle& b) { return Twiddle(x, b); };
};

/// Groups and their aliases, in execution order.
const std::vector<std::pair<std::string, std::vector<std::string>>>& VerifyGroups();

/// Throws InvalidArgument for a filter that names no group.
VerifyReport RunVerifySuite(const VerifyOptions& options = {});

void WriteVerifyJson(std::ostream& out, const VerifyReport& report);

}  // namespace adiaband
