// Copyright 2026 The SphereBO Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// =============================================================================

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spherebo/numerics.hpp"

namespace spherebo {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

using ProjectionFn = std::function<Vector(const Vector&)>;

struct VerifyOptions {
  // Runs a single check by name when set.
  std::optional<std::string> only;
  std::uint64_t seed = 20240601;
  // Replaces the inverse stereographic projection in the counterexample and
  // Taylor checks; used to confirm that those checks catch a broken map.
  ProjectionFn projection;
  int boundary_trials = 100;
  int taylor_pairs = 1000;
  int thin_shell_samples = 100000;
  int duality_instances = 50;
};

/// boundary-theorem, counterexample, taylor, thin-shell, duality.
std::vector<std::string> verification_check_names();

/// Throws InvalidArgument for an unknown `only` name.
std::vector<CheckResult> run_verification(const VerifyOptions& options = {});

CheckResult check_boundary_theorem(const VerifyOptions& options);
CheckResult check_counterexample(const VerifyOptions& options);
CheckResult check_taylor(const VerifyOptions& options);
CheckResult check_thin_shell(const VerifyOptions& options);
CheckResult check_duality(const VerifyOptions& options);

}  // namespace spherebo
