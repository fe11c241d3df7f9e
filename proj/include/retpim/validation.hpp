/*
 * Copyright 2026 The retpim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "retpim/config.hpp"
#include "retpim/energy.hpp"

namespace retpim {

struct SuiteResult {
  std::string name;
  std::int64_t passed = 0;
  std::int64_t failed = 0;
  std::vector<std::string> failures;  // first few, for the log

  void check(bool ok, const std::string& what);
};

struct ValidationOptions {
  std::uint64_t seed = 42;
  std::int64_t cases = 1000;
  RefreshPolicy policy = RefreshPolicy::Span;
};

/// Analytic refresh count against the state-machine oracle, both policies,
/// random pairs plus exact-multiple boundaries.
SuiteResult validate_refresh_model(const ValidationOptions& opts);

/// Closed-form tile spans against the loop-nest walk.
SuiteResult validate_lifetimes(const ValidationOptions& opts);

/// Optimizes small random workloads (and the config's own workloads when
/// small enough) on the configured hardware and memory spec, then checks the
/// simulated schedule for retention violations and read conservation.
SuiteResult validate_safety(const Config& config, const ValidationOptions& opts);

/// Boundary lifetimes (exact multiples of retention): ceil minus span must be
/// exactly one.
SuiteResult validate_policy_boundary(const ValidationOptions& opts);

}  // namespace retpim
