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
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "retpim/config.hpp"
#include "retpim/energy.hpp"
#include "retpim/tiling.hpp"

namespace retpim {

class CandidateCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// RBL levels (mV) for stored 1 and stored 0 at a given pull-down voltage.
struct RblLevels {
  double data1_mv = 0.0;
  double data0_mv = 0.0;
};

using SwingModel = std::function<RblLevels(double vpd_mv)>;

/// RBL precharged to VDD holds for data 1; data 0 discharges to
/// VDD - beta * (VDD - vpd).
SwingModel linear_swing_model(double vdd_mv, double beta);

/// Sense-amp reference: midpoint of the RBL swing between data 1 and data 0.
double reference_voltage(const VpdOperatingPoint& pt, const SwingModel& model);

struct OptimizerOptions {
  RefreshPolicy policy = RefreshPolicy::Span;
  bool sense_amp_gating = true;
  int jobs = 1;
  std::optional<std::int64_t> max_candidates;  // overrides hardware.max_candidates
  bool keep_sweep = true;
};

struct SchedulingDecision {
  GemmWorkload workload;
  TilingScheme scheme;
  double vpd_mv = 0.0;
  double reference_voltage_mv = 0.0;
  RefreshPolicy policy = RefreshPolicy::Span;
  // Retention the refresh plan was derived from.
  double planned_weight_retention_s = 0.0;
  double planned_buffer_retention_s = 0.0;

  EnergyReport report;
  std::vector<EnergyReport> sweep;  // scheme-major, VPD ascending
  EnergyReport baseline;            // lowest VPD, ceil refresh, no gating
  std::int64_t candidates = 0;
};

/// Total order used for the argmin: energy, then lower VPD, then scheme.
bool candidate_better(const EnergyReport& a, const EnergyReport& b);

/// Exhaustive search over every (tiling scheme, operating point) pair.
SchedulingDecision optimize(const GemmWorkload& w, const HardwareConfig& h,
                            const MemorySpec& spec, const OptimizerOptions& opts = {});

/// Reduction of `optimized` relative to `baseline`, as a fraction.
double reduction(double optimized, double baseline);

}  // namespace retpim
