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

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "retpim/config.hpp"
#include "retpim/energy.hpp"
#include "retpim/optimizer.hpp"

namespace retpim {

inline constexpr const char* kToolVersion = "0.3.0";

/// Fixed-column sweep CSV. Reals use 9 significant digits.
std::string sweep_csv_header();
std::string sweep_csv_row(std::size_t workload_index, const std::string& label,
                          const EnergyReport& r);
void write_sweep_csv(std::ostream& os, const std::vector<SchedulingDecision>& decisions);

nlohmann::json report_to_json(const EnergyReport& r);
nlohmann::json decision_to_json(std::size_t workload_index, const SchedulingDecision& d);

/// Per-VPD access energy and component shares of `spec`, plus the access
/// energy rescaled to the configured subarray geometry.
void write_breakdown_csv(std::ostream& os, const MemorySpec& spec, const HardwareConfig& h);

/// SHA-256 (hex) of the canonical serialization of `c`.
std::string config_digest(const Config& c);

nlohmann::json manifest_json(const Config& c, const std::string& command,
                             const std::string& timestamp,
                             const std::vector<SchedulingDecision>& decisions);

std::string utc_timestamp();

}  // namespace retpim
