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
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace retpim {

/// Raised for any schema or invariant violation in a configuration document.
/// `path()` names the offending field, e.g. `hardware.clock_hz` or
/// `memory_spec.points[1].retention_s`.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

enum class ProcessingType { BitParallel, BitSerial };
enum class BufferKind { Edram, Sram };

std::string to_string(ProcessingType t);
std::string to_string(BufferKind k);

/// One GEMM: (M x K) input times (K x N) weight.
struct GemmWorkload {
  std::int64_t m_dim = 1;
  std::int64_t k_dim = 1;
  std::int64_t n_dim = 1;
  int input_bits = 8;
  int weight_bits = 8;
  double input_bit_sparsity = 0.0;  // fraction of zero input bits, drives SA gating
  std::string label;

  bool operator==(const GemmWorkload&) const = default;
};

struct HardwareConfig {
  std::int64_t subarray_rows = 32;
  std::int64_t subarray_cols = 512;
  std::int64_t subarrays_per_bank = 2;
  std::int64_t num_banks = 4;
  std::int64_t buffer_bytes = 60 * 1024;
  std::int64_t macro_bytes = 16 * 1024;
  double clock_hz = 200e6;
  ProcessingType processing_type = ProcessingType::BitParallel;
  double scheduler_overhead_fraction = 0.0;

  // Extensions with defaults; all optional in the document.
  int accum_bits = 32;               // partial-sum width held in the buffer
  std::int64_t tile_stride = 0;      // 0: divisors only; >0 also multiples of stride
  std::optional<double> pu_energy;   // per-activation E_PU override
  double vdd_mv = 1000.0;
  double swing_beta = 0.8;           // RBL swing model slope
  std::int64_t max_candidates = 1'000'000;

  /// Bits activated by one macro row activation (all subarrays in lockstep).
  std::int64_t row_bits() const { return subarray_cols * subarrays_per_bank * num_banks; }
  std::int64_t total_subarrays() const { return subarrays_per_bank * num_banks; }

  bool operator==(const HardwareConfig&) const = default;
};

struct ComponentShares {
  double rwl_rbl_swing = 0.0;
  double pulldown_driver = 0.0;
  double sense_amp = 0.0;
  double other = 0.0;

  double sum() const { return rwl_rbl_swing + pulldown_driver + sense_amp + other; }
  bool operator==(const ComponentShares&) const = default;
};

/// One row of the reconfigurable-eDRAM behavioral table.
struct VpdOperatingPoint {
  double vpd_mv = 0.0;
  double access_energy = 1.0;  // per macro row activation, normalized
  ComponentShares component_shares;
  double retention_s = 1e-4;
  double write_energy = 0.6;    // per macro row
  double refresh_energy = 1.6;  // per macro row (read + write-back)

  bool operator==(const VpdOperatingPoint&) const = default;
};

/// Subarray organisation at which a MemorySpec's per-activation energies were
/// characterised. Lets the energy model rescale to other subarray shapes.
struct CalibrationGeometry {
  std::int64_t row_bits = 4096;
  std::int64_t subarrays = 8;
  std::int64_t bitline_rows = 32;  // cells per bitline

  bool operator==(const CalibrationGeometry&) const = default;
};

struct MemorySpec {
  std::vector<VpdOperatingPoint> points;  // ascending vpd_mv
  BufferKind buffer_kind = BufferKind::Edram;
  double buffer_access_energy = 1.0 / 512.0;   // per byte
  double buffer_refresh_energy = 1.6 / 512.0;  // per byte
  double buffer_retention_s = 1e-4;
  std::optional<CalibrationGeometry> calibration;

  const VpdOperatingPoint& point(double vpd_mv) const;
  bool operator==(const MemorySpec&) const = default;
};

struct Config {
  std::vector<GemmWorkload> workloads;
  HardwareConfig hardware;
  MemorySpec memory_spec;

  bool operator==(const Config&) const = default;
};

// Validators throw ConfigError; `path` prefixes the reported field path.
void validate(const GemmWorkload& w, const std::string& path = "workload");
void validate(const HardwareConfig& h, const std::string& path = "hardware");
void validate(const MemorySpec& s, const std::string& path = "memory_spec");

/// Built-in table calibrated for a 32x512 subarray macro: VPD levels
/// {0, 200, 300, 400, 500} mV, access energy and retention interpolated
/// geometrically between the measured endpoints.
MemorySpec default_memory_spec();

Config parse_config(const nlohmann::json& doc);
Config parse_config_text(const std::string& text);
Config load_config_file(const std::string& path);

nlohmann::json to_json(const GemmWorkload& w);
nlohmann::json to_json(const HardwareConfig& h);
nlohmann::json to_json(const MemorySpec& s);
nlohmann::json serialize(const Config& c);

}  // namespace retpim
