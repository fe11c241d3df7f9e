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

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "retpim/config.hpp"
#include "retpim/lifetime.hpp"
#include "retpim/tiling.hpp"

namespace retpim {

class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// `Span` refreshes only strictly inside a lifetime (ceil(L/R) - 1, so data
/// that dies before its retention deadline is never refreshed). `Ceil` is the
/// literal ceil(L/R) count with no skipping.
enum class RefreshPolicy { Span, Ceil };

std::string to_string(RefreshPolicy p);
RefreshPolicy parse_refresh_policy(const std::string& s);

/// Periodic refreshes needed to keep data alive for `lifetime_s`.
/// Exact for the given doubles; throws std::invalid_argument on a negative
/// lifetime or non-positive retention.
std::int64_t refresh_count(double lifetime_s, double retention_s, RefreshPolicy policy);

/// Same count with the lifetime given exactly as cycles / clock_hz.
std::int64_t refresh_count_cycles(std::int64_t lifetime_cycles, double clock_hz,
                                  double retention_s, RefreshPolicy policy);

/// Energy of one activation with the sense amp gated off for `gated_fraction`
/// of the broadcast input bits. Only the sense-amp share is affected.
double access_energy(const VpdOperatingPoint& pt, double gated_fraction);

/// Per-activation processing-unit energy (adder tree, accumulator, buffers).
/// Defaults so memory is 71.98% of macro power at the lowest-VPD point.
double processing_unit_energy(const HardwareConfig& h, const GemmWorkload& w,
                              const MemorySpec& spec);

/// Rescales an operating point characterised at `spec.calibration` to the
/// subarray organisation in `h`. Column-proportional components (swing,
/// pull-down, sense amp, write) follow the bits per activation; swing,
/// pull-down and write also follow the bitline length. The "other" share is
/// per-subarray periphery and follows the subarray count. Identity when the
/// spec carries no calibration geometry.
VpdOperatingPoint adapt_to_geometry(const VpdOperatingPoint& pt, const MemorySpec& spec,
                                    const HardwareConfig& h);

struct EnergyOptions {
  RefreshPolicy policy = RefreshPolicy::Span;
  bool sense_amp_gating = true;
};

struct EnergyReport {
  TilingScheme scheme;
  double vpd_mv = 0.0;
  RefreshPolicy policy = RefreshPolicy::Span;
  bool sense_amp_gating = true;

  double e_total = 0.0;
  double e_pim = 0.0;
  double e_buffer = 0.0;
  double e_sched = 0.0;  // scheduler/controller overhead

  struct {
    double access = 0.0;
    double pu = 0.0;
    double refresh = 0.0;
  } pim;
  struct {
    double access = 0.0;
    double refresh = 0.0;
  } buffer;

  // Per-activation terms actually used.
  double e_acc_per_op = 0.0;
  double e_pu_per_op = 0.0;
  double e_ref_per_row = 0.0;

  std::int64_t p_n = 0;     // PIM row activations
  double b_n = 0.0;         // buffer traffic, bytes
  std::array<std::int64_t, 3> refreshes_per_tile{};  // by Operand
  std::int64_t weight_refresh_rows = 0;              // sum of rows * refreshes

  /// eDRAM macro energy: memory access plus refresh, without the PU.
  double macro_energy() const { return pim.access + pim.refresh; }
};

/// Energy of one (scheme, operating point) candidate. `profile` must come
/// from `scheme`.
EnergyReport estimate_energy(const TilingScheme& scheme, const LifetimeProfile& profile,
                             const VpdOperatingPoint& pt, const GemmWorkload& w,
                             const HardwareConfig& h, const MemorySpec& spec,
                             const EnergyOptions& opts = {});

/// Total PIM activations over all tile iterations with edge tiles clipped.
std::int64_t total_activations(const TilingScheme& s, const GemmWorkload& w,
                               const HardwareConfig& h);

/// Memory energy of one row that is accessed `accesses` times while it must
/// stay alive for `lifetime_s`.
struct RefreshAccessSplit {
  double access = 0.0;
  double refresh = 0.0;
  double refresh_share() const {
    const double t = access + refresh;
    return t > 0.0 ? refresh / t : 0.0;
  }
};

RefreshAccessSplit refresh_access_split(std::int64_t accesses, double lifetime_s,
                                        const VpdOperatingPoint& pt, RefreshPolicy policy);

/// Access count at which refresh and access energy are equal.
double refresh_crossover_accesses(double lifetime_s, const VpdOperatingPoint& pt,
                                  RefreshPolicy policy);

/// Smallest access count in [1, max_accesses] whose refresh share is below
/// one half, found by sweeping refresh_access_split; -1 if none.
std::int64_t sweep_refresh_crossover(double lifetime_s, const VpdOperatingPoint& pt,
                                     RefreshPolicy policy, std::int64_t max_accesses);

}  // namespace retpim
