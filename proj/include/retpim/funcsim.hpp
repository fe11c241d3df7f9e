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
#include <ostream>
#include <stdexcept>
#include <vector>

#include "retpim/config.hpp"
#include "retpim/energy.hpp"
#include "retpim/exact.hpp"
#include "retpim/lifetime.hpp"
#include "retpim/optimizer.hpp"

namespace retpim {

/// Thrown when a loop nest is too large to walk explicitly.
class IterationGuardExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr std::int64_t kDefaultIterationGuard = 1'000'000;

/// One resident tile. Times are exact, in PIM cycles.
struct CellRegion {
  Operand operand = Operand::Input;
  std::int64_t tile_a = 0;  // index along the first identity dim
  std::int64_t tile_b = 0;  // index along the second identity dim
  std::int64_t rows = 0;    // macro rows (weights only)
  std::int64_t bits = 0;
  std::int64_t first_iteration = 0;
  std::int64_t last_iteration = 0;
  Rational last_charge;
  Rational deadline;
  bool live = false;
  std::int64_t refreshes = 0;
};

// Declaration order is the tie-break order at equal timestamps.
enum class EventKind : std::uint8_t { Write, Refresh, Read, Retire };

const char* to_string(EventKind k);

struct SimEvent {
  Rational time_cycles;
  EventKind kind = EventKind::Write;
  std::size_t region = 0;
};

/// A read or refresh of a live region after its retention deadline.
struct Violation {
  std::size_t region = 0;
  Rational time_cycles;
  Rational deadline_cycles;
};

struct SimTrace {
  std::vector<CellRegion> regions;
  std::vector<Violation> violations;  // capped at SimOptions::max_recorded_violations
  std::int64_t violation_count = 0;
  std::int64_t reads = 0;
  std::int64_t pim_reads = 0;      // weight-row activations
  std::int64_t buffer_reads = 0;
  std::int64_t writes = 0;
  std::int64_t refreshes = 0;
  std::vector<SimEvent> events;    // only when SimOptions::record_events

  bool retention_safe() const { return violation_count == 0; }
};

struct SimOptions {
  bool record_events = false;
  std::int64_t max_iterations = kDefaultIterationGuard;
  std::size_t max_recorded_violations = 100'000;
};

/// Replays the decision's loop nest at the hardware clock. Writes happen at a
/// tile's first use, a weight read at every activation and a buffer read at
/// the end of every use, retire at the end of the last use. Refreshes follow
/// the decision's plan (its policy and planned retention); deadlines follow
/// the retention in `spec`, so a spec altered after the decision shows up as
/// violations. A read or a refresh of live data past its deadline is a
/// violation.
SimTrace simulate(const SchedulingDecision& d, const GemmWorkload& w, const HardwareConfig& h,
                  const MemorySpec& spec, const SimOptions& opts = {});

/// Newline-delimited JSON, one event per line.
void write_trace_ndjson(std::ostream& os, const SimTrace& trace, double clock_hz);

struct OracleSpans {
  std::array<std::int64_t, 3> max_span{};  // by Operand, in tile iterations
  std::array<std::int64_t, 3> min_span{};
};

/// First/last-use spans measured by walking the flattened loop nest.
OracleSpans lifetime_oracle(const TilingScheme& s,
                            std::int64_t max_iterations = kDefaultIterationGuard);

/// Refresh events a periodic state machine emits over [0, lifetime), in exact
/// arithmetic. `Span` starts the first period at the write; `Ceil` also
/// refreshes at the start of the first period.
std::int64_t refresh_oracle(double lifetime_s, double retention_s, RefreshPolicy policy);

}  // namespace retpim
