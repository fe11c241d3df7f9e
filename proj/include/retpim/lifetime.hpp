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
#include <string>

#include "retpim/config.hpp"
#include "retpim/tiling.hpp"

namespace retpim {

enum class Operand : std::uint8_t { Input, Weight, Output };

inline constexpr std::array<Operand, 3> kOperands{Operand::Input, Operand::Weight, Operand::Output};

std::string to_string(Operand op);

/// Loop dimensions that select which tile of `op` is touched.
std::array<Dim, 2> identity_dims(Operand op);
bool is_identity_dim(Operand op, Dim d);

struct OperandLifetime {
  std::int64_t span_iterations = 1;  // first to last use, inclusive, in tile iterations
  std::int64_t tile_lifetime_cycles = 1;
  double tile_lifetime_s = 0.0;
  std::int64_t residencies = 1;      // distinct tiles, each resident once
  std::array<Dim, 2> relevance_set{};
};

struct LifetimeProfile {
  std::array<OperandLifetime, 3> operands{};
  TilingScheme scheme;  // the scheme this profile was derived from

  OperandLifetime& operator[](Operand op) { return operands[static_cast<int>(op)]; }
  const OperandLifetime& operator[](Operand op) const { return operands[static_cast<int>(op)]; }
};

/// Closed form: 1 + sum over liveness-irrelevant levels i of (G_i - 1) * W_i,
/// where W_i is the product of trip counts strictly inside level i.
std::int64_t tile_span(const LoopOrder& order, const TripCounts& trips, Operand op);

LifetimeProfile compute_lifetimes(const TilingScheme& s, const HardwareConfig& h);

LifetimeProfile lifetime_to_seconds(LifetimeProfile p, double clock_hz);

}  // namespace retpim
