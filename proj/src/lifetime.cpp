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

#include "retpim/lifetime.hpp"

#include <stdexcept>

namespace retpim {

std::string to_string(Operand op) {
  switch (op) {
    case Operand::Input: return "input";
    case Operand::Weight: return "weight";
    case Operand::Output: return "output";
  }
  return "?";
}

std::array<Dim, 2> identity_dims(Operand op) {
  switch (op) {
    case Operand::Input: return {Dim::M, Dim::K};
    case Operand::Weight: return {Dim::K, Dim::N};
    case Operand::Output: return {Dim::M, Dim::N};
  }
  return {};
}

bool is_identity_dim(Operand op, Dim d) {
  const auto ids = identity_dims(op);
  return ids[0] == d || ids[1] == d;
}

std::int64_t tile_span(const LoopOrder& order, const TripCounts& trips, Operand op) {
  std::int64_t span = 1;
  std::int64_t inner = 1;
  for (int level = 2; level >= 0; --level) {
    const Dim d = order.dims[level];
    const std::int64_t g = trips.of(d);
    if (!is_identity_dim(op, d)) span += (g - 1) * inner;
    inner *= g;
  }
  return span;
}

LifetimeProfile compute_lifetimes(const TilingScheme& s, const HardwareConfig& h) {
  LifetimeProfile p;
  p.scheme = s;
  for (Operand op : kOperands) {
    auto& o = p[op];
    o.relevance_set = identity_dims(op);
    o.span_iterations = tile_span(s.order, s.trips, op);
    o.tile_lifetime_cycles = o.span_iterations * s.cycles_per_tile;
    o.residencies = s.trips.of(o.relevance_set[0]) * s.trips.of(o.relevance_set[1]);
  }
  return lifetime_to_seconds(std::move(p), h.clock_hz);
}

LifetimeProfile lifetime_to_seconds(LifetimeProfile p, double clock_hz) {
  if (!(clock_hz > 0.0)) throw std::invalid_argument("clock_hz must be > 0");
  for (auto& o : p.operands) {
    o.tile_lifetime_s = static_cast<double>(o.tile_lifetime_cycles) / clock_hz;
  }
  return p;
}

}  // namespace retpim
