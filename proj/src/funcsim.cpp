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

#include "retpim/funcsim.hpp"

#include <algorithm>
#include <limits>

#include "json.hpp"
#include "retpim/tiling.hpp"

namespace retpim {

const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::Write: return "write";
    case EventKind::Refresh: return "refresh";
    case EventKind::Read: return "read";
    case EventKind::Retire: return "retire";
  }
  return "?";
}

namespace {

std::int64_t floor_of(const Rational& q) { return -ceil_of(-q); }

struct NestWalk {
  std::vector<std::int64_t> first;
  std::vector<std::int64_t> last;
  std::vector<std::vector<std::int64_t>> uses;  // empty unless requested
  std::array<std::size_t, 3> base{};            // region offset per operand
  std::array<std::int64_t, 3> stride{};         // second-coordinate extent per operand
};

std::array<std::int64_t, 2> coords(Operand op, std::int64_t im, std::int64_t ik, std::int64_t in) {
  switch (op) {
    case Operand::Input: return {im, ik};
    case Operand::Weight: return {ik, in};
    case Operand::Output: return {im, in};
  }
  return {0, 0};
}

// Walks the flattened nest once, recording first/last (and optionally every)
// use of each tile.
NestWalk walk_nest(const TilingScheme& s, std::int64_t max_iterations, bool keep_uses) {
  const TripCounts& g = s.trips;
  if (g.total() > max_iterations) {
    throw IterationGuardExceeded("loop nest of " + std::to_string(g.total()) +
                                 " tile iterations exceeds the guard of " +
                                 std::to_string(max_iterations));
  }
  NestWalk nw;
  std::size_t offset = 0;
  for (Operand op : kOperands) {
    const auto ids = identity_dims(op);
    nw.base[static_cast<int>(op)] = offset;
    nw.stride[static_cast<int>(op)] = g.of(ids[1]);
    offset += static_cast<std::size_t>(g.of(ids[0]) * g.of(ids[1]));
  }
  nw.first.assign(offset, -1);
  nw.last.assign(offset, -1);
  if (keep_uses) nw.uses.resize(offset);

  const std::array<std::int64_t, 3> extent{g.of(s.order.dims[0]), g.of(s.order.dims[1]),
                                           g.of(s.order.dims[2])};
  std::int64_t it = 0;
  std::array<std::int64_t, 3> idx{};  // indexed by Dim
  for (std::int64_t a = 0; a < extent[0]; ++a) {
    for (std::int64_t b = 0; b < extent[1]; ++b) {
      for (std::int64_t c = 0; c < extent[2]; ++c, ++it) {
        idx[static_cast<int>(s.order.dims[0])] = a;
        idx[static_cast<int>(s.order.dims[1])] = b;
        idx[static_cast<int>(s.order.dims[2])] = c;
        const std::int64_t im = idx[static_cast<int>(Dim::M)];
        const std::int64_t in = idx[static_cast<int>(Dim::N)];
        const std::int64_t ik = idx[static_cast<int>(Dim::K)];
        for (Operand op : kOperands) {
          const auto t = coords(op, im, ik, in);
          const std::size_t r = nw.base[static_cast<int>(op)] +
                                static_cast<std::size_t>(t[0] * nw.stride[static_cast<int>(op)] + t[1]);
          if (nw.first[r] < 0) nw.first[r] = it;
          nw.last[r] = it;
          if (keep_uses) nw.uses[r].push_back(it);
        }
      }
    }
  }
  return nw;
}

}  // namespace

SimTrace simulate(const SchedulingDecision& d, const GemmWorkload& w, const HardwareConfig& h,
                  const MemorySpec& spec, const SimOptions& opts) {
  SimTrace trace;
  const TilingScheme& s = d.scheme;
  const NestWalk nw = walk_nest(s, opts.max_iterations, true);
  const std::int64_t T = s.cycles_per_tile;
  const Rational clock = exact(h.clock_hz);

  const Rational weight_actual = exact(spec.point(d.vpd_mv).retention_s) * clock;
  const Rational buffer_actual = exact(spec.buffer_retention_s) * clock;
  const Rational weight_plan = exact(d.planned_weight_retention_s) * clock;
  const Rational buffer_plan = exact(d.planned_buffer_retention_s) * clock;
  const bool buffer_volatile = spec.buffer_kind == BufferKind::Edram;

  trace.regions.resize(nw.first.size());
  for (Operand op : kOperands) {
    const auto ids = identity_dims(op);
    const std::int64_t ga = s.trips.of(ids[0]);
    const std::int64_t gb = s.trips.of(ids[1]);
    const auto dim_len = [&](Dim dd) {
      return dd == Dim::M ? w.m_dim : dd == Dim::N ? w.n_dim : w.k_dim;
    };
    const auto tile_len = [&](Dim dd) {
      return dd == Dim::M ? s.shape.tm : dd == Dim::N ? s.shape.tn : s.shape.tk;
    };
    for (std::int64_t a = 0; a < ga; ++a) {
      for (std::int64_t b = 0; b < gb; ++b) {
        const std::size_t r = nw.base[static_cast<int>(op)] + static_cast<std::size_t>(a * gb + b);
        CellRegion& reg = trace.regions[r];
        reg.operand = op;
        reg.tile_a = a;
        reg.tile_b = b;
        reg.first_iteration = nw.first[r];
        reg.last_iteration = nw.last[r];
        const std::int64_t ea = clipped_extent(dim_len(ids[0]), tile_len(ids[0]), a);
        const std::int64_t eb = clipped_extent(dim_len(ids[1]), tile_len(ids[1]), b);
        switch (op) {
          case Operand::Input: reg.bits = ea * eb * w.input_bits; break;
          case Operand::Weight:
            reg.rows = weight_tile_rows(ea, w, h);
            reg.bits = reg.rows * weight_tile_cols(eb, w, h);
            break;
          case Operand::Output: reg.bits = ea * eb * h.accum_bits; break;
        }
      }
    }
  }

  for (std::size_t r = 0; r < trace.regions.size(); ++r) {
    CellRegion& reg = trace.regions[r];
    const bool is_weight = reg.operand == Operand::Weight;
    const bool volatile_cell = is_weight || buffer_volatile;
    const Rational& actual = is_weight ? weight_actual : buffer_actual;
    const Rational& plan = is_weight ? weight_plan : buffer_plan;
    const double plan_s = is_weight ? d.planned_weight_retention_s : d.planned_buffer_retention_s;

    const std::int64_t write_cycle = reg.first_iteration * T;
    const std::int64_t retire_cycle = (reg.last_iteration + 1) * T;
    const std::int64_t planned =
        volatile_cell ? refresh_count_cycles(retire_cycle - write_cycle, h.clock_hz, plan_s, d.policy)
                      : 0;

    auto emit = [&](const Rational& t, EventKind k) {
      if (opts.record_events) trace.events.push_back({t, k, r});
    };

    // write
    reg.last_charge = write_cycle;
    reg.deadline = reg.last_charge + actual;
    reg.live = true;
    std::int64_t last_valid = floor_of(reg.deadline);
    ++trace.writes;
    emit(reg.last_charge, EventKind::Write);

    std::int64_t next_refresh = 1;
    Rational refresh_time = Rational(write_cycle) + plan;
    // A refresh at time t precedes a read at the same time; reads happen on
    // whole cycles, so it covers every read at cycle >= ceil(t).
    auto refresh_before = [&](std::int64_t cycle) {
      while (next_refresh <= planned && ceil_of(refresh_time) <= cycle) {
        if (reg.live) {
          // A refresh senses the cell first; past the deadline it restores
          // decayed data.
          if (volatile_cell && refresh_time > reg.deadline) {
            ++trace.violation_count;
            if (trace.violations.size() < opts.max_recorded_violations) {
              trace.violations.push_back({r, refresh_time, reg.deadline});
            }
          }
          reg.last_charge = refresh_time;
          reg.deadline = refresh_time + actual;
          last_valid = floor_of(reg.deadline);
        }
        ++reg.refreshes;
        ++trace.refreshes;
        emit(refresh_time, EventKind::Refresh);
        ++next_refresh;
        refresh_time += plan;
      }
    };

    auto read_at = [&](std::int64_t cycle) {
      refresh_before(cycle);
      ++trace.reads;
      if (is_weight) {
        ++trace.pim_reads;
      } else {
        ++trace.buffer_reads;
      }
      emit(Rational(cycle), EventKind::Read);
      if (volatile_cell && (!reg.live || cycle > last_valid)) {
        ++trace.violation_count;
        if (trace.violations.size() < opts.max_recorded_violations) {
          trace.violations.push_back({r, Rational(cycle), reg.deadline});
        }
      }
    };

    for (std::int64_t u : nw.uses[r]) {
      const std::int64_t start = u * T;
      if (is_weight) {
        // One activation per cycle; clipped tiles finish early.
        std::int64_t im = 0, ik = 0;
        {
          std::int64_t rem = u;
          std::array<std::int64_t, 3> idx{};
          for (int level = 2; level >= 0; --level) {
            const Dim dd = s.order.dims[level];
            idx[static_cast<int>(dd)] = rem % s.trips.of(dd);
            rem /= s.trips.of(dd);
          }
          im = idx[static_cast<int>(Dim::M)];
          ik = idx[static_cast<int>(Dim::K)];
        }
        std::int64_t active = clipped_extent(w.m_dim, s.shape.tm, im) * w.input_bits *
                              clipped_extent(w.k_dim, s.shape.tk, ik);
        if (h.processing_type == ProcessingType::BitSerial) active *= w.weight_bits;
        for (std::int64_t c = 1; c <= active; ++c) read_at(start + c);
      } else {
        read_at(start + T);
      }
    }

    // Retire, then any planned refreshes that fall after last use.
    refresh_before(retire_cycle);
    reg.live = false;
    emit(Rational(retire_cycle), EventKind::Retire);
    refresh_before(std::numeric_limits<std::int64_t>::max());
  }

  if (opts.record_events) {
    std::stable_sort(trace.events.begin(), trace.events.end(),
                     [](const SimEvent& a, const SimEvent& b) {
                       if (a.time_cycles != b.time_cycles) return a.time_cycles < b.time_cycles;
                       return a.kind < b.kind;
                     });
  }
  return trace;
}

void write_trace_ndjson(std::ostream& os, const SimTrace& trace, double clock_hz) {
  for (const auto& e : trace.events) {
    const CellRegion& reg = trace.regions[e.region];
    const double t = static_cast<double>(e.time_cycles) / clock_hz;
    nlohmann::json j{{"time_s", t},
                     {"kind", to_string(e.kind)},
                     {"operand", to_string(reg.operand)},
                     {"tile", {reg.tile_a, reg.tile_b}},
                     {"rows", reg.rows}};
    os << j.dump() << '\n';
  }
}

OracleSpans lifetime_oracle(const TilingScheme& s, std::int64_t max_iterations) {
  const NestWalk nw = walk_nest(s, max_iterations, false);
  OracleSpans out;
  for (Operand op : kOperands) {
    const int o = static_cast<int>(op);
    const std::size_t lo = nw.base[o];
    const std::size_t hi = o == 2 ? nw.first.size() : nw.base[o + 1];
    std::int64_t mx = 0;
    std::int64_t mn = std::numeric_limits<std::int64_t>::max();
    for (std::size_t r = lo; r < hi; ++r) {
      const std::int64_t span = nw.last[r] - nw.first[r] + 1;
      mx = std::max(mx, span);
      mn = std::min(mn, span);
    }
    out.max_span[o] = mx;
    out.min_span[o] = mn;
  }
  return out;
}

std::int64_t refresh_oracle(double lifetime_s, double retention_s, RefreshPolicy policy) {
  const Rational lifetime = exact(lifetime_s);
  const Rational period = exact(retention_s);
  std::int64_t count = 0;
  Rational t = policy == RefreshPolicy::Ceil ? Rational(0) : period;
  while (t < lifetime) {
    ++count;
    t += period;
  }
  return count;
}

}  // namespace retpim
