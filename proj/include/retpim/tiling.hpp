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
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "retpim/config.hpp"

namespace retpim {

class InfeasibleHardware : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Dim : std::uint8_t { M, N, K };

char dim_char(Dim d);

/// Loop nest order, outermost first.
struct LoopOrder {
  std::array<Dim, 3> dims{Dim::M, Dim::N, Dim::K};

  std::string name() const;
  static LoopOrder from_name(const std::string& name);  // e.g. "nkm"

  /// Position of `d` in the nest, 0 = outermost.
  int level_of(Dim d) const;

  bool operator==(const LoopOrder&) const = default;
};

/// The six permutations, sorted by name.
const std::vector<LoopOrder>& all_loop_orders();

struct TileShape {
  std::int64_t tm = 1;
  std::int64_t tk = 1;
  std::int64_t tn = 1;

  auto operator<=>(const TileShape&) const = default;
};

struct TripCounts {
  std::int64_t gm = 1;
  std::int64_t gk = 1;
  std::int64_t gn = 1;

  std::int64_t of(Dim d) const { return d == Dim::M ? gm : d == Dim::N ? gn : gk; }
  std::int64_t total() const { return gm * gk * gn; }
  bool operator==(const TripCounts&) const = default;
};

struct TilingScheme {
  LoopOrder order;
  TileShape shape;
  TripCounts trips;
  std::int64_t cycles_per_tile = 1;  // T

  std::string name() const;  // "mnk/32x32x32"
  bool operator==(const TilingScheme&) const = default;
};

/// Lexicographic by loop-order name, then (tm, tk, tn).
bool scheme_less(const TilingScheme& a, const TilingScheme& b);

std::int64_t ceil_div(std::int64_t a, std::int64_t b);

/// Size of tile `index` along a dimension of length `dim`, clipped at the edge.
std::int64_t clipped_extent(std::int64_t dim, std::int64_t tile, std::int64_t index);

/// Candidate tile sizes along one dimension: divisors of `dim`, plus multiples
/// of `stride` up to `dim` when stride > 0. Ascending, unique.
std::vector<std::int64_t> tile_candidates(std::int64_t dim, std::int64_t stride);

/// Macro rows a weight tile of `tk` reduction rows occupies. Bit-serial
/// weights spread each element over weight_bits rows.
std::int64_t weight_tile_rows(std::int64_t tk, const GemmWorkload& w, const HardwareConfig& h);
/// Columns (bits) one weight row of a tile spans across the macro.
std::int64_t weight_tile_cols(std::int64_t tn, const GemmWorkload& w, const HardwareConfig& h);

/// Capacity checks: weight tile within one macro row width and the subarray
/// depth; input plus output tile within the unified buffer.
bool tile_fits(const TileShape& s, const GemmWorkload& w, const HardwareConfig& h);

/// PIM cycles to process one full tile: one row activation per weight row per
/// input bit per input row; the tn outputs come out column-parallel.
std::int64_t cycles_per_tile(const TileShape& s, const GemmWorkload& w, const HardwareConfig& h);

TilingScheme make_scheme(const LoopOrder& order, const TileShape& s, const GemmWorkload& w,
                         const HardwareConfig& h);

/// Every feasible (order, shape) pair in deterministic order. Throws
/// InfeasibleHardware when not even a 1x1x1 tile fits.
std::vector<TilingScheme> enumerate_tilings(const GemmWorkload& w, const HardwareConfig& h);

}  // namespace retpim
