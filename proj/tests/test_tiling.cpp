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

#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "retpim/tiling.hpp"

using namespace retpim;

namespace {

HardwareConfig macro() { return HardwareConfig{}; }

GemmWorkload gemm(std::int64_t m, std::int64_t k, std::int64_t n) {
  GemmWorkload w;
  w.m_dim = m;
  w.k_dim = k;
  w.n_dim = n;
  return w;
}

std::set<oracle::SchemeKey> keys(const std::vector<TilingScheme>& v) {
  std::set<oracle::SchemeKey> out;
  for (const auto& s : v) out.emplace(s.order.name(), s.shape.tm, s.shape.tk, s.shape.tn);
  return out;
}

}  // namespace

TEST_CASE("loop orders") {
  const auto& o = all_loop_orders();
  REQUIRE(o.size() == 6);
  CHECK(o.front().name() == "kmn");
  CHECK(o.back().name() == "nmk");
  CHECK(LoopOrder::from_name("nkm").level_of(Dim::M) == 2);
  CHECK_THROWS_AS(LoopOrder::from_name("mmk"), std::invalid_argument);
}

TEST_CASE("tile candidates") {
  CHECK(tile_candidates(12, 0) == std::vector<std::int64_t>{1, 2, 3, 4, 6, 12});
  CHECK(tile_candidates(10, 4) == std::vector<std::int64_t>{1, 2, 4, 5, 8, 10});
  CHECK(tile_candidates(1, 0) == std::vector<std::int64_t>{1});
}

TEST_CASE("small workloads") {
  CHECK(enumerate_tilings(gemm(2, 2, 2), macro()).size() == 48);
  const auto one = enumerate_tilings(gemm(1, 1, 1), macro());
  REQUIRE(one.size() == 6);
  for (const auto& s : one) {
    CHECK(s.trips.total() == 1);
    CHECK(s.cycles_per_tile == 8);
  }
}

TEST_CASE("cycles per tile") {
  GemmWorkload w = gemm(64, 64, 64);
  HardwareConfig h = macro();
  CHECK(cycles_per_tile({1, 1, 1}, w, h) == 8);
  CHECK(cycles_per_tile({2, 3, 1}, w, h) == 48);
  h.processing_type = ProcessingType::BitSerial;
  CHECK(cycles_per_tile({2, 3, 1}, w, h) == 384);
}

TEST_CASE("infeasible hardware") {
  HardwareConfig h = macro();
  h.buffer_bytes = 4;  // 8 input bits + 32 accumulator bits > 32 bits
  CHECK_THROWS_AS(enumerate_tilings(gemm(4, 4, 4), h), InfeasibleHardware);

  GemmWorkload w = gemm(4, 4, 4);
  w.weight_bits = 16;
  HardwareConfig tiny = macro();
  tiny.subarray_rows = 8;
  tiny.subarray_cols = 8;
  tiny.subarrays_per_bank = 1;
  tiny.num_banks = 1;
  tiny.macro_bytes = 8;
  CHECK_THROWS_AS(enumerate_tilings(w, tiny), InfeasibleHardware);
}

TEST_CASE("matches the brute-force generator") {
  HardwareConfig narrow = macro();
  narrow.subarray_rows = 4;
  narrow.subarray_cols = 16;
  narrow.subarrays_per_bank = 1;
  narrow.num_banks = 1;
  narrow.macro_bytes = 8;
  narrow.buffer_bytes = 24;
  HardwareConfig serial = narrow;
  serial.processing_type = ProcessingType::BitSerial;
  serial.subarray_rows = 16;
  serial.subarray_cols = 4;
  HardwareConfig strided = macro();
  strided.tile_stride = 3;
  for (const auto& h : {macro(), narrow, serial, strided}) {
    for (std::int64_t m : {1, 5, 6}) {
      for (std::int64_t k : {2, 7}) {
        for (std::int64_t n : {3, 8}) {
          GemmWorkload w = gemm(m, k, n);
          w.input_bits = 2;
          w.weight_bits = 2;
          CHECK(keys(enumerate_tilings(w, h)) == oracle::tilings(w, h));
        }
      }
    }
  }
}

TEST_CASE("every scheme covers the workload exactly once") {
  HardwareConfig h = macro();
  h.tile_stride = 4;
  const GemmWorkload w = gemm(10, 7, 9);
  for (const auto& s : enumerate_tilings(w, h)) {
    std::int64_t macs = 0;
    for (std::int64_t i = 0; i < s.trips.gm; ++i) {
      for (std::int64_t j = 0; j < s.trips.gk; ++j) {
        for (std::int64_t l = 0; l < s.trips.gn; ++l) {
          macs += clipped_extent(w.m_dim, s.shape.tm, i) * clipped_extent(w.k_dim, s.shape.tk, j) *
                  clipped_extent(w.n_dim, s.shape.tn, l);
        }
      }
    }
    CHECK(macs == w.m_dim * w.k_dim * w.n_dim);
  }
}

TEST_CASE("enumeration is deterministic and ordered") {
  const auto a = enumerate_tilings(gemm(8, 8, 8), macro());
  const auto b = enumerate_tilings(gemm(8, 8, 8), macro());
  CHECK(a == b);
  for (std::size_t i = 1; i < a.size(); ++i) CHECK(scheme_less(a[i - 1], a[i]));
}
