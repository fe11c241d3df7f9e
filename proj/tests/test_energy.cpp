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

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "retpim/energy.hpp"
#include "retpim/lifetime.hpp"
#include "retpim/tiling.hpp"

using namespace retpim;

namespace {

GemmWorkload gemm(std::int64_t m, std::int64_t k, std::int64_t n, double sparsity = 0.0) {
  GemmWorkload w;
  w.m_dim = m;
  w.k_dim = k;
  w.n_dim = n;
  w.input_bit_sparsity = sparsity;
  return w;
}

// A one-point spec without calibration geometry, so per-activation energies
// are used as written.
MemorySpec flat_spec(double retention_s) {
  MemorySpec s;
  VpdOperatingPoint p;
  p.vpd_mv = 0;
  p.access_energy = 1.0;
  p.component_shares = {0.5, 0.2, 0.2, 0.1};
  p.retention_s = retention_s;
  p.write_energy = 0.6;
  p.refresh_energy = 1.6;
  s.points = {p};
  s.buffer_retention_s = retention_s;
  return s;
}

EnergyReport run(const TilingScheme& s, const GemmWorkload& w, const HardwareConfig& h,
                 const MemorySpec& spec, EnergyOptions o = {}) {
  return estimate_energy(s, compute_lifetimes(s, h), spec.points.front(), w, h, spec, o);
}

std::int64_t ceil_periods(std::int64_t cycles, double clock, double retention) {
  // Integer form: retention is a whole number of cycles in these tests.
  const auto r = static_cast<std::int64_t>(std::llround(retention * clock));
  return (cycles + r - 1) / r;
}

}  // namespace

TEST_CASE("refresh counts") {
  CHECK(refresh_count(1000e-6, 100e-6, RefreshPolicy::Span) == 9);
  CHECK(refresh_count(1000e-6, 100e-6, RefreshPolicy::Ceil) == 10);
  CHECK(refresh_count(99e-6, 100e-6, RefreshPolicy::Span) == 0);
  CHECK(refresh_count(100e-6, 100e-6, RefreshPolicy::Span) == 0);
  CHECK(refresh_count(100e-6, 100e-6, RefreshPolicy::Ceil) == 1);
  CHECK(refresh_count(0.0, 100e-6, RefreshPolicy::Ceil) == 0);
  CHECK(refresh_count(0.3, 0.1, RefreshPolicy::Ceil) == 3);  // stored 0.3 / stored 0.1 < 3
  CHECK(refresh_count_cycles(20000, 2e8, 100e-6, RefreshPolicy::Span) == 0);
  CHECK(refresh_count_cycles(20001, 2e8, 100e-6, RefreshPolicy::Span) == 1);
  CHECK_THROWS_AS(refresh_count(-1.0, 1.0, RefreshPolicy::Span), std::invalid_argument);
  CHECK_THROWS_AS(refresh_count(1.0, 0.0, RefreshPolicy::Span), std::invalid_argument);
}

TEST_CASE("access energy with sense-amp gating") {
  const MemorySpec s = default_memory_spec();
  CHECK(access_energy(s.point(0), 0.0) == doctest::Approx(1.0));
  CHECK(access_energy(s.point(500), 0.0) == doctest::Approx(0.2869));
  CHECK(access_energy(s.point(500), 1.0) == doctest::Approx(0.2869 * (1 - 0.5014)));
  CHECK(access_energy(s.point(500), 1.0) == doctest::Approx(0.14305).epsilon(1e-4));
  for (const auto& p : s.points) {
    double prev = access_energy(p, 0.0);
    for (double g = 0.1; g <= 1.0; g += 0.1) {
      const double e = access_energy(p, g);
      CHECK(e <= prev);
      prev = e;
    }
  }
}

TEST_CASE("processing unit energy") {
  const MemorySpec s = default_memory_spec();
  HardwareConfig h;
  const double pu = processing_unit_energy(h, gemm(1, 1, 1), s);
  CHECK(pu == doctest::Approx(0.3893).epsilon(1e-4));
  CHECK(1.0 / (1.0 + pu) == doctest::Approx(0.7198));
  HardwareConfig serial = h;
  serial.processing_type = ProcessingType::BitSerial;
  CHECK(processing_unit_energy(serial, gemm(1, 1, 1), s) == pu);
  h.pu_energy = 0.0;
  CHECK(processing_unit_energy(h, gemm(1, 1, 1), s) == 0.0);
}

TEST_CASE("geometry adaptation") {
  const MemorySpec s = default_memory_spec();
  HardwareConfig ref;
  for (const auto& p : s.points) CHECK(adapt_to_geometry(p, s, ref) == p);

  HardwareConfig h = ref;  // 64x128: half the bits per activation, twice the bitline
  h.subarray_rows = 64;
  h.subarray_cols = 128;
  h.subarrays_per_bank = 4;
  const auto& p = s.point(0);
  const auto q = adapt_to_geometry(p, s, h);
  const auto& c = p.component_shares;
  const double expect = c.rwl_rbl_swing + c.pulldown_driver + 0.5 * c.sense_amp + 2.0 * c.other;
  CHECK(q.access_energy == doctest::Approx(expect));
  CHECK(q.component_shares.sum() == doctest::Approx(1.0));
  CHECK(q.write_energy == doctest::Approx(p.write_energy));
  CHECK(q.refresh_energy == doctest::Approx(q.write_energy + q.access_energy));
  CHECK(q.retention_s == p.retention_s);

  MemorySpec bare = s;
  bare.calibration.reset();
  CHECK(adapt_to_geometry(p, bare, h) == p);
}

TEST_CASE("single tile without refresh") {
  HardwareConfig h;
  const MemorySpec spec = flat_spec(1.0);
  const GemmWorkload w = gemm(1, 1, 1);
  const auto s = make_scheme(LoopOrder::from_name("mnk"), {1, 1, 1}, w, h);
  const auto r = run(s, w, h, spec);
  CHECK(r.pim.refresh == 0.0);
  CHECK(r.buffer.refresh == 0.0);
  CHECK(r.p_n == 8);
  const double pu = processing_unit_energy(h, w, spec);
  CHECK(r.e_pim == doctest::Approx(8 * (1.0 + pu)));
  CHECK(r.e_total == doctest::Approx(r.e_pim + r.e_buffer));
}

TEST_CASE("matches an independent evaluation") {
  // Retention of exactly 40 cycles so several operands need refresh.
  HardwareConfig h;
  h.clock_hz = 0x1p27;
  h.scheduler_overhead_fraction = 0.02;
  const double retention = 40 * 0x1p-27;
  const MemorySpec spec = flat_spec(retention);
  for (bool serial : {false, true}) {
    h.processing_type = serial ? ProcessingType::BitSerial : ProcessingType::BitParallel;
    const GemmWorkload w = gemm(5, 3, 4, 0.25);
    for (const auto& s : enumerate_tilings(w, h)) {
      for (RefreshPolicy pol : {RefreshPolicy::Span, RefreshPolicy::Ceil}) {
        const auto r = run(s, w, h, spec, {pol, true});
        const auto& p = spec.points.front();
        const std::int64_t pn = oracle::activations(s, w, h);
        CHECK(r.p_n == pn);

        const auto count = [&](Operand op) {
          const std::int64_t span = oracle::span(s.order.name(), s.trips.gm, s.trips.gk,
                                                 s.trips.gn, op);
          const std::int64_t n = ceil_periods(span * s.cycles_per_tile, h.clock_hz, retention);
          return pol == RefreshPolicy::Ceil ? n : std::max<std::int64_t>(0, n - 1);
        };
        const std::int64_t wrows = (serial ? w.weight_bits : 1) * w.k_dim * s.trips.gn;
        const double acc = 1.0 * (1.0 - 0.2 * 0.25);
        const double pu = 0.2802 / 0.7198;
        const double e_pim = pn * (acc + pu) + 1.6 * wrows * count(Operand::Weight);
        const double in_b = 5 * 3 * 8 / 8.0;
        const double out_b = 5 * 4 * 32 / 8.0;
        const double bn = s.trips.gn * in_b + 2 * s.trips.gk * out_b + 3 * 4 * 8 / 8.0;
        const double e_buf = bn / 512.0 + 1.6 / 512.0 * (in_b * count(Operand::Input) +
                                                         out_b * count(Operand::Output));
        CHECK(r.b_n == doctest::Approx(bn));
        CHECK(r.e_pim == doctest::Approx(e_pim));
        CHECK(r.e_buffer == doctest::Approx(e_buf));
        CHECK(r.e_total == doctest::Approx(1.02 * (e_pim + e_buf)));
        CHECK(r.e_total == doctest::Approx(r.e_pim + r.e_buffer + r.e_sched));
        CHECK(r.e_pim == doctest::Approx(r.pim.access + r.pim.pu + r.pim.refresh));
      }
    }
  }
}

TEST_CASE("sram buffer never refreshes") {
  HardwareConfig h;
  MemorySpec spec = flat_spec(1e-9);
  spec.buffer_kind = BufferKind::Sram;
  const GemmWorkload w = gemm(8, 8, 8);
  const auto s = make_scheme(LoopOrder::from_name("kmn"), {1, 1, 1}, w, h);
  CHECK(run(s, w, h, spec).buffer.refresh == 0.0);
}

TEST_CASE("gating never raises energy") {
  HardwareConfig h;
  const MemorySpec spec = default_memory_spec();
  const GemmWorkload w = gemm(8, 8, 8, 0.5);
  const auto s = make_scheme(LoopOrder::from_name("mnk"), {4, 4, 4}, w, h);
  const auto p = compute_lifetimes(s, h);
  for (const auto& pt : spec.points) {
    const auto on = estimate_energy(s, p, pt, w, h, spec, {RefreshPolicy::Span, true});
    const auto off = estimate_energy(s, p, pt, w, h, spec, {RefreshPolicy::Span, false});
    CHECK(on.e_total < off.e_total);
  }
}

TEST_CASE("span never refreshes more than ceil") {
  HardwareConfig h;
  const MemorySpec spec = default_memory_spec();
  const GemmWorkload w = gemm(64, 32, 48);
  for (const auto& s : enumerate_tilings(w, h)) {
    const auto a = run(s, w, h, spec, {RefreshPolicy::Span, false});
    const auto b = run(s, w, h, spec, {RefreshPolicy::Ceil, false});
    CHECK(a.e_total <= b.e_total);
  }
}

TEST_CASE("mismatched lifetime profile") {
  HardwareConfig h;
  const MemorySpec spec = default_memory_spec();
  const GemmWorkload w = gemm(4, 4, 4);
  const auto s = make_scheme(LoopOrder::from_name("mnk"), {2, 2, 2}, w, h);
  const auto other = make_scheme(LoopOrder::from_name("nkm"), {2, 2, 2}, w, h);
  CHECK_THROWS_AS(estimate_energy(s, compute_lifetimes(other, h), spec.points[0], w, h, spec),
                  ConsistencyError);
}

TEST_CASE("refresh share crossover") {
  VpdOperatingPoint pt;
  pt.access_energy = 1.0;
  pt.refresh_energy = 1.6;
  pt.retention_s = 100e-6;
  const double n_star = refresh_crossover_accesses(1000e-6, pt, RefreshPolicy::Span);
  CHECK(n_star == doctest::Approx(9 * 1.6));
  CHECK(sweep_refresh_crossover(1000e-6, pt, RefreshPolicy::Span, 1000) == 15);
  CHECK(refresh_access_split(14, 1000e-6, pt, RefreshPolicy::Span).refresh_share() > 0.5);
  CHECK(refresh_access_split(15, 1000e-6, pt, RefreshPolicy::Span).refresh_share() < 0.5);
}
