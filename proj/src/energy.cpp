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

#include "retpim/energy.hpp"

#include <algorithm>
#include <cmath>

#include "retpim/exact.hpp"

namespace retpim {

std::string to_string(RefreshPolicy p) { return p == RefreshPolicy::Span ? "span" : "ceil"; }

RefreshPolicy parse_refresh_policy(const std::string& s) {
  if (s == "span") return RefreshPolicy::Span;
  if (s == "ceil") return RefreshPolicy::Ceil;
  throw std::invalid_argument("unknown refresh policy '" + s + "' (expected span or ceil)");
}

namespace {

// ceil(num/den) where `approx` is the floating-point quotient. Falls back to
// exact rationals only when the quotient sits close to an integer.
std::int64_t ceil_quotient(double approx, const Rational& num, const Rational& den) {
  const double nearest = std::nearbyint(approx);
  if (std::abs(approx - nearest) > 1e-7 * std::max(1.0, approx)) {
    return static_cast<std::int64_t>(std::ceil(approx));
  }
  return ceil_of(num / den);
}

std::int64_t apply_policy(std::int64_t periods, RefreshPolicy policy) {
  if (policy == RefreshPolicy::Ceil) return periods;
  return std::max<std::int64_t>(0, periods - 1);
}

}  // namespace

std::int64_t refresh_count(double lifetime_s, double retention_s, RefreshPolicy policy) {
  if (!(lifetime_s >= 0.0)) throw std::invalid_argument("lifetime must be >= 0");
  if (!(retention_s > 0.0)) throw std::invalid_argument("retention must be > 0");
  if (lifetime_s == 0.0) return 0;
  const std::int64_t periods =
      ceil_quotient(lifetime_s / retention_s, exact(lifetime_s), exact(retention_s));
  return apply_policy(periods, policy);
}

std::int64_t refresh_count_cycles(std::int64_t lifetime_cycles, double clock_hz,
                                  double retention_s, RefreshPolicy policy) {
  if (lifetime_cycles < 0) throw std::invalid_argument("lifetime must be >= 0");
  if (!(retention_s > 0.0) || !(clock_hz > 0.0)) {
    throw std::invalid_argument("retention and clock must be > 0");
  }
  if (lifetime_cycles == 0) return 0;
  const double approx = static_cast<double>(lifetime_cycles) / clock_hz / retention_s;
  const std::int64_t periods =
      ceil_quotient(approx, Rational(lifetime_cycles), exact(clock_hz) * exact(retention_s));
  return apply_policy(periods, policy);
}

double access_energy(const VpdOperatingPoint& pt, double gated_fraction) {
  return pt.access_energy * (1.0 - pt.component_shares.sense_amp * gated_fraction);
}

double processing_unit_energy(const HardwareConfig& h, const GemmWorkload& /*w*/,
                              const MemorySpec& spec) {
  if (h.pu_energy) return *h.pu_energy;
  constexpr double kMemoryShare = 0.7198;
  return spec.points.front().access_energy * (1.0 - kMemoryShare) / kMemoryShare;
}

VpdOperatingPoint adapt_to_geometry(const VpdOperatingPoint& pt, const MemorySpec& spec,
                                    const HardwareConfig& h) {
  if (!spec.calibration) return pt;
  const double col_ratio =
      static_cast<double>(h.row_bits()) / static_cast<double>(spec.calibration->row_bits);
  const double sub_ratio = static_cast<double>(h.total_subarrays()) /
                           static_cast<double>(spec.calibration->subarrays);
  const double len_ratio = static_cast<double>(h.subarray_rows) /
                           static_cast<double>(spec.calibration->bitline_rows);
  if (col_ratio == 1.0 && sub_ratio == 1.0 && len_ratio == 1.0) return pt;

  const auto& c = pt.component_shares;
  const double e = pt.access_energy;
  // Bitline swing and the pull-down driver see the bitline capacitance,
  // which grows with the number of cells per bitline.
  const double swing = e * c.rwl_rbl_swing * col_ratio * len_ratio;
  const double pulldown = e * c.pulldown_driver * col_ratio * len_ratio;
  const double sense = e * c.sense_amp * col_ratio;
  const double other = e * c.other * sub_ratio;

  VpdOperatingPoint out = pt;
  out.access_energy = swing + pulldown + sense + other;
  out.component_shares = {swing / out.access_energy, pulldown / out.access_energy,
                          sense / out.access_energy, other / out.access_energy};
  out.write_energy = pt.write_energy * col_ratio * len_ratio;
  out.refresh_energy = pt.refresh_energy + (out.access_energy - pt.access_energy) +
                       (out.write_energy - pt.write_energy);
  return out;
}

std::int64_t total_activations(const TilingScheme& s, const GemmWorkload& w,
                               const HardwareConfig& h) {
  // Sum over (m, k, n) tiles of tm_eff * bits * tk_eff collapses because the
  // clipped extents along a dimension sum to that dimension.
  std::int64_t p = s.trips.gn * w.m_dim * w.k_dim * w.input_bits;
  if (h.processing_type == ProcessingType::BitSerial) p *= w.weight_bits;
  return p;
}

EnergyReport estimate_energy(const TilingScheme& scheme, const LifetimeProfile& profile,
                             const VpdOperatingPoint& raw_pt, const GemmWorkload& w,
                             const HardwareConfig& h, const MemorySpec& spec,
                             const EnergyOptions& opts) {
  if (!(profile.scheme == scheme)) {
    throw ConsistencyError("lifetime profile for " + profile.scheme.name() +
                           " does not match scheme " + scheme.name());
  }
  const VpdOperatingPoint pt = adapt_to_geometry(raw_pt, spec, h);

  EnergyReport r;
  r.scheme = scheme;
  r.vpd_mv = pt.vpd_mv;
  r.policy = opts.policy;
  r.sense_amp_gating = opts.sense_amp_gating;

  r.e_acc_per_op = access_energy(pt, opts.sense_amp_gating ? w.input_bit_sparsity : 0.0);
  r.e_pu_per_op = processing_unit_energy(h, w, spec);
  r.e_ref_per_row = pt.refresh_energy;

  r.p_n = total_activations(scheme, w, h);

  // Weight tiles are the PIM-resident operand. Clipped k-tiles hold fewer
  // rows; summed over all weight tiles that is Gn copies of K rows.
  const auto& wl = profile[Operand::Weight];
  const std::int64_t weight_rows_total = scheme.trips.gn * weight_tile_rows(w.k_dim, w, h);
  const std::int64_t weight_refreshes =
      refresh_count_cycles(wl.tile_lifetime_cycles, h.clock_hz, pt.retention_s, opts.policy);
  r.refreshes_per_tile[static_cast<int>(Operand::Weight)] = weight_refreshes;
  r.weight_refresh_rows = weight_rows_total * weight_refreshes;

  r.pim.access = r.e_acc_per_op * static_cast<double>(r.p_n);
  r.pim.pu = r.e_pu_per_op * static_cast<double>(r.p_n);
  r.pim.refresh = r.e_ref_per_row * static_cast<double>(r.weight_refresh_rows);
  r.e_pim = r.pim.access + r.pim.pu + r.pim.refresh;

  // Buffer traffic: each tile iteration streams its input tile and reads and
  // writes back its partial sums; weights pass through once.
  const double m = static_cast<double>(w.m_dim);
  const double k = static_cast<double>(w.k_dim);
  const double n = static_cast<double>(w.n_dim);
  const double input_bytes = m * k * w.input_bits / 8.0;
  const double output_bytes = m * n * h.accum_bits / 8.0;
  const double weight_bytes = k * n * w.weight_bits / 8.0;
  r.b_n = static_cast<double>(scheme.trips.gn) * input_bytes +
          2.0 * static_cast<double>(scheme.trips.gk) * output_bytes + weight_bytes;
  r.buffer.access = spec.buffer_access_energy * r.b_n;

  if (spec.buffer_kind == BufferKind::Edram) {
    const auto count = [&](Operand op) {
      return refresh_count_cycles(profile[op].tile_lifetime_cycles, h.clock_hz,
                                  spec.buffer_retention_s, opts.policy);
    };
    const std::int64_t in_ref = count(Operand::Input);
    const std::int64_t out_ref = count(Operand::Output);
    r.refreshes_per_tile[static_cast<int>(Operand::Input)] = in_ref;
    r.refreshes_per_tile[static_cast<int>(Operand::Output)] = out_ref;
    r.buffer.refresh = spec.buffer_refresh_energy *
                       (input_bytes * static_cast<double>(in_ref) +
                        output_bytes * static_cast<double>(out_ref));
  }
  r.e_buffer = r.buffer.access + r.buffer.refresh;

  r.e_sched = h.scheduler_overhead_fraction * (r.e_pim + r.e_buffer);
  r.e_total = r.e_pim + r.e_buffer + r.e_sched;
  return r;
}

RefreshAccessSplit refresh_access_split(std::int64_t accesses, double lifetime_s,
                                        const VpdOperatingPoint& pt, RefreshPolicy policy) {
  RefreshAccessSplit s;
  s.access = static_cast<double>(accesses) * pt.access_energy;
  s.refresh = static_cast<double>(refresh_count(lifetime_s, pt.retention_s, policy)) *
              pt.refresh_energy;
  return s;
}

double refresh_crossover_accesses(double lifetime_s, const VpdOperatingPoint& pt,
                                  RefreshPolicy policy) {
  const auto refreshes = refresh_count(lifetime_s, pt.retention_s, policy);
  return static_cast<double>(refreshes) * pt.refresh_energy / pt.access_energy;
}

std::int64_t sweep_refresh_crossover(double lifetime_s, const VpdOperatingPoint& pt,
                                     RefreshPolicy policy, std::int64_t max_accesses) {
  for (std::int64_t n = 1; n <= max_accesses; ++n) {
    if (refresh_access_split(n, lifetime_s, pt, policy).refresh_share() < 0.5) return n;
  }
  return -1;
}

}  // namespace retpim
