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

#include "retpim/optimizer.hpp"

#include <algorithm>
#include <thread>

#include "retpim/lifetime.hpp"

namespace retpim {

SwingModel linear_swing_model(double vdd_mv, double beta) {
  return [vdd_mv, beta](double vpd_mv) {
    return RblLevels{vdd_mv, vdd_mv - beta * (vdd_mv - vpd_mv)};
  };
}

double reference_voltage(const VpdOperatingPoint& pt, const SwingModel& model) {
  const RblLevels l = model(pt.vpd_mv);
  return 0.5 * (l.data1_mv + l.data0_mv);
}

bool candidate_better(const EnergyReport& a, const EnergyReport& b) {
  if (a.e_total != b.e_total) return a.e_total < b.e_total;
  if (a.vpd_mv != b.vpd_mv) return a.vpd_mv < b.vpd_mv;
  return scheme_less(a.scheme, b.scheme);
}

double reduction(double optimized, double baseline) {
  return baseline > 0.0 ? 1.0 - optimized / baseline : 0.0;
}

namespace {

// Runs fn(i) for i in [0, n) on up to `jobs` threads, contiguous chunks.
template <typename Fn>
void parallel_for(std::size_t n, int jobs, Fn&& fn) {
  const std::size_t workers = std::clamp<std::size_t>(jobs < 1 ? 1 : jobs, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t t = 0; t < workers; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

SchedulingDecision optimize(const GemmWorkload& w, const HardwareConfig& h,
                            const MemorySpec& spec, const OptimizerOptions& opts) {
  const std::vector<TilingScheme> schemes = enumerate_tilings(w, h);
  const std::size_t np = spec.points.size();
  const std::int64_t cap = opts.max_candidates.value_or(h.max_candidates);
  const auto candidates = static_cast<std::int64_t>(schemes.size() * np);
  if (candidates > cap) {
    throw CandidateCapExceeded("'" + w.label + "' has " + std::to_string(candidates) +
                               " candidates, above the cap of " + std::to_string(cap));
  }

  const EnergyOptions tuned{opts.policy, opts.sense_amp_gating};
  const EnergyOptions fixed{RefreshPolicy::Ceil, false};

  std::vector<EnergyReport> sweep(schemes.size() * np);
  std::vector<EnergyReport> base(schemes.size());
  parallel_for(schemes.size(), opts.jobs, [&](std::size_t i) {
    const LifetimeProfile prof = compute_lifetimes(schemes[i], h);
    for (std::size_t j = 0; j < np; ++j) {
      sweep[i * np + j] = estimate_energy(schemes[i], prof, spec.points[j], w, h, spec, tuned);
    }
    base[i] = estimate_energy(schemes[i], prof, spec.points.front(), w, h, spec, fixed);
  });

  SchedulingDecision d;
  d.workload = w;
  d.policy = opts.policy;
  d.candidates = candidates;

  // Sequential reduction under a total order, so the result does not depend
  // on how candidates were partitioned.
  const EnergyReport* best = &sweep.front();
  for (const auto& r : sweep) {
    if (candidate_better(r, *best)) best = &r;
  }
  const EnergyReport* best_base = &base.front();
  for (const auto& r : base) {
    if (candidate_better(r, *best_base)) best_base = &r;
  }

  d.report = *best;
  d.baseline = *best_base;
  d.scheme = best->scheme;
  d.vpd_mv = best->vpd_mv;
  const VpdOperatingPoint& pt = spec.point(d.vpd_mv);
  d.reference_voltage_mv = reference_voltage(pt, linear_swing_model(h.vdd_mv, h.swing_beta));
  d.planned_weight_retention_s = pt.retention_s;
  d.planned_buffer_retention_s = spec.buffer_retention_s;
  if (opts.keep_sweep) d.sweep = std::move(sweep);
  return d;
}

}  // namespace retpim
