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

#include "retpim/validation.hpp"

#include <cmath>

#include <fmt/format.h>

#include "retpim/funcsim.hpp"
#include "retpim/lifetime.hpp"
#include "retpim/optimizer.hpp"
#include "retpim/rng.hpp"

namespace retpim {

void SuiteResult::check(bool ok, const std::string& what) {
  if (ok) {
    ++passed;
    return;
  }
  ++failed;
  if (failures.size() < 10) failures.push_back(what);
}

namespace {

// Retention on a 2^-30 s grid so that integer multiples are exact doubles.
double dyadic_retention(Rng& rng) { return static_cast<double>(rng.integer(1000, 100000)) * 0x1p-30; }

}  // namespace

SuiteResult validate_refresh_model(const ValidationOptions& opts) {
  SuiteResult res;
  res.name = "refresh-model";
  Rng rng(opts.seed);
  for (std::int64_t i = 0; i < opts.cases; ++i) {
    double retention = 0.0;
    double lifetime = 0.0;
    if (i % 10 == 9) {
      retention = dyadic_retention(rng);
      lifetime = static_cast<double>(rng.integer(0, 40)) * retention;
    } else {
      retention = rng.uniform(1e-6, 1e-4);
      lifetime = retention * rng.uniform(0.0, 40.0);
    }
    for (RefreshPolicy p : {RefreshPolicy::Span, RefreshPolicy::Ceil}) {
      const auto analytic = refresh_count(lifetime, retention, p);
      const auto oracle = refresh_oracle(lifetime, retention, p);
      res.check(analytic == oracle,
                fmt::format("L={:.17g} R={:.17g} {}: analytic {} oracle {}", lifetime, retention,
                            to_string(p), analytic, oracle));
    }
  }
  return res;
}

SuiteResult validate_lifetimes(const ValidationOptions& opts) {
  SuiteResult res;
  res.name = "lifetime";
  Rng rng(opts.seed ^ 0x9e3779b97f4a7c15ULL);
  const auto& orders = all_loop_orders();
  for (std::int64_t i = 0; i < opts.cases; ++i) {
    TilingScheme s;
    s.order = orders[static_cast<std::size_t>(rng.integer(0, 5))];
    s.trips = {rng.integer(1, 6), rng.integer(1, 6), rng.integer(1, 6)};
    const OracleSpans measured = lifetime_oracle(s);
    for (Operand op : kOperands) {
      const auto closed = tile_span(s.order, s.trips, op);
      const int o = static_cast<int>(op);
      res.check(closed == measured.max_span[o] && closed == measured.min_span[o],
                fmt::format("{} G=({},{},{}) {}: closed {} measured [{}, {}]", s.order.name(),
                            s.trips.gm, s.trips.gk, s.trips.gn, to_string(op), closed,
                            measured.min_span[o], measured.max_span[o]));
    }
  }
  return res;
}

SuiteResult validate_safety(const Config& config, const ValidationOptions& opts) {
  SuiteResult res;
  res.name = "retention-safety";
  Rng rng(opts.seed + 1);
  OptimizerOptions oo;
  oo.policy = opts.policy;
  oo.keep_sweep = false;

  auto run = [&](const GemmWorkload& w) {
    SchedulingDecision d;
    try {
      d = optimize(w, config.hardware, config.memory_spec, oo);
    } catch (const InfeasibleHardware&) {
      return;
    }
    if (d.scheme.trips.total() > kDefaultIterationGuard || d.report.p_n > 5'000'000) return;
    const SimTrace t = simulate(d, w, config.hardware, config.memory_spec);
    const std::string tag = fmt::format("{}x{}x{} {} @{}mV", w.m_dim, w.k_dim, w.n_dim,
                                        d.scheme.name(), d.vpd_mv);
    res.check(t.retention_safe(), tag + fmt::format(": {} violations", t.violation_count));
    res.check(t.pim_reads == d.report.p_n,
              tag + fmt::format(": simulated reads {} vs p_n {}", t.pim_reads, d.report.p_n));
  };

  for (const auto& w : config.workloads) run(w);
  const std::int64_t n = std::max<std::int64_t>(1, opts.cases / 10);
  for (std::int64_t i = 0; i < n; ++i) {
    GemmWorkload w;
    w.m_dim = rng.integer(1, 8);
    w.k_dim = rng.integer(1, 8);
    w.n_dim = rng.integer(1, 8);
    w.input_bits = static_cast<int>(rng.integer(1, 8));
    w.weight_bits = 8;
    w.input_bit_sparsity = rng.uniform();
    w.label = "random";
    run(w);
  }
  return res;
}

SuiteResult validate_policy_boundary(const ValidationOptions& opts) {
  SuiteResult res;
  res.name = "policy-boundary";
  Rng rng(opts.seed + 2);
  for (std::int64_t k = 1; k <= 20; ++k) {
    const double retention = dyadic_retention(rng);
    const double lifetime = static_cast<double>(k) * retention;
    const auto span = refresh_count(lifetime, retention, RefreshPolicy::Span);
    const auto ceil = refresh_count(lifetime, retention, RefreshPolicy::Ceil);
    res.check(ceil - span == 1 && span == k - 1,
              fmt::format("L={}R: ceil {} span {}", k, ceil, span));
  }
  return res;
}

}  // namespace retpim
