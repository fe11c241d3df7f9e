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
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "retpim/config.hpp"

using namespace retpim;
using nlohmann::json;

namespace {

json base_doc() {
  return json::parse(R"({
    "workloads": [{"m_dim": 64, "k_dim": 32, "n_dim": 16, "label": "g0"}],
    "hardware": {"subarray_rows": 32, "subarray_cols": 512, "subarrays_per_bank": 2,
                 "num_banks": 4, "buffer_bytes": 61440, "macro_bytes": 16384,
                 "clock_hz": 2e8},
    "memory_spec": "default"
  })");
}

std::string error_path(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("parses the reference macro") {
  const Config c = parse_config(base_doc());
  REQUIRE(c.workloads.size() == 1);
  CHECK(c.workloads[0].m_dim == 64);
  CHECK(c.workloads[0].input_bits == 8);
  CHECK(c.workloads[0].label == "g0");
  CHECK(c.hardware.macro_bytes == 16384);
  CHECK(c.hardware.num_banks == 4);
  CHECK(c.hardware.row_bits() == 4096);
  CHECK(c.hardware.processing_type == ProcessingType::BitParallel);
  CHECK(c.memory_spec == default_memory_spec());
}

TEST_CASE("empty workload list is valid") {
  json d = base_doc();
  d["workloads"] = json::array();
  CHECK(parse_config(d).workloads.empty());
}

TEST_CASE("errors name the offending field") {
  json d = base_doc();
  d["hardware"]["clock_hz"] = 0;
  CHECK(error_path(d) == "hardware.clock_hz");

  d = base_doc();
  d["hardware"]["macro_bytes"] = 8192;
  CHECK(error_path(d) == "hardware.macro_bytes");

  d = base_doc();
  d["workloads"][0]["k_dim"] = 0;
  CHECK(error_path(d) == "workloads[0].k_dim");

  d = base_doc();
  d["workloads"][0]["colour"] = 1;
  CHECK(error_path(d) == "workloads[0].colour");

  d = base_doc();
  d["hardware"]["scheduler_overhead_fraction"] = 0.05;
  CHECK(error_path(d) == "hardware.scheduler_overhead_fraction");

  CHECK_THROWS_AS(parse_config_text("{ not json"), ConfigError);
}

TEST_CASE("non-monotone retention is rejected") {
  json d = base_doc();
  d["memory_spec"] = to_json(default_memory_spec());
  d["memory_spec"]["points"][2]["retention_s"] = 1.0;
  CHECK(error_path(d) == "memory_spec.points[2].retention_s");
}

TEST_CASE("shares must sum to one") {
  json d = base_doc();
  d["memory_spec"] = to_json(default_memory_spec());
  d["memory_spec"]["points"][1]["component_shares"]["other"] = 0.5;
  CHECK(error_path(d) == "memory_spec.points[1].component_shares");
}

TEST_CASE("serialization round trips") {
  json d = base_doc();
  d["hardware"]["processing_type"] = "bit-serial";
  d["hardware"]["pu_energy"] = 0.25;
  d["hardware"]["tile_stride"] = 8;
  d["memory_spec"] = to_json(default_memory_spec());
  d["memory_spec"]["buffer_kind"] = "sram";
  const Config c = parse_config(d);
  const Config again = parse_config(serialize(c));
  CHECK(again == c);
  CHECK(serialize(again) == serialize(c));
}

TEST_CASE("default spec invariants") {
  const MemorySpec s = default_memory_spec();
  REQUIRE(s.points.size() == 5);
  CHECK_NOTHROW(validate(s));
  const double vpds[] = {0, 200, 300, 400, 500};
  for (std::size_t i = 0; i < 5; ++i) {
    const auto& p = s.points[i];
    CHECK(p.vpd_mv == vpds[i]);
    CHECK(std::abs(p.component_shares.sum() - 1.0) <= 1e-9);
    // Independent form: T(v) = 100us * 0.09^(v/500), E(v) = 0.2869^(v/500).
    CHECK(p.retention_s == doctest::Approx(100e-6 * std::pow(0.09, vpds[i] / 500)).epsilon(1e-12));
    CHECK(p.access_energy == doctest::Approx(std::pow(0.2869, vpds[i] / 500)).epsilon(1e-12));
    CHECK(p.refresh_energy == doctest::Approx(p.write_energy + p.access_energy));
    // Periphery energy does not move with the knob.
    CHECK(p.access_energy * p.component_shares.other == doctest::Approx(0.0406));
  }
  CHECK(s.point(200).retention_s == doctest::Approx(38.17e-6).epsilon(1e-3));
  CHECK(s.point(500).access_energy / s.point(0).access_energy == doctest::Approx(0.2869));
  CHECK(s.point(0).component_shares.sense_amp == doctest::Approx(0.1687));
  CHECK(s.point(500).component_shares.sense_amp == doctest::Approx(0.5014));
  CHECK(s.point(500).retention_s == doctest::Approx(9e-6));
  CHECK_THROWS_AS(s.point(250), std::out_of_range);
}
