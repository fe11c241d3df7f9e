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

#include "retpim/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace retpim {

using nlohmann::json;

std::string to_string(ProcessingType t) {
  return t == ProcessingType::BitParallel ? "bit-parallel" : "bit-serial";
}

std::string to_string(BufferKind k) { return k == BufferKind::Edram ? "edram" : "sram"; }

const VpdOperatingPoint& MemorySpec::point(double vpd_mv) const {
  for (const auto& p : points) {
    if (p.vpd_mv == vpd_mv) return p;
  }
  throw std::out_of_range("no operating point at " + std::to_string(vpd_mv) + " mV");
}

// ---------------------------------------------------------------------------
// Validation

namespace {

void require(bool ok, const std::string& path, const std::string& what) {
  if (!ok) throw ConfigError(path, what);
}

}  // namespace

void validate(const GemmWorkload& w, const std::string& path) {
  require(w.m_dim >= 1, path + ".m_dim", "must be >= 1");
  require(w.k_dim >= 1, path + ".k_dim", "must be >= 1");
  require(w.n_dim >= 1, path + ".n_dim", "must be >= 1");
  require(w.input_bits >= 1, path + ".input_bits", "must be >= 1");
  require(w.weight_bits >= 1, path + ".weight_bits", "must be >= 1");
  require(w.input_bit_sparsity >= 0.0 && w.input_bit_sparsity <= 1.0,
          path + ".input_bit_sparsity", "must lie in [0, 1]");
}

void validate(const HardwareConfig& h, const std::string& path) {
  require(h.subarray_rows >= 1, path + ".subarray_rows", "must be >= 1");
  require(h.subarray_cols >= 1, path + ".subarray_cols", "must be >= 1");
  require(h.subarrays_per_bank >= 1, path + ".subarrays_per_bank", "must be >= 1");
  require(h.num_banks >= 1, path + ".num_banks", "must be >= 1");
  require(h.buffer_bytes >= 1, path + ".buffer_bytes", "must be >= 1");
  require(h.macro_bytes >= 1, path + ".macro_bytes", "must be >= 1");
  require(std::isfinite(h.clock_hz) && h.clock_hz > 0.0, path + ".clock_hz", "must be > 0");
  require(h.scheduler_overhead_fraction >= 0.0 && h.scheduler_overhead_fraction < 0.05,
          path + ".scheduler_overhead_fraction", "must lie in [0, 0.05)");
  require(h.accum_bits >= 1, path + ".accum_bits", "must be >= 1");
  require(h.tile_stride >= 0, path + ".tile_stride", "must be >= 0");
  require(!h.pu_energy || *h.pu_energy >= 0.0, path + ".pu_energy", "must be >= 0");
  require(h.vdd_mv > 0.0, path + ".vdd_mv", "must be > 0");
  require(h.swing_beta >= 0.0 && h.swing_beta <= 1.0, path + ".swing_beta", "must lie in [0, 1]");
  require(h.max_candidates >= 1, path + ".max_candidates", "must be >= 1");

  const std::int64_t bits = h.subarray_rows * h.subarray_cols * h.subarrays_per_bank * h.num_banks;
  require(bits == h.macro_bytes * 8, path + ".macro_bytes",
          "inconsistent with subarray geometry (rows*cols*subarrays*banks/8 = " +
              std::to_string(bits / 8) + " bytes)");
}

void validate(const MemorySpec& s, const std::string& path) {
  require(!s.points.empty(), path + ".points", "must contain at least one operating point");
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    const auto& p = s.points[i];
    const std::string pp = path + ".points[" + std::to_string(i) + "]";
    require(std::isfinite(p.vpd_mv) && p.vpd_mv >= 0.0, pp + ".vpd_mv", "must be >= 0");
    require(p.access_energy > 0.0, pp + ".access_energy", "must be > 0");
    require(p.retention_s > 0.0, pp + ".retention_s", "must be > 0");
    require(p.write_energy >= 0.0, pp + ".write_energy", "must be >= 0");
    require(p.refresh_energy >= 0.0, pp + ".refresh_energy", "must be >= 0");
    const auto& c = p.component_shares;
    for (double v : {c.rwl_rbl_swing, c.pulldown_driver, c.sense_amp, c.other}) {
      require(v >= 0.0 && v <= 1.0, pp + ".component_shares", "each share must lie in [0, 1]");
    }
    require(std::abs(c.sum() - 1.0) <= 1e-9, pp + ".component_shares", "shares must sum to 1");
    if (i == 0) continue;
    const auto& q = s.points[i - 1];
    require(p.vpd_mv > q.vpd_mv, pp + ".vpd_mv", "must be strictly ascending");
    require(p.access_energy < q.access_energy, pp + ".access_energy",
            "must strictly decrease with vpd_mv");
    require(p.retention_s < q.retention_s, pp + ".retention_s",
            "must strictly decrease with vpd_mv");
    require(c.sense_amp > q.component_shares.sense_amp, pp + ".component_shares.sense_amp",
            "must strictly increase with vpd_mv");
  }
  require(s.buffer_access_energy >= 0.0, path + ".buffer_access_energy", "must be >= 0");
  require(s.buffer_refresh_energy >= 0.0, path + ".buffer_refresh_energy", "must be >= 0");
  require(s.buffer_retention_s > 0.0, path + ".buffer_retention_s", "must be > 0");
  if (s.calibration) {
    require(s.calibration->row_bits >= 1, path + ".calibration.row_bits", "must be >= 1");
    require(s.calibration->subarrays >= 1, path + ".calibration.subarrays", "must be >= 1");
    require(s.calibration->bitline_rows >= 1, path + ".calibration.bitline_rows", "must be >= 1");
  }
}

// ---------------------------------------------------------------------------
// Default table

MemorySpec default_memory_spec() {
  // Endpoints: 32x512 macro breakdown at full swing, and the VPD=500 mV point
  // (access -71.31%, sense-amp share 50.14%, retention 100us -> 9us).
  constexpr double kAccessRatio = 0.2869;
  constexpr double kRetentionRatio = 0.09;
  constexpr double kRetention0 = 100e-6;
  constexpr double kSwing0 = 0.5693;
  constexpr double kPulldown0 = 0.2214;
  constexpr double kSenseAmp0 = 0.1687;
  constexpr double kSenseAmp500 = 0.5014;
  constexpr double kOther0 = 0.0406;
  constexpr double kWriteFactor = 0.6;

  MemorySpec spec;
  spec.calibration = CalibrationGeometry{4096, 8, 32};
  const double e0 = 1.0;
  const double write = kWriteFactor * e0;
  for (double v : {0.0, 200.0, 300.0, 400.0, 500.0}) {
    const double x = v / 500.0;
    VpdOperatingPoint p;
    p.vpd_mv = v;
    p.access_energy = e0 * std::pow(kAccessRatio, x);
    p.retention_s = kRetention0 * std::pow(kRetentionRatio, x);

    // Peripheral ("other") energy is VPD-independent; swing and pull-down
    // split what is left after the sense amp in their full-swing proportion.
    auto& c = p.component_shares;
    c.sense_amp = kSenseAmp0 + (kSenseAmp500 - kSenseAmp0) * x;
    c.other = kOther0 * e0 / p.access_energy;
    const double rest = 1.0 - c.sense_amp - c.other;
    c.rwl_rbl_swing = rest * kSwing0 / (kSwing0 + kPulldown0);
    c.pulldown_driver = rest - c.rwl_rbl_swing;

    p.write_energy = write;
    p.refresh_energy = write + p.access_energy;
    spec.points.push_back(p);
  }
  return spec;
}

// ---------------------------------------------------------------------------
// JSON parsing

namespace {

class Reader {
 public:
  Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_.empty() ? "$" : path_, "expected an object");
  }

  std::string at(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  bool has(const std::string& key) const {
    seen_.insert(key);
    return obj_.contains(key) && !obj_.at(key).is_null();
  }

  const json& get(const std::string& key) const {
    if (!has(key)) throw ConfigError(at(key), "missing required field");
    return obj_.at(key);
  }

  std::int64_t integer(const std::string& key) const {
    const json& v = get(key);
    if (!v.is_number_integer()) throw ConfigError(at(key), "expected an integer");
    return v.get<std::int64_t>();
  }
  std::int64_t integer(const std::string& key, std::int64_t fallback) const {
    return has(key) ? integer(key) : fallback;
  }

  double number(const std::string& key) const {
    const json& v = get(key);
    if (!v.is_number()) throw ConfigError(at(key), "expected a number");
    return v.get<double>();
  }
  double number(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  std::string string(const std::string& key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const json& v = obj_.at(key);
    if (!v.is_string()) throw ConfigError(at(key), "expected a string");
    return v.get<std::string>();
  }

  // Rejects keys that were never queried, which catches typos in documents.
  void finish() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key())) throw ConfigError(at(it.key()), "unknown field");
    }
  }

 private:
  const json& obj_;
  std::string path_;
  mutable std::set<std::string> seen_;
};

int small_int(const Reader& r, const std::string& key, int fallback) {
  const std::int64_t v = r.integer(key, fallback);
  if (v < 0 || v > 1024) throw ConfigError(r.at(key), "out of range");
  return static_cast<int>(v);
}

GemmWorkload parse_workload(const json& j, const std::string& path) {
  Reader r(j, path);
  GemmWorkload w;
  w.m_dim = r.integer("m_dim");
  w.k_dim = r.integer("k_dim");
  w.n_dim = r.integer("n_dim");
  w.input_bits = small_int(r, "input_bits", 8);
  w.weight_bits = small_int(r, "weight_bits", 8);
  w.input_bit_sparsity = r.number("input_bit_sparsity", 0.0);
  w.label = r.string("label", "");
  r.finish();
  validate(w, path);
  return w;
}

ProcessingType parse_processing_type(const Reader& r) {
  const std::string s = r.string("processing_type", "bit-parallel");
  if (s == "bit-parallel") return ProcessingType::BitParallel;
  if (s == "bit-serial") return ProcessingType::BitSerial;
  throw ConfigError(r.at("processing_type"), "expected \"bit-parallel\" or \"bit-serial\"");
}

HardwareConfig parse_hardware(const json& j, const std::string& path) {
  Reader r(j, path);
  HardwareConfig h;
  h.subarray_rows = r.integer("subarray_rows");
  h.subarray_cols = r.integer("subarray_cols");
  h.subarrays_per_bank = r.integer("subarrays_per_bank");
  h.num_banks = r.integer("num_banks");
  h.buffer_bytes = r.integer("buffer_bytes");
  h.macro_bytes = r.integer("macro_bytes");
  h.clock_hz = r.number("clock_hz");
  h.processing_type = parse_processing_type(r);
  h.scheduler_overhead_fraction = r.number("scheduler_overhead_fraction", 0.0);
  h.accum_bits = small_int(r, "accum_bits", 32);
  h.tile_stride = r.integer("tile_stride", 0);
  if (r.has("pu_energy")) h.pu_energy = r.number("pu_energy");
  h.vdd_mv = r.number("vdd_mv", 1000.0);
  h.swing_beta = r.number("swing_beta", 0.8);
  h.max_candidates = r.integer("max_candidates", 1'000'000);
  r.finish();
  validate(h, path);
  return h;
}

ComponentShares parse_shares(const json& j, const std::string& path) {
  Reader r(j, path);
  ComponentShares c;
  c.rwl_rbl_swing = r.number("rwl_rbl_swing");
  c.pulldown_driver = r.number("pulldown_driver");
  c.sense_amp = r.number("sense_amp");
  c.other = r.number("other");
  r.finish();
  return c;
}

MemorySpec parse_memory_spec(const json& j, const std::string& path) {
  if (j.is_string()) {
    if (j.get<std::string>() == "default") return default_memory_spec();
    throw ConfigError(path, "expected an object or the string \"default\"");
  }
  Reader r(j, path);
  MemorySpec s;
  const json& pts = r.get("points");
  if (!pts.is_array()) throw ConfigError(r.at("points"), "expected an array");

  // Write energy defaults to 0.6x the lowest-VPD access energy; it is a
  // write-path cost and does not move with the read-path knob.
  double base_access = 1.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::string pp = r.at("points") + "[" + std::to_string(i) + "]";
    Reader pr(pts[i], pp);
    VpdOperatingPoint p;
    p.vpd_mv = pr.number("vpd_mv");
    p.access_energy = pr.number("access_energy");
    p.component_shares = parse_shares(pr.get("component_shares"), pr.at("component_shares"));
    p.retention_s = pr.number("retention_s");
    if (i == 0) base_access = p.access_energy;
    p.write_energy = pr.number("write_energy", 0.6 * base_access);
    p.refresh_energy = pr.number("refresh_energy", p.write_energy + p.access_energy);
    pr.finish();
    s.points.push_back(p);
  }

  const std::string kind = r.string("buffer_kind", "edram");
  if (kind == "edram") {
    s.buffer_kind = BufferKind::Edram;
  } else if (kind == "sram") {
    s.buffer_kind = BufferKind::Sram;
  } else {
    throw ConfigError(r.at("buffer_kind"), "expected \"edram\" or \"sram\"");
  }
  s.buffer_access_energy = r.number("buffer_access_energy", s.buffer_access_energy);
  s.buffer_refresh_energy = r.number("buffer_refresh_energy", s.buffer_refresh_energy);
  s.buffer_retention_s = r.number("buffer_retention_s", s.buffer_retention_s);
  if (r.has("calibration")) {
    Reader cr(r.get("calibration"), r.at("calibration"));
    CalibrationGeometry g;
    g.row_bits = cr.integer("row_bits");
    g.subarrays = cr.integer("subarrays");
    if (cr.has("bitline_rows")) g.bitline_rows = cr.integer("bitline_rows");
    cr.finish();
    s.calibration = g;
  }
  r.finish();
  validate(s, path);
  return s;
}

}  // namespace

Config parse_config(const json& doc) {
  Reader r(doc, "");
  Config c;
  const json& ws = r.get("workloads");
  if (!ws.is_array()) throw ConfigError("workloads", "expected an array");
  for (std::size_t i = 0; i < ws.size(); ++i) {
    c.workloads.push_back(parse_workload(ws[i], "workloads[" + std::to_string(i) + "]"));
  }
  c.hardware = parse_hardware(r.get("hardware"), "hardware");
  c.memory_spec = parse_memory_spec(r.get("memory_spec"), "memory_spec");
  r.finish();
  return c;
}

Config parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

Config load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("$", "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

// ---------------------------------------------------------------------------
// Serialization

json to_json(const GemmWorkload& w) {
  return json{{"label", w.label},
              {"m_dim", w.m_dim},
              {"k_dim", w.k_dim},
              {"n_dim", w.n_dim},
              {"input_bits", w.input_bits},
              {"weight_bits", w.weight_bits},
              {"input_bit_sparsity", w.input_bit_sparsity}};
}

json to_json(const HardwareConfig& h) {
  json j{{"subarray_rows", h.subarray_rows},
         {"subarray_cols", h.subarray_cols},
         {"subarrays_per_bank", h.subarrays_per_bank},
         {"num_banks", h.num_banks},
         {"buffer_bytes", h.buffer_bytes},
         {"macro_bytes", h.macro_bytes},
         {"clock_hz", h.clock_hz},
         {"processing_type", to_string(h.processing_type)},
         {"scheduler_overhead_fraction", h.scheduler_overhead_fraction},
         {"accum_bits", h.accum_bits},
         {"tile_stride", h.tile_stride},
         {"vdd_mv", h.vdd_mv},
         {"swing_beta", h.swing_beta},
         {"max_candidates", h.max_candidates}};
  if (h.pu_energy) j["pu_energy"] = *h.pu_energy;
  return j;
}

json to_json(const MemorySpec& s) {
  json pts = json::array();
  for (const auto& p : s.points) {
    const auto& c = p.component_shares;
    pts.push_back({{"vpd_mv", p.vpd_mv},
                   {"access_energy", p.access_energy},
                   {"component_shares",
                    {{"rwl_rbl_swing", c.rwl_rbl_swing},
                     {"pulldown_driver", c.pulldown_driver},
                     {"sense_amp", c.sense_amp},
                     {"other", c.other}}},
                   {"retention_s", p.retention_s},
                   {"write_energy", p.write_energy},
                   {"refresh_energy", p.refresh_energy}});
  }
  json j{{"points", pts},
         {"buffer_kind", to_string(s.buffer_kind)},
         {"buffer_access_energy", s.buffer_access_energy},
         {"buffer_refresh_energy", s.buffer_refresh_energy},
         {"buffer_retention_s", s.buffer_retention_s}};
  if (s.calibration) {
    j["calibration"] = {{"row_bits", s.calibration->row_bits},
                        {"subarrays", s.calibration->subarrays},
                        {"bitline_rows", s.calibration->bitline_rows}};
  }
  return j;
}

json serialize(const Config& c) {
  json ws = json::array();
  for (const auto& w : c.workloads) ws.push_back(to_json(w));
  return json{{"workloads", ws},
              {"hardware", to_json(c.hardware)},
              {"memory_spec", to_json(c.memory_spec)}};
}

}  // namespace retpim
