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

#include "retpim/report.hpp"

#include <chrono>
#include <ctime>

#include <fmt/format.h>
#include <openssl/evp.h>

namespace retpim {

namespace {

std::string real(double v) { return fmt::format("{:.9g}", v); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string sweep_csv_header() {
  return "workload,label,order,tm,tk,tn,gm,gk,gn,cycles_per_tile,vpd_mv,policy,gating,"
         "e_total,e_pim,e_buffer,e_sched,pim_access,pim_pu,pim_refresh,buffer_access,"
         "buffer_refresh,macro_energy,p_n,b_n,refresh_input,refresh_weight,refresh_output,"
         "weight_refresh_rows";
}

std::string sweep_csv_row(std::size_t workload_index, const std::string& label,
                          const EnergyReport& r) {
  const auto& s = r.scheme;
  return fmt::format(
      "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
      workload_index, csv_field(label), s.order.name(), s.shape.tm, s.shape.tk, s.shape.tn,
      s.trips.gm, s.trips.gk, s.trips.gn, s.cycles_per_tile, real(r.vpd_mv), to_string(r.policy),
      r.sense_amp_gating ? 1 : 0, real(r.e_total), real(r.e_pim), real(r.e_buffer),
      real(r.e_sched), real(r.pim.access), real(r.pim.pu), real(r.pim.refresh),
      real(r.buffer.access), real(r.buffer.refresh), real(r.macro_energy()), r.p_n, real(r.b_n),
      r.refreshes_per_tile[0], r.refreshes_per_tile[1], r.refreshes_per_tile[2],
      r.weight_refresh_rows);
}

void write_sweep_csv(std::ostream& os, const std::vector<SchedulingDecision>& decisions) {
  os << sweep_csv_header() << '\n';
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    for (const auto& r : decisions[i].sweep) {
      os << sweep_csv_row(i, decisions[i].workload.label, r) << '\n';
    }
  }
}

nlohmann::json report_to_json(const EnergyReport& r) {
  const auto& s = r.scheme;
  return {{"order", s.order.name()},
          {"tile", {{"tm", s.shape.tm}, {"tk", s.shape.tk}, {"tn", s.shape.tn}}},
          {"trip_counts", {{"gm", s.trips.gm}, {"gk", s.trips.gk}, {"gn", s.trips.gn}}},
          {"cycles_per_tile", s.cycles_per_tile},
          {"vpd_mv", r.vpd_mv},
          {"policy", to_string(r.policy)},
          {"sense_amp_gating", r.sense_amp_gating},
          {"e_total", r.e_total},
          {"e_pim", r.e_pim},
          {"e_buffer", r.e_buffer},
          {"e_sched", r.e_sched},
          {"pim", {{"access", r.pim.access}, {"pu", r.pim.pu}, {"refresh", r.pim.refresh}}},
          {"buffer", {{"access", r.buffer.access}, {"refresh", r.buffer.refresh}}},
          {"macro_energy", r.macro_energy()},
          {"counts",
           {{"p_n", r.p_n},
            {"b_n", r.b_n},
            {"refreshes_per_tile",
             {{"input", r.refreshes_per_tile[0]},
              {"weight", r.refreshes_per_tile[1]},
              {"output", r.refreshes_per_tile[2]}}},
            {"weight_refresh_rows", r.weight_refresh_rows}}}};
}

nlohmann::json decision_to_json(std::size_t workload_index, const SchedulingDecision& d) {
  return {{"workload", workload_index},
          {"label", d.workload.label},
          {"dims", {{"m", d.workload.m_dim}, {"k", d.workload.k_dim}, {"n", d.workload.n_dim}}},
          {"vpd_mv", d.vpd_mv},
          {"reference_voltage_mv", d.reference_voltage_mv},
          {"policy", to_string(d.policy)},
          {"candidates", d.candidates},
          {"chosen", report_to_json(d.report)},
          {"chosen_csv_row", sweep_csv_row(workload_index, d.workload.label, d.report)},
          {"baseline", report_to_json(d.baseline)},
          {"reduction",
           {{"e_total", reduction(d.report.e_total, d.baseline.e_total)},
            {"macro_energy", reduction(d.report.macro_energy(), d.baseline.macro_energy())}}}};
}

void write_breakdown_csv(std::ostream& os, const MemorySpec& spec, const HardwareConfig& h) {
  os << "vpd_mv,access_energy,share_rwl_rbl_swing,share_pulldown_driver,share_sense_amp,"
        "share_other,retention_s,write_energy,refresh_energy,access_energy_configured\n";
  for (const auto& p : spec.points) {
    const auto& c = p.component_shares;
    os << fmt::format("{},{},{},{},{},{},{},{},{},{}\n", real(p.vpd_mv), real(p.access_energy),
                      real(c.rwl_rbl_swing), real(c.pulldown_driver), real(c.sense_amp),
                      real(c.other), real(p.retention_s), real(p.write_energy),
                      real(p.refresh_energy), real(adapt_to_geometry(p, spec, h).access_energy));
  }
}

std::string config_digest(const Config& c) {
  const std::string canon = serialize(c).dump();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(canon.data(), canon.size(), md, &len, EVP_sha256(), nullptr);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
  return hex;
}

nlohmann::json manifest_json(const Config& c, const std::string& command,
                             const std::string& timestamp,
                             const std::vector<SchedulingDecision>& decisions) {
  nlohmann::json summaries = nlohmann::json::array();
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    const auto& d = decisions[i];
    summaries.push_back({{"workload", i},
                         {"label", d.workload.label},
                         {"scheme", d.scheme.name()},
                         {"vpd_mv", d.vpd_mv},
                         {"e_total", d.report.e_total},
                         {"baseline_e_total", d.baseline.e_total}});
  }
  return {{"tool", "retpim"},
          {"version", kToolVersion},
          {"config_digest", config_digest(c)},
          {"command", command},
          {"timestamp", timestamp},
          {"decisions", summaries}};
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace retpim
