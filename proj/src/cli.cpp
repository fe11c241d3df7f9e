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

#include "retpim/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "retpim/config.hpp"
#include "retpim/funcsim.hpp"
#include "retpim/optimizer.hpp"
#include "retpim/report.hpp"
#include "retpim/validation.hpp"

namespace fs = std::filesystem;

namespace retpim {

namespace {

struct Args {
  std::string config;
  std::string out = ".";
  std::string policy = "span";
  std::uint64_t seed = 42;
  std::int64_t cases = 1000;
  std::optional<std::int64_t> max_candidates;
  int jobs = 1;
  bool trace = false;
};

std::string command_line(int argc, const char* const* argv) {
  std::string s;
  for (int i = 1; i < argc; ++i) {
    if (i > 1) s += ' ';
    s += argv[i];
  }
  return s;
}

void write_file(const fs::path& p, const std::string& body) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << body;
}

int cmd_explore(const Args& a, const std::string& cmdline, std::ostream& out, std::ostream& err) {
  const Config cfg = load_config_file(a.config);
  OptimizerOptions oo;
  oo.policy = parse_refresh_policy(a.policy);
  oo.jobs = a.jobs;
  oo.max_candidates = a.max_candidates;

  std::vector<SchedulingDecision> decisions;
  for (const auto& w : cfg.workloads) {
    try {
      decisions.push_back(optimize(w, cfg.hardware, cfg.memory_spec, oo));
    } catch (const InfeasibleHardware& e) {
      err << "error: " << e.what() << '\n';
      return kExitInfeasible;
    } catch (const CandidateCapExceeded& e) {
      err << "error: " << e.what() << '\n';
      return kExitCandidateCap;
    }
  }

  fs::create_directories(a.out);
  const fs::path dir(a.out);

  nlohmann::json dj{{"policy", a.policy}, {"decisions", nlohmann::json::array()}};
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    dj["decisions"].push_back(decision_to_json(i, decisions[i]));
  }
  write_file(dir / "decision.json", dj.dump(2) + "\n");

  std::ostringstream sweep;
  write_sweep_csv(sweep, decisions);
  write_file(dir / "sweep.csv", sweep.str());

  write_file(dir / "manifest.json",
             manifest_json(cfg, cmdline, utc_timestamp(), decisions).dump(2) + "\n");

  if (a.trace) {
    std::ofstream tf(dir / "trace.ndjson");
    for (std::size_t i = 0; i < decisions.size(); ++i) {
      SimOptions so;
      so.record_events = true;
      try {
        const SimTrace t = simulate(decisions[i], cfg.workloads[i], cfg.hardware, cfg.memory_spec, so);
        write_trace_ndjson(tf, t, cfg.hardware.clock_hz);
      } catch (const IterationGuardExceeded& e) {
        err << "note: no trace for workload " << i << ": " << e.what() << '\n';
      }
    }
  }

  for (std::size_t i = 0; i < decisions.size(); ++i) {
    const auto& d = decisions[i];
    out << fmt::format("[{}] {}: {} @ {} mV  e_total {:.6g} (baseline {:.6g}, -{:.2f}%)\n", i,
                       d.workload.label.empty() ? "-" : d.workload.label, d.scheme.name(),
                       d.vpd_mv, d.report.e_total, d.baseline.e_total,
                       100.0 * reduction(d.report.e_total, d.baseline.e_total));
  }
  out << "wrote " << (dir / "decision.json").string() << ", sweep.csv, manifest.json\n";
  return kExitOk;
}

int cmd_validate(const Args& a, std::ostream& out) {
  const Config cfg = load_config_file(a.config);
  ValidationOptions vo;
  vo.seed = a.seed;
  vo.cases = a.cases;
  vo.policy = parse_refresh_policy(a.policy);

  bool ok = true;
  for (const SuiteResult& r :
       {validate_refresh_model(vo), validate_lifetimes(vo), validate_policy_boundary(vo),
        validate_safety(cfg, vo)}) {
    out << fmt::format("{:<18} {:>6} passed {:>4} failed  {}\n", r.name, r.passed, r.failed,
                       r.failed == 0 ? "PASS" : "FAIL");
    for (const auto& f : r.failures) out << "    " << f << '\n';
    ok = ok && r.failed == 0;
  }
  return ok ? kExitOk : kExitOracleMismatch;
}

int cmd_breakdown(const Args& a, std::ostream& out) {
  const Config cfg = load_config_file(a.config);
  fs::create_directories(a.out);
  std::ostringstream body;
  write_breakdown_csv(body, cfg.memory_spec, cfg.hardware);
  const fs::path p = fs::path(a.out) / "breakdown.csv";
  write_file(p, body.str());
  out << "wrote " << p.string() << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Retention-aware energy exploration for eDRAM processing-in-memory"};
  app.require_subcommand(1);
  Args a;

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", a.config, "JSON configuration")->required();
  };
  auto add_policy = [&](CLI::App* sub) {
    sub->add_option("--policy", a.policy, "refresh policy")
        ->check(CLI::IsMember({"span", "ceil"}));
  };

  auto* explore = app.add_subcommand("explore", "search tilings and VPD points per workload");
  add_config(explore);
  explore->add_option("--out", a.out, "output directory")->required();
  add_policy(explore);
  explore->add_option("--max-candidates", a.max_candidates, "candidate cap per workload")
      ->check(CLI::PositiveNumber);
  explore->add_option("--jobs", a.jobs, "worker threads")->check(CLI::PositiveNumber);
  explore->add_flag("--trace", a.trace, "also write trace.ndjson from the retention simulator");

  auto* validate = app.add_subcommand("validate", "run the oracle suites");
  add_config(validate);
  validate->add_option("--seed", a.seed, "PRNG seed");
  validate->add_option("--cases", a.cases, "random cases per suite")->check(CLI::PositiveNumber);
  add_policy(validate);

  auto* breakdown = app.add_subcommand("breakdown", "per-VPD access energy breakdown");
  add_config(breakdown);
  breakdown->add_option("--out", a.out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*explore) return cmd_explore(a, command_line(argc, argv), out, err);
    if (*validate) return cmd_validate(a, out);
    if (*breakdown) return cmd_breakdown(a, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitUsage;
}

}  // namespace retpim
