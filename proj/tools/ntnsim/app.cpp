#include "ntnsim/app.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include "ntn/geometry.hpp"
#include "ntn/metrics/export.hpp"
#include "ntnsim/grid.hpp"

namespace ntnsim {
namespace {

namespace fs = std::filesystem;
using ntn::entities::Protocol;
using ntn::scenario::ConfigError;
using ntn::scenario::ScenarioConfig;

struct ScenarioFlags {
  std::string config;
  std::vector<std::string> sets;
  std::optional<double> t_end_ms;
  std::string out;
  bool event_log = false;
};

void add_scenario_flags(CLI::App& cmd, ScenarioFlags& f) {
  cmd.add_option("--config", f.config, "Scenario file")->check(CLI::ExistingFile);
  cmd.add_option("--set", f.sets, "Override one key, key=value (repeatable)");
  cmd.add_option("--t-end", f.t_end_ms, "Simulated horizon in ms (default: derived from geometry)")
      ->check(CLI::PositiveNumber);
  cmd.add_option("--out", f.out, "Output directory");
  cmd.add_flag("--event-log", f.event_log, "Also write the raw event log of each run");
}

/// defaults < file < environment < flags
ScenarioConfig resolve_config(const ScenarioFlags& f, const EnvLookup& env,
                              const std::function<void(ScenarioConfig&)>& explicit_flags) {
  ScenarioConfig cfg;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw ConfigError({"cannot open config file '" + f.config + "'"});
    std::stringstream text;
    text << in.rdbuf();
    ntn::scenario::apply_document(cfg, text.str());
  }
  ntn::scenario::apply_env(cfg, env);
  std::vector<std::string> errors;
  for (const auto& kv : f.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      errors.push_back("--set expects key=value, got '" + kv + "'");
      continue;
    }
    try {
      ntn::scenario::set_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    } catch (const ConfigError& e) {
      errors.insert(errors.end(), e.errors().begin(), e.errors().end());
    }
  }
  if (!errors.empty()) throw ConfigError(errors);
  if (f.t_end_ms) cfg.t_end_ms = *f.t_end_ms;
  explicit_flags(cfg);
  ntn::scenario::validate(cfg);
  return cfg;
}

void log_run(std::ostream& err, const RunOutput& r) {
  if (r.report) {
    fmt::print(err, "[ntnsim] {} done in {:.1f} s: success {:.2f}%, {} messages, drop {:.2f}%\n", run_stem(r.key),
               r.wall_s, r.report->success_rate, r.report->total_messages, r.report->drop_rate);
  } else {
    fmt::print(err, "[ntnsim] {} failed: {}\n", run_stem(r.key), r.error);
  }
}

std::vector<ntn::metrics::RunReport> completed(const std::vector<RunOutput>& runs) {
  std::vector<ntn::metrics::RunReport> out;
  for (const auto& r : runs) {
    if (r.report) out.push_back(*r.report);
  }
  return out;
}

std::string failures_csv(const std::vector<RunOutput>& runs) {
  std::string out = "protocol,ue_count,seed,error\n";
  for (const auto& r : runs) {
    if (r.report) continue;
    out += fmt::format("{},{},{},{}\n", ntn::entities::to_string(r.key.protocol), r.key.ue_count, r.key.seed,
                       ntn::metrics::csv_field(r.error));
  }
  return out;
}

bool all_ok(const std::vector<RunOutput>& runs) {
  return std::all_of(runs.begin(), runs.end(), [](const RunOutput& r) { return r.report.has_value(); });
}

std::uint64_t parse_positive(std::string_view s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v == 0) {
    throw std::invalid_argument("expected a positive integer, got '" + std::string(s) + "'");
  }
  return v;
}

std::vector<Protocol> parse_protocols(const std::string& spec) {
  std::vector<Protocol> out;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto p = ntn::entities::parse_protocol(item);
    if (!p) throw std::invalid_argument("unknown protocol '" + item + "'");
    out.push_back(*p);
  }
  if (out.empty()) throw std::invalid_argument("no protocol given");
  return out;
}

void print_analysis(std::ostream& out, double radius, double speed, double ues, double dt) {
  const double a_circle = std::numbers::pi * radius * radius;
  const double moved = speed * dt;
  const double a_intersect = moved >= 2 * radius ? 0.0 : ntn::geometry::intersect_area(radius, moved);
  const double a_handoff = a_circle - a_intersect;
  const double n_handoff = ntn::geometry::expected_handoffs({ues, radius, speed, dt});
  fmt::print(out, "A_circle_km2 {:.6f}\n", a_circle);
  fmt::print(out, "A_intersect_km2 {:.6f}\n", a_intersect);
  fmt::print(out, "A_hand-off_km2 {:.6f}\n", a_handoff);
  fmt::print(out, "density_per_km2 {:.6f}\n", ues / a_circle);
  fmt::print(out, "N_hand-off {:.1f}\n", n_handoff);
}

}  // namespace

std::vector<std::uint64_t> parse_count_list(const std::string& spec) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto c1 = item.find(':');
    if (c1 == std::string::npos) {
      out.push_back(parse_positive(item));
      continue;
    }
    const auto c2 = item.find(':', c1 + 1);
    if (c2 == std::string::npos) throw std::invalid_argument("range must be start:stop:step, got '" + item + "'");
    const auto start = parse_positive(std::string_view(item).substr(0, c1));
    const auto stop = parse_positive(std::string_view(item).substr(c1 + 1, c2 - c1 - 1));
    const auto step = parse_positive(std::string_view(item).substr(c2 + 1));
    if (stop < start) throw std::invalid_argument("range stop is below start in '" + item + "'");
    for (auto v = start; v <= stop; v += step) out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const EnvLookup& env) {
  CLI::App app{"Discrete-event simulator for satellite group handover"};
  app.name("ntnsim");
  app.require_subcommand(1, 1);
  app.fallthrough();
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Suppress progress on standard error");

  // run
  auto* run = app.add_subcommand("run", "Run one scenario");
  ScenarioFlags run_flags;
  std::optional<std::string> run_protocol;
  std::optional<std::int64_t> run_ues;
  std::optional<std::uint64_t> run_seed;
  add_scenario_flags(*run, run_flags);
  run->add_option("--protocol", run_protocol, "ho or gho")->check(CLI::IsMember({"ho", "gho"}));
  run->add_option("--ues", run_ues, "Number of UEs")->check(CLI::PositiveNumber);
  run->add_option("--seed", run_seed, "Random seed");

  // compare
  auto* compare = app.add_subcommand("compare", "Sweep protocols, UE counts and seeds");
  ScenarioFlags cmp_flags;
  std::string cmp_ues = "10000:70000:10000";
  std::string cmp_seeds = "10,20,30,40,50";
  std::string cmp_protocols = "ho,gho";
  unsigned jobs = 1;
  add_scenario_flags(*compare, cmp_flags);
  compare->add_option("--ues", cmp_ues, "UE counts: list and/or start:stop:step ranges")->capture_default_str();
  compare->add_option("--seeds", cmp_seeds, "Seeds, comma separated")->capture_default_str();
  compare->add_option("--protocols", cmp_protocols, "Protocols, comma separated")->capture_default_str();
  compare->add_option("--jobs", jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Evaluate the handover-load formulas");
  double radius = 0.0;
  double speed = 0.0;
  double an_ues = 0.0;
  double dt = 0.0;
  analyze->add_option("--radius", radius, "Cell radius in km")->required()->check(CLI::PositiveNumber);
  analyze->add_option("--speed", speed, "Satellite ground speed in km/s")->required()->check(CLI::NonNegativeNumber);
  analyze->add_option("--ues", an_ues, "UEs in the cell")->required()->check(CLI::PositiveNumber);
  analyze->add_option("--dt", dt, "Window in seconds")->required()->check(CLI::NonNegativeNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? Ok : Usage;
  }

  const auto log = [&](const RunOutput& r) {
    if (!quiet) log_run(err, r);
  };

  if (analyze->parsed()) {
    try {
      print_analysis(out, radius, speed, an_ues, dt);
    } catch (const std::exception& e) {
      fmt::print(err, "ntnsim analyze: {}\n", e.what());
      return Usage;
    }
    return Ok;
  }

  if (run->parsed()) {
    ScenarioConfig cfg;
    try {
      cfg = resolve_config(run_flags, env, [&](ScenarioConfig& c) {
        if (run_protocol) c.protocol = *ntn::entities::parse_protocol(*run_protocol);
        if (run_ues) c.ue_count = *run_ues;
        if (run_seed) c.seed = *run_seed;
      });
    } catch (const ConfigError& e) {
      fmt::print(err, "ntnsim run: invalid configuration\n{}\n", e.what());
      return Usage;
    }
    GridOptions opts;
    if (!run_flags.out.empty()) opts.out = fs::path(run_flags.out);
    opts.event_log = run_flags.event_log;
    const RunKey key{cfg.protocol, static_cast<std::uint32_t>(cfg.ue_count), cfg.seed};
    const auto r = run_one(cfg, key, opts);
    log(r);
    if (!r.report) return RunFailed;
    const std::vector<ntn::metrics::RunReport> reports{*r.report};
    const auto csv = ntn::metrics::summary_csv(reports);
    try {
      if (opts.out) {
        ntn::metrics::write_file(*opts.out / "summary.csv", csv);
        ntn::metrics::write_file(*opts.out / "summary.json", ntn::metrics::summary_json(reports));
      }
    } catch (const std::exception& e) {
      fmt::print(err, "ntnsim run: {}\n", e.what());
      return RunFailed;
    }
    out << csv;
    return Ok;
  }

  // compare
  ScenarioConfig cfg;
  std::vector<RunKey> keys;
  try {
    cfg = resolve_config(cmp_flags, env, [](ScenarioConfig&) {});
    const auto counts = parse_count_list(cmp_ues);
    const auto seeds = parse_count_list(cmp_seeds);
    for (auto p : parse_protocols(cmp_protocols)) {
      for (auto n : counts) {
        if (n > std::numeric_limits<std::uint32_t>::max()) throw std::invalid_argument("UE count too large");
        for (auto s : seeds) keys.push_back({p, static_cast<std::uint32_t>(n), s});
      }
    }
  } catch (const ConfigError& e) {
    fmt::print(err, "ntnsim compare: invalid configuration\n{}\n", e.what());
    return Usage;
  } catch (const std::invalid_argument& e) {
    fmt::print(err, "ntnsim compare: {}\n", e.what());
    return Usage;
  }

  GridOptions opts;
  if (!cmp_flags.out.empty()) opts.out = fs::path(cmp_flags.out);
  opts.event_log = cmp_flags.event_log;
  opts.jobs = jobs;
  opts.on_done = log;
  const auto runs = run_grid(cfg, keys, opts);
  const auto reports = completed(runs);
  const auto rows = ntn::metrics::aggregate(reports);
  const auto aggregate = ntn::metrics::aggregate_csv(rows);
  try {
    if (opts.out) {
      ntn::metrics::write_file(*opts.out / "summary.csv", ntn::metrics::summary_csv(reports));
      ntn::metrics::write_file(*opts.out / "summary.json", ntn::metrics::summary_json(reports));
      ntn::metrics::write_file(*opts.out / "aggregate.csv", aggregate);
      ntn::metrics::write_file(*opts.out / "aggregate.json", ntn::metrics::aggregate_json(rows));
      if (!all_ok(runs)) ntn::metrics::write_file(*opts.out / "failures.csv", failures_csv(runs));
    }
  } catch (const std::exception& e) {
    fmt::print(err, "ntnsim compare: {}\n", e.what());
    return RunFailed;
  }
  out << aggregate;
  return all_ok(runs) ? Ok : RunFailed;
}

}  // namespace ntnsim
