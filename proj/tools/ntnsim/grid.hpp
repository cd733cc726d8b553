#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ntn/metrics/report.hpp"
#include "ntn/scenario/config.hpp"

namespace ntnsim {

struct RunKey {
  ntn::entities::Protocol protocol;
  std::uint32_t ue_count;
  std::uint64_t seed;

  friend auto operator<=>(const RunKey&, const RunKey&) = default;
};

struct RunOutput {
  RunKey key;
  std::optional<ntn::metrics::RunReport> report;
  /// Set when the run threw; the grid carries on.
  std::string error;
  double wall_s = 0.0;
};

struct GridOptions {
  /// Written under <out>/timeseries and, with event_log, <out>/events.
  std::optional<std::filesystem::path> out;
  bool event_log = false;
  unsigned jobs = 1;
  std::function<void(const RunOutput&)> on_done;
};

std::string run_stem(const RunKey& key);

/// Runs one scenario and writes its per-run files.
RunOutput run_one(const ntn::scenario::ScenarioConfig& base, const RunKey& key, const GridOptions& opts);

/// Runs every key on `opts.jobs` worker threads. Results come back in key
/// order regardless of completion order.
std::vector<RunOutput> run_grid(const ntn::scenario::ScenarioConfig& base, std::vector<RunKey> keys,
                                const GridOptions& opts);

}  // namespace ntnsim
