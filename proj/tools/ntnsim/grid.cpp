#include "ntnsim/grid.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <mutex>
#include <thread>

#include "ntn/metrics/event_log.hpp"
#include "ntn/metrics/export.hpp"
#include "ntn/scenario/build.hpp"

namespace ntnsim {

namespace fs = std::filesystem;

std::string run_stem(const RunKey& key) {
  return fmt::format("{}-{}-{}", ntn::entities::to_string(key.protocol), key.ue_count, key.seed);
}

RunOutput run_one(const ntn::scenario::ScenarioConfig& base, const RunKey& key, const GridOptions& opts) {
  RunOutput out{key, std::nullopt, {}, 0.0};
  const auto started = std::chrono::steady_clock::now();
  try {
    auto cfg = base;
    cfg.protocol = key.protocol;
    cfg.ue_count = key.ue_count;
    cfg.seed = key.seed;
    auto sim = ntn::scenario::build_simulation(cfg);

    std::ofstream events;
    std::optional<ntn::metrics::EventLogWriter> writer;
    if (opts.out && opts.event_log) {
      const auto path = *opts.out / "events" / (run_stem(key) + ".csv");
      fs::create_directories(path.parent_path());
      events.open(path, std::ios::trunc);
      if (!events) throw std::runtime_error(path.string() + ": cannot open for writing");
      const auto& s = sim->setup();
      writer.emplace(events, ntn::metrics::LedgerLabels{std::string(ntn::entities::to_string(s.protocol)), s.seed,
                                                        static_cast<std::uint32_t>(s.ues.size()),
                                                        static_cast<std::uint32_t>(s.satellites.size()), s.t_end,
                                                        s.bucket});
      sim->add_record_sink([&writer](const ntn::metrics::MetricRecord& r) { writer->write(r); });
    }

    const auto result = sim->run();
    out.report = ntn::metrics::make_report(result.ledger);
    if (opts.out) {
      for (std::uint32_t s = 0; s < result.ledger.labels().satellites; ++s) {
        ntn::metrics::write_file(*opts.out / "timeseries" / ntn::metrics::timeseries_name(result.ledger, s),
                                 ntn::metrics::timeseries_csv(result.ledger, s));
      }
    }
  } catch (const std::exception& e) {
    out.report.reset();
    out.error = e.what();
  }
  out.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return out;
}

std::vector<RunOutput> run_grid(const ntn::scenario::ScenarioConfig& base, std::vector<RunKey> keys,
                                const GridOptions& opts) {
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  std::vector<std::optional<RunOutput>> slots(keys.size());
  std::atomic<std::size_t> next{0};
  std::mutex done_mutex;

  const auto worker = [&] {
    for (std::size_t i = next++; i < keys.size(); i = next++) {
      slots[i] = run_one(base, keys[i], opts);
      if (opts.on_done) {
        std::lock_guard lock(done_mutex);
        opts.on_done(*slots[i]);
      }
    }
  };
  const unsigned jobs = std::clamp<unsigned>(opts.jobs, 1, static_cast<unsigned>(std::max<std::size_t>(keys.size(), 1)));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }

  std::vector<RunOutput> results;
  results.reserve(slots.size());
  for (auto& s : slots) results.push_back(std::move(*s));
  return results;
}

}  // namespace ntnsim
