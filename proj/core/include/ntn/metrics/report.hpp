#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ntn/metrics/ledger.hpp"

namespace ntn::metrics {

/// Sample mean with a 95% Student-t confidence half-width (absent below two
/// samples).
struct MeanCi {
  double mean = 0.0;
  std::optional<double> ci;
  std::size_t samples = 0;

  friend bool operator==(const MeanCi&, const MeanCi&) = default;
};

/// Absent for an empty sample.
std::optional<MeanCi> mean_ci(std::span<const double> samples);

/// Two-sided 95% Student-t quantile for `dof` degrees of freedom.
double t_quantile_95(std::size_t dof);

struct SuccessRate {
  double percent = 100.0;
  /// No UE triggered; percent is reported as 100.
  bool no_demand = false;
};

/// Configured UEs over triggered UEs.
SuccessRate success_rate(const MetricsLedger& ledger);

/// Dropped over received at `node`, in percent; 0 when nothing arrived.
double drop_rate(const MetricsLedger& ledger, const des::Endpoint& node);

enum class WaitOutcome { Success, Failed };

/// Per-UE waiting times: request to configuration, or request to failure.
std::vector<double> waiting_times_ms(const MetricsLedger& ledger, WaitOutcome outcome);
std::optional<MeanCi> waiting_time_stats(const MetricsLedger& ledger, WaitOutcome outcome);

struct SeriesRow {
  double t_ms = 0.0;
  std::uint64_t received = 0;
  std::uint64_t dropped = 0;
};

std::vector<SeriesRow> time_series(const MetricsLedger& ledger, std::uint32_t satellite);

/// Message classes that count as UE handover requests at the source.
bool is_ue_message(des::MessageClass c);

struct RunReport {
  std::string protocol;
  std::uint32_t ue_count = 0;
  std::uint64_t seed = 0;
  double success_rate = 100.0;
  bool no_demand = false;
  /// External messages received at the source satellite.
  std::uint64_t total_messages = 0;
  std::uint64_t ue_messages = 0;
  /// At the source satellite.
  double drop_rate = 0.0;
  std::optional<MeanCi> wt_success;
  std::optional<MeanCi> wt_failed;

  std::uint64_t triggered = 0;
  std::uint64_t configured = 0;
  std::uint64_t failed = 0;
  std::uint64_t attached = 0;
  std::uint64_t verification_failures = 0;
  std::uint64_t target_received = 0;
  std::uint64_t target_dropped = 0;
  std::uint64_t core_received = 0;

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

RunReport make_report(const MetricsLedger& ledger);

/// Cross-seed summary for one (protocol, ue_count) cell.
struct AggregateRow {
  std::string protocol;
  std::uint32_t ue_count = 0;
  std::size_t runs = 0;
  double success_rate = 0.0;
  double total_messages = 0.0;
  double ue_messages = 0.0;
  double drop_rate = 0.0;
  /// Over per-seed means.
  std::optional<MeanCi> wt_success;
  std::optional<MeanCi> wt_failed;
};

/// Ordered by (protocol, ue_count).
std::vector<AggregateRow> aggregate(std::span<const RunReport> reports);

}  // namespace ntn::metrics
