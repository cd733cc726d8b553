#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ntn/metrics/report.hpp"

namespace ntn::metrics {

/// RFC 4180 field: quoted when it contains a comma, quote or line break.
std::string csv_field(std::string_view s);

/// Column names of summary.csv, in order.
const std::vector<std::string>& summary_columns();
/// Column names of aggregate.csv: ue_count, runs, then ho_/gho_ pairs.
const std::vector<std::string>& aggregate_columns();

std::string summary_csv(std::span<const RunReport> reports);
/// One row per UE count, HO and GHO side by side.
std::string aggregate_csv(std::span<const AggregateRow> rows);
std::string timeseries_csv(const MetricsLedger& ledger, std::uint32_t satellite);

std::string summary_json(std::span<const RunReport> reports);
std::vector<RunReport> parse_summary_json(std::string_view text);
std::string aggregate_json(std::span<const AggregateRow> rows);

/// "<protocol>-<ues>-<seed>-SAT<k>.csv"
std::string timeseries_name(const MetricsLedger& ledger, std::uint32_t satellite);

/// Writes `content` to `path`, creating parent directories. Throws
/// std::runtime_error naming the path on failure.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace ntn::metrics
