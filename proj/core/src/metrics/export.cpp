#include "ntn/metrics/export.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <map>
#include <stdexcept>

namespace ntn::metrics {
namespace {

using nlohmann::json;

constexpr std::string_view kAbsent = "---";

std::string rate(double v) { return fmt::format("{:.2f}", v); }
std::string ms(double v) { return fmt::format("{:.3f}", v); }
std::string count(double v) { return fmt::format("{:.1f}", v); }

std::string opt_mean(const std::optional<MeanCi>& m) { return m ? ms(m->mean) : std::string(kAbsent); }
std::string opt_ci(const std::optional<MeanCi>& m) {
  return m && m->ci ? ms(*m->ci) : std::string(kAbsent);
}

std::string join_row(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) line.push_back(',');
    line += csv_field(fields[i]);
  }
  line.push_back('\n');
  return line;
}

json mean_ci_json(const std::optional<MeanCi>& m) {
  if (!m) return nullptr;
  return json{{"mean", m->mean}, {"ci", m->ci ? json(*m->ci) : json(nullptr)}, {"samples", m->samples}};
}

std::optional<MeanCi> mean_ci_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  MeanCi m;
  m.mean = j.at("mean").get<double>();
  if (!j.at("ci").is_null()) m.ci = j.at("ci").get<double>();
  m.samples = j.at("samples").get<std::size_t>();
  return m;
}

const std::vector<std::string> kAggregateMetrics = {
    "success_rate",       "total_messages",    "ue_messages",       "drop_rate",
    "wt_success_mean_ms", "wt_success_ci_ms",  "wt_failed_mean_ms", "wt_failed_ci_ms",
};

std::vector<std::string> aggregate_fields(const AggregateRow* r) {
  if (r == nullptr) return std::vector<std::string>(kAggregateMetrics.size(), std::string(kAbsent));
  return {rate(r->success_rate), count(r->total_messages), count(r->ue_messages), rate(r->drop_rate),
          opt_mean(r->wt_success), opt_ci(r->wt_success), opt_mean(r->wt_failed),  opt_ci(r->wt_failed)};
}

}  // namespace

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

const std::vector<std::string>& summary_columns() {
  static const std::vector<std::string> cols = {
      "protocol",           "ue_count",         "seed",      "success_rate",       "total_messages",
      "ue_messages",        "drop_rate",        "wt_success_mean_ms", "wt_success_ci_ms", "wt_failed_mean_ms",
      "wt_failed_ci_ms",
  };
  return cols;
}

const std::vector<std::string>& aggregate_columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c = {"ue_count", "runs"};
    for (const auto& m : kAggregateMetrics) {
      c.push_back("ho_" + m);
      c.push_back("gho_" + m);
    }
    return c;
  }();
  return cols;
}

std::string summary_csv(std::span<const RunReport> reports) {
  std::string out = join_row(summary_columns());
  for (const auto& r : reports) {
    out += join_row({r.protocol, std::to_string(r.ue_count), std::to_string(r.seed), rate(r.success_rate),
                     std::to_string(r.total_messages), std::to_string(r.ue_messages), rate(r.drop_rate),
                     opt_mean(r.wt_success), opt_ci(r.wt_success), opt_mean(r.wt_failed), opt_ci(r.wt_failed)});
  }
  return out;
}

std::string aggregate_csv(std::span<const AggregateRow> rows) {
  std::map<std::uint32_t, std::pair<const AggregateRow*, const AggregateRow*>> by_count;
  for (const auto& r : rows) {
    auto& cell = by_count[r.ue_count];
    (r.protocol == "ho" ? cell.first : cell.second) = &r;
  }
  std::string out = join_row(aggregate_columns());
  for (const auto& [ues, cell] : by_count) {
    const auto ho = aggregate_fields(cell.first);
    const auto gho = aggregate_fields(cell.second);
    const std::size_t runs = std::max(cell.first ? cell.first->runs : 0, cell.second ? cell.second->runs : 0);
    std::vector<std::string> fields = {std::to_string(ues), std::to_string(runs)};
    for (std::size_t i = 0; i < ho.size(); ++i) {
      fields.push_back(ho[i]);
      fields.push_back(gho[i]);
    }
    out += join_row(fields);
  }
  return out;
}

std::string timeseries_csv(const MetricsLedger& ledger, std::uint32_t satellite) {
  std::string out = "t_ms,received,dropped\n";
  for (const auto& row : time_series(ledger, satellite)) {
    out += fmt::format("{:.0f},{},{}\n", row.t_ms, row.received, row.dropped);
  }
  return out;
}

std::string timeseries_name(const MetricsLedger& ledger, std::uint32_t satellite) {
  const auto& l = ledger.labels();
  return fmt::format("{}-{}-{}-SAT{}.csv", l.protocol, l.ue_count, l.seed, satellite + 1);
}

std::string summary_json(std::span<const RunReport> reports) {
  json runs = json::array();
  for (const auto& r : reports) {
    runs.push_back({{"protocol", r.protocol},
                    {"ue_count", r.ue_count},
                    {"seed", r.seed},
                    {"success_rate", r.success_rate},
                    {"no_demand", r.no_demand},
                    {"total_messages", r.total_messages},
                    {"ue_messages", r.ue_messages},
                    {"drop_rate", r.drop_rate},
                    {"wt_success_ms", mean_ci_json(r.wt_success)},
                    {"wt_failed_ms", mean_ci_json(r.wt_failed)},
                    {"triggered", r.triggered},
                    {"configured", r.configured},
                    {"failed", r.failed},
                    {"attached", r.attached},
                    {"verification_failures", r.verification_failures},
                    {"target_received", r.target_received},
                    {"target_dropped", r.target_dropped},
                    {"core_received", r.core_received}});
  }
  return json{{"runs", runs}}.dump(2) + "\n";
}

std::vector<RunReport> parse_summary_json(std::string_view text) {
  const auto doc = json::parse(text);
  std::vector<RunReport> out;
  for (const auto& j : doc.at("runs")) {
    RunReport r;
    r.protocol = j.at("protocol").get<std::string>();
    r.ue_count = j.at("ue_count").get<std::uint32_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.success_rate = j.at("success_rate").get<double>();
    r.no_demand = j.at("no_demand").get<bool>();
    r.total_messages = j.at("total_messages").get<std::uint64_t>();
    r.ue_messages = j.at("ue_messages").get<std::uint64_t>();
    r.drop_rate = j.at("drop_rate").get<double>();
    r.wt_success = mean_ci_from(j.at("wt_success_ms"));
    r.wt_failed = mean_ci_from(j.at("wt_failed_ms"));
    r.triggered = j.at("triggered").get<std::uint64_t>();
    r.configured = j.at("configured").get<std::uint64_t>();
    r.failed = j.at("failed").get<std::uint64_t>();
    r.attached = j.at("attached").get<std::uint64_t>();
    r.verification_failures = j.at("verification_failures").get<std::uint64_t>();
    r.target_received = j.at("target_received").get<std::uint64_t>();
    r.target_dropped = j.at("target_dropped").get<std::uint64_t>();
    r.core_received = j.at("core_received").get<std::uint64_t>();
    out.push_back(std::move(r));
  }
  return out;
}

std::string aggregate_json(std::span<const AggregateRow> rows) {
  json cells = json::array();
  for (const auto& r : rows) {
    cells.push_back({{"protocol", r.protocol},
                     {"ue_count", r.ue_count},
                     {"runs", r.runs},
                     {"success_rate", r.success_rate},
                     {"total_messages", r.total_messages},
                     {"ue_messages", r.ue_messages},
                     {"drop_rate", r.drop_rate},
                     {"wt_success_ms", mean_ci_json(r.wt_success)},
                     {"wt_failed_ms", mean_ci_json(r.wt_failed)}});
  }
  return json{{"ci", "95% Student-t half-width over per-seed means"}, {"cells", cells}}.dump(2) + "\n";
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw std::runtime_error(path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path.string() + ": " + std::strerror(errno));
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

}  // namespace ntn::metrics
