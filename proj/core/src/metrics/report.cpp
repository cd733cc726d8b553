#include "ntn/metrics/report.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <map>
#include <numeric>

namespace ntn::metrics {

double t_quantile_95(std::size_t dof) {
  const boost::math::students_t dist(static_cast<double>(dof));
  return boost::math::quantile(boost::math::complement(dist, 0.025));
}

std::optional<MeanCi> mean_ci(std::span<const double> xs) {
  if (xs.empty()) return std::nullopt;
  const auto n = xs.size();
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(n);
  MeanCi out{mean, std::nullopt, n};
  if (n >= 2) {
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    out.ci = t_quantile_95(n - 1) * sd / std::sqrt(static_cast<double>(n));
  }
  return out;
}

SuccessRate success_rate(const MetricsLedger& ledger) {
  std::uint64_t triggered = 0;
  std::uint64_t configured = 0;
  for (const auto& ue : ledger.ues()) {
    if (!ue.request_sent_at) continue;
    ++triggered;
    if (ue.config_received_at) ++configured;
  }
  if (triggered == 0) return {100.0, true};
  return {100.0 * static_cast<double>(configured) / static_cast<double>(triggered), false};
}

double drop_rate(const MetricsLedger& ledger, const des::Endpoint& node) {
  const auto& c = node.kind == des::EndpointKind::Core ? ledger.core() : ledger.satellite(node.index);
  const auto received = c.total_received();
  if (received == 0) return 0.0;
  return 100.0 * static_cast<double>(c.total_dropped()) / static_cast<double>(received);
}

std::vector<double> waiting_times_ms(const MetricsLedger& ledger, WaitOutcome outcome) {
  std::vector<double> out;
  for (const auto& ue : ledger.ues()) {
    if (!ue.request_sent_at) continue;
    const auto& end = outcome == WaitOutcome::Success ? ue.config_received_at : ue.failed_at;
    if (end) out.push_back((*end - *ue.request_sent_at).ms());
  }
  return out;
}

std::optional<MeanCi> waiting_time_stats(const MetricsLedger& ledger, WaitOutcome outcome) {
  const auto xs = waiting_times_ms(ledger, outcome);
  return mean_ci(xs);
}

std::vector<SeriesRow> time_series(const MetricsLedger& ledger, std::uint32_t satellite) {
  const auto& buckets = ledger.buckets(satellite);
  std::vector<SeriesRow> rows;
  rows.reserve(buckets.size());
  for (std::size_t k = 0; k < buckets.size(); ++k) {
    rows.push_back({static_cast<double>(k) * ledger.labels().bucket.ms(), buckets[k].received, buckets[k].dropped});
  }
  return rows;
}

bool is_ue_message(des::MessageClass c) {
  return c == des::MessageClass::UeRequest || c == des::MessageClass::UeRetransmission ||
         c == des::MessageClass::GaRequest;
}

RunReport make_report(const MetricsLedger& ledger) {
  RunReport r;
  r.protocol = ledger.labels().protocol;
  r.ue_count = ledger.labels().ue_count;
  r.seed = ledger.labels().seed;
  const auto sr = success_rate(ledger);
  r.success_rate = sr.percent;
  r.no_demand = sr.no_demand;
  const auto& source = ledger.satellite(0);
  r.total_messages = source.total_received();
  for (auto c : des::kAllMessageClasses) {
    if (is_ue_message(c)) r.ue_messages += source.received[static_cast<std::size_t>(c)];
  }
  r.drop_rate = drop_rate(ledger, des::Endpoint::satellite(0));
  r.wt_success = waiting_time_stats(ledger, WaitOutcome::Success);
  r.wt_failed = waiting_time_stats(ledger, WaitOutcome::Failed);
  for (const auto& ue : ledger.ues()) {
    if (ue.request_sent_at) ++r.triggered;
    if (ue.config_received_at) ++r.configured;
    if (ue.failed_at) ++r.failed;
    if (ue.attached_at) ++r.attached;
  }
  r.verification_failures = ledger.verification_failures();
  if (ledger.labels().satellites > 1) {
    r.target_received = ledger.satellite(1).total_received();
    r.target_dropped = ledger.satellite(1).total_dropped();
  }
  r.core_received = ledger.core().total_received();
  return r;
}

std::vector<AggregateRow> aggregate(std::span<const RunReport> reports) {
  std::map<std::pair<std::string, std::uint32_t>, std::vector<const RunReport*>> cells;
  for (const auto& r : reports) cells[{r.protocol, r.ue_count}].push_back(&r);

  std::vector<AggregateRow> rows;
  for (const auto& [key, runs] : cells) {
    AggregateRow row;
    row.protocol = key.first;
    row.ue_count = key.second;
    row.runs = runs.size();
    std::vector<double> wt_s;
    std::vector<double> wt_f;
    for (const auto* r : runs) {
      row.success_rate += r->success_rate;
      row.total_messages += static_cast<double>(r->total_messages);
      row.ue_messages += static_cast<double>(r->ue_messages);
      row.drop_rate += r->drop_rate;
      if (r->wt_success) wt_s.push_back(r->wt_success->mean);
      if (r->wt_failed) wt_f.push_back(r->wt_failed->mean);
    }
    const auto n = static_cast<double>(runs.size());
    row.success_rate /= n;
    row.total_messages /= n;
    row.ue_messages /= n;
    row.drop_rate /= n;
    row.wt_success = mean_ci(wt_s);
    row.wt_failed = mean_ci(wt_f);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace ntn::metrics
