#pragma once

// Raw event log: a label comment, a header, then one CSV line per metric
// record (time_ms, node, event_kind, message_class, outcome).

#include <iosfwd>
#include <string>

#include "ntn/metrics/ledger.hpp"

namespace ntn::metrics {

class EventLogWriter {
 public:
  EventLogWriter(std::ostream& out, const LedgerLabels& labels);
  void write(const MetricRecord& r);

 private:
  std::ostream& out_;
};

std::string format_record(const MetricRecord& r);
/// Throws std::runtime_error on a malformed line.
MetricRecord parse_record(std::string_view line);

/// Rebuilds a ledger from a log written by EventLogWriter.
MetricsLedger replay_event_log(std::istream& in);

}  // namespace ntn::metrics
