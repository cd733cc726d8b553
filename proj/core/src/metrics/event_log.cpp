#include "ntn/metrics/event_log.hpp"

#include <fmt/format.h>

#include <charconv>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace ntn::metrics {
namespace {

constexpr std::string_view kHeader = "time_ms,node,event_kind,message_class,outcome";

std::string node_name(const des::Endpoint& e) { return des::to_string(e); }

template <typename T>
T parse_number(std::string_view s, std::string_view what) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::runtime_error(fmt::format("event log: bad {} '{}'", what, s));
  }
  return v;
}

des::Endpoint parse_node(std::string_view s) {
  if (s == "CORE") return des::Endpoint::core();
  if (s.starts_with("SAT")) return des::Endpoint::satellite(parse_number<std::uint32_t>(s.substr(3), "node") - 1);
  if (s.starts_with("UE")) return des::Endpoint::ue(parse_number<std::uint32_t>(s.substr(2), "node"));
  throw std::runtime_error(fmt::format("event log: bad node '{}'", s));
}

std::string_view event_kind(RecordKind k) {
  switch (k) {
    case RecordKind::Received:
    case RecordKind::Dropped:
    case RecordKind::Internal: return "message";
    case RecordKind::VerificationFailure: return "check";
    default: return "ue";
  }
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = line.find(',');
    out.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

std::string format_record(const MetricRecord& r) {
  const auto us = r.time.us();
  return fmt::format("{}.{:03},{},{},{},{}", us / 1000, us % 1000, node_name(r.subject), event_kind(r.kind),
                     r.cls ? des::to_string(*r.cls) : std::string_view("-"), to_string(r.kind));
}

MetricRecord parse_record(std::string_view line) {
  const auto f = split(line);
  if (f.size() != 5) throw std::runtime_error(fmt::format("event log: expected 5 fields in '{}'", line));
  const auto dot = f[0].find('.');
  if (dot == std::string_view::npos || f[0].size() - dot != 4) {
    throw std::runtime_error(fmt::format("event log: bad time '{}'", f[0]));
  }
  MetricRecord r;
  r.time = des::SimTime::from_us(parse_number<std::int64_t>(f[0].substr(0, dot), "time") * 1000 +
                                 parse_number<std::int64_t>(f[0].substr(dot + 1), "time"));
  r.subject = parse_node(f[1]);
  if (f[3] != "-") {
    r.cls = des::parse_message_class(f[3]);
    if (!r.cls) throw std::runtime_error(fmt::format("event log: bad message class '{}'", f[3]));
  }
  const auto kind = parse_record_kind(f[4]);
  if (!kind || event_kind(*kind) != f[2]) throw std::runtime_error(fmt::format("event log: bad outcome '{}'", f[4]));
  r.kind = *kind;
  return r;
}

EventLogWriter::EventLogWriter(std::ostream& out, const LedgerLabels& l) : out_(out) {
  out_ << fmt::format("# protocol={} seed={} ue_count={} satellites={} t_end_us={} bucket_us={}\n", l.protocol,
                      l.seed, l.ue_count, l.satellites, l.t_end.us(), l.bucket.us())
       << kHeader << '\n';
}

void EventLogWriter::write(const MetricRecord& r) { out_ << format_record(r) << '\n'; }

MetricsLedger replay_event_log(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || !line.starts_with("# ")) throw std::runtime_error("event log: missing label line");
  LedgerLabels labels;
  for (auto field : split(std::string_view(line).substr(2))) {
    // Labels are space separated; split on commas yields one chunk.
    std::string_view rest = field;
    while (!rest.empty()) {
      const auto sp = rest.find(' ');
      const auto kv = rest.substr(0, sp);
      rest = sp == std::string_view::npos ? std::string_view{} : rest.substr(sp + 1);
      const auto eq = kv.find('=');
      if (eq == std::string_view::npos) continue;
      const auto key = kv.substr(0, eq);
      const auto val = kv.substr(eq + 1);
      if (key == "protocol") labels.protocol = std::string(val);
      else if (key == "seed") labels.seed = parse_number<std::uint64_t>(val, "seed");
      else if (key == "ue_count") labels.ue_count = parse_number<std::uint32_t>(val, "ue_count");
      else if (key == "satellites") labels.satellites = parse_number<std::uint32_t>(val, "satellites");
      else if (key == "t_end_us") labels.t_end = des::SimTime::from_us(parse_number<std::int64_t>(val, "t_end"));
      else if (key == "bucket_us") labels.bucket = des::SimTime::from_us(parse_number<std::int64_t>(val, "bucket"));
    }
  }
  if (!std::getline(in, line) || line != kHeader) throw std::runtime_error("event log: missing header");
  MetricsLedger ledger(labels);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    ledger.record(parse_record(line));
  }
  return ledger;
}

}  // namespace ntn::metrics
