#include "ntn/metrics/ledger.hpp"

#include <numeric>
#include <stdexcept>

namespace ntn::metrics {
namespace {

constexpr std::array<std::pair<RecordKind, std::string_view>, 9> kKindNames = {{
    {RecordKind::Received, "received"},
    {RecordKind::Dropped, "dropped"},
    {RecordKind::Internal, "internal"},
    {RecordKind::RequestSent, "request-sent"},
    {RecordKind::ConfigReceived, "config-received"},
    {RecordKind::Attached, "attached"},
    {RecordKind::Failed, "failed"},
    {RecordKind::AttachAbandoned, "attach-abandoned"},
    {RecordKind::VerificationFailure, "verification-failure"},
}};

std::uint64_t sum(const ClassCounts& c) { return std::accumulate(c.begin(), c.end(), std::uint64_t{0}); }

void set_once(std::optional<SimTime>& slot, SimTime t, const char* what) {
  if (slot) throw std::logic_error(std::string("duplicate UE record: ") + what);
  slot = t;
}

}  // namespace

std::string_view to_string(RecordKind k) {
  for (const auto& [kind, name] : kKindNames) {
    if (kind == k) return name;
  }
  return "?";
}

std::optional<RecordKind> parse_record_kind(std::string_view s) {
  for (const auto& [kind, name] : kKindNames) {
    if (name == s) return kind;
  }
  return std::nullopt;
}

std::uint64_t NodeCounters::total_received() const { return sum(received); }
std::uint64_t NodeCounters::total_dropped() const { return sum(dropped); }
std::uint64_t NodeCounters::total_internal() const { return sum(internal); }

MetricsLedger::MetricsLedger(LedgerLabels labels) : labels_(std::move(labels)) {
  if (labels_.bucket <= SimTime::zero()) throw std::invalid_argument("bucket width must be positive");
  satellites_.resize(labels_.satellites);
  const auto n_buckets = static_cast<std::size_t>(labels_.t_end.us() / labels_.bucket.us()) + 1;
  buckets_.assign(labels_.satellites, std::vector<Bucket>(n_buckets));
  ues_.resize(labels_.ue_count);
}

NodeCounters& MetricsLedger::node(const des::Endpoint& e) {
  switch (e.kind) {
    case des::EndpointKind::Satellite: return satellites_.at(e.index);
    case des::EndpointKind::Core: return core_;
    default: throw std::logic_error("message record for a non-node endpoint");
  }
}

std::size_t MetricsLedger::bucket_index(SimTime t) const {
  const auto idx = static_cast<std::size_t>(t.us() / labels_.bucket.us());
  return std::min(idx, buckets_.front().size() - 1);
}

void MetricsLedger::record(const MetricRecord& r) {
  switch (r.kind) {
    case RecordKind::Received:
    case RecordKind::Dropped:
    case RecordKind::Internal: {
      if (!r.cls) throw std::logic_error("message record without a class");
      const auto c = static_cast<std::size_t>(*r.cls);
      auto& counters = node(r.subject);
      if (r.kind == RecordKind::Internal) {
        ++counters.internal[c];
        return;
      }
      auto& counts = r.kind == RecordKind::Received ? counters.received : counters.dropped;
      ++counts[c];
      if (r.subject.kind == des::EndpointKind::Satellite && !buckets_.empty()) {
        auto& b = buckets_.at(r.subject.index)[bucket_index(r.time)];
        ++(r.kind == RecordKind::Received ? b.received : b.dropped);
      }
      return;
    }
    case RecordKind::VerificationFailure:
      ++verification_failures_;
      return;
    default: break;
  }

  if (r.subject.kind != des::EndpointKind::Ue) throw std::logic_error("UE record for a non-UE endpoint");
  auto& ue = ues_.at(r.subject.index);
  switch (r.kind) {
    case RecordKind::RequestSent: set_once(ue.request_sent_at, r.time, "request"); break;
    case RecordKind::ConfigReceived:
      if (ue.failed_at) throw std::logic_error("configuration after failure");
      set_once(ue.config_received_at, r.time, "config");
      break;
    case RecordKind::Attached: set_once(ue.attached_at, r.time, "attach"); break;
    case RecordKind::Failed:
      if (ue.config_received_at) throw std::logic_error("failure after configuration");
      set_once(ue.failed_at, r.time, "failure");
      break;
    case RecordKind::AttachAbandoned: ue.attach_abandoned = true; break;
    default: break;
  }
}

}  // namespace ntn::metrics
