#pragma once

// Event-sourced run measurements. The simulator emits MetricRecords; the
// ledger is a pure fold over them, so replaying a persisted event log
// reproduces the live ledger exactly.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ntn/des/message.hpp"
#include "ntn/des/sim_time.hpp"

namespace ntn::metrics {

using des::SimTime;

enum class RecordKind : std::uint8_t {
  Received,        // external message admitted to (or dropped at) a node's input
  Dropped,         // queue full at arrival
  Internal,        // node-local job (e.g. group monitor), not a received message
  RequestSent,     // UE's first handover request or share broadcast
  ConfigReceived,  // UE got its handover configuration
  Attached,        // target acknowledged the attach
  Failed,          // UE lost source coverage without a configuration
  AttachAbandoned, // attach retries exhausted after a configuration
  VerificationFailure,
};

std::string_view to_string(RecordKind k);
std::optional<RecordKind> parse_record_kind(std::string_view s);

struct MetricRecord {
  SimTime time;
  RecordKind kind = RecordKind::Received;
  /// Node for message records, the UE for UE records.
  des::Endpoint subject;
  std::optional<des::MessageClass> cls;

  friend bool operator==(const MetricRecord&, const MetricRecord&) = default;
};

struct LedgerLabels {
  std::string protocol;
  std::uint64_t seed = 0;
  std::uint32_t ue_count = 0;
  std::uint32_t satellites = 3;
  SimTime t_end;
  SimTime bucket = SimTime::from_us(200'000);

  friend bool operator==(const LedgerLabels&, const LedgerLabels&) = default;
};

using ClassCounts = std::array<std::uint64_t, des::kMessageClassCount>;

struct NodeCounters {
  ClassCounts received{};
  ClassCounts dropped{};
  ClassCounts internal{};

  std::uint64_t total_received() const;
  std::uint64_t total_dropped() const;
  std::uint64_t total_internal() const;

  friend bool operator==(const NodeCounters&, const NodeCounters&) = default;
};

struct Bucket {
  std::uint64_t received = 0;
  std::uint64_t dropped = 0;

  friend bool operator==(const Bucket&, const Bucket&) = default;
};

struct UeRecord {
  std::optional<SimTime> request_sent_at;
  std::optional<SimTime> config_received_at;
  std::optional<SimTime> attached_at;
  std::optional<SimTime> failed_at;
  bool attach_abandoned = false;

  friend bool operator==(const UeRecord&, const UeRecord&) = default;
};

class MetricsLedger {
 public:
  explicit MetricsLedger(LedgerLabels labels);

  /// Throws std::logic_error on records that break per-UE ordering (e.g. a
  /// second configuration, or a failure after a configuration).
  void record(const MetricRecord& r);

  const LedgerLabels& labels() const { return labels_; }
  const NodeCounters& satellite(std::uint32_t index) const { return satellites_.at(index); }
  const NodeCounters& core() const { return core_; }
  /// Buckets [k*bucket, (k+1)*bucket) covering [0, t_end]; satellites only.
  const std::vector<Bucket>& buckets(std::uint32_t satellite) const { return buckets_.at(satellite); }
  const std::vector<UeRecord>& ues() const { return ues_; }
  std::uint64_t verification_failures() const { return verification_failures_; }

  friend bool operator==(const MetricsLedger&, const MetricsLedger&) = default;

 private:
  NodeCounters& node(const des::Endpoint& e);
  std::size_t bucket_index(SimTime t) const;

  LedgerLabels labels_;
  std::vector<NodeCounters> satellites_;
  NodeCounters core_;
  std::vector<std::vector<Bucket>> buckets_;
  std::vector<UeRecord> ues_;
  std::uint64_t verification_failures_ = 0;
};

}  // namespace ntn::metrics
