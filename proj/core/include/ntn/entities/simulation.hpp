#pragma once

// One handover experiment: UEs served by a source satellite (index 0) are
// swept into a trailing target satellite (index 1), using either the per-UE
// Xn handover or the group handover.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ntn/des/delay_model.hpp"
#include "ntn/des/node_queue.hpp"
#include "ntn/des/scheduler.hpp"
#include "ntn/entities/types.hpp"
#include "ntn/metrics/ledger.hpp"
#include "ntn/protocol/crypto.hpp"
#include "ntn/rng.hpp"

namespace ntn::entities {

struct GroupSpec {
  protocol::GroupId gid;
  std::vector<std::uint32_t> members;
};

struct SimulationSetup {
  Protocol protocol = Protocol::Ho;
  std::uint64_t seed = 10;

  des::DelayModel delays;
  des::PropagationMode propagation = des::PropagationMode::Fixed;
  double altitude_km = 900.0;
  std::size_t queue_capacity = 500;
  std::size_t processors = 4;
  des::PriorityOrder priority = des::PriorityOrder::defaults();
  std::uint32_t packet_bytes = des::kDefaultPacketBytes;

  SimTime ho_timeout = SimTime::from_us(30'000);
  SimTime gho_timeout = SimTime::from_us(35'000);
  std::uint32_t max_retransmissions = 15;

  std::size_t k_ga = 2;
  double threshold_fraction = 0.5;
  std::size_t min_group_size = 2;
  double notify_lead_km = 5.0;
  SimTime freshness_window = SimTime::from_us(5'000'000);
  std::size_t share_bytes = protocol::kDefaultShareBytes;
  std::size_t rand_bytes = protocol::kDefaultRandBytes;
  /// Group requests name commitments by digest rather than by slot.
  bool digest_addressing = false;

  /// [0] source, [1] target; further satellites only take part in the
  /// nearest-satellite trigger test.
  std::vector<geometry::SatelliteTrack> satellites;
  std::vector<geometry::GroundPoint> ues;
  /// Idle UEs never trigger and are never grouped. Empty means none idle.
  std::vector<bool> idle;
  /// Groups of at least min_group_size members; only used under GHO.
  std::vector<GroupSpec> groups;

  SimTime t_end = SimTime::from_us(12'000'000);
  SimTime bucket = SimTime::from_us(200'000);
};

struct NodeStats {
  std::uint64_t received = 0;
  std::uint64_t dropped = 0;
  std::uint64_t serviced = 0;
  std::uint64_t internal_jobs = 0;
  std::uint64_t internal_dropped = 0;
  std::size_t queued_at_end = 0;
  std::size_t in_service_at_end = 0;
  std::size_t max_queued = 0;
  bool conserved = false;
};

struct RunResult {
  metrics::MetricsLedger ledger;
  std::vector<NodeStats> satellites;
  NodeStats core;
  std::vector<UePhase> final_phases;
  std::vector<std::uint32_t> requests_sent;
  std::vector<bool> was_aggregator;
  std::vector<GroupStatus> group_status;
  /// Uplink messages each UE sent to the source before it had a configuration.
  std::vector<std::uint32_t> uplinks_before_config;
  std::uint64_t events_fired = 0;
  std::uint64_t signature_verifications = 0;
};

class Simulation {
 public:
  using RecordSink = std::function<void(const metrics::MetricRecord&)>;

  /// Throws std::invalid_argument on an inconsistent setup.
  explicit Simulation(SimulationSetup setup);
  ~Simulation();

  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  void add_record_sink(RecordSink sink) { sinks_.push_back(std::move(sink)); }
  void set_trace(des::Scheduler::TraceHook hook) { scheduler_.set_trace(std::move(hook)); }

  /// Runs to t_end once. Throws std::logic_error if a node breaks message
  /// conservation.
  RunResult run();

  const SimulationSetup& setup() const { return setup_; }
  const UeState& ue(std::uint32_t i) const { return ues_.at(i); }
  const GroupRuntime& group(std::uint32_t i) const { return groups_.at(i); }
  std::size_t group_count() const { return groups_.size(); }

 private:
  struct Node {
    des::Endpoint self;
    des::NodeQueue queue;
    std::uint64_t internal_jobs = 0;
    std::uint64_t internal_dropped = 0;
  };
  struct Outcome {
    std::vector<des::Message> out;
    std::vector<des::CryptoOp> work;
  };
  struct HoEntry {
    std::optional<SimTime> in_flight_until;
    std::shared_ptr<const HandoverConfig> config;
  };

  SimTime now() const { return scheduler_.now(); }
  void emit(metrics::RecordKind kind, des::Endpoint subject,
            std::optional<des::MessageClass> cls = std::nullopt);

  // engine plumbing (simulation.cpp)
  des::Message make(des::MessageClass cls, des::Endpoint from, des::Endpoint to,
                    std::vector<des::CryptoOp> inbound, std::any payload);
  SimTime delay_for(const des::Message& m) const;
  void send(des::Message m);
  void deliver(des::Message m);
  void arrive(Node& node, des::Message m);
  void start_service(Node& node, des::Message m);
  void finish_service(Node& node, des::Message m);
  void release(Node& node, std::vector<des::Message> out);
  Node& node_of(des::Endpoint e);
  void schedule_initial_events();
  NodeStats stats_of(const Node& node) const;

  // UE side (ue.cpp)
  void ue_trigger(std::uint32_t id);
  void ue_timer(std::uint32_t id, std::uint64_t generation);
  void ue_exit(std::uint32_t id);
  void ue_receive(std::uint32_t id, const des::Message& m);
  void ue_notification(std::uint32_t id, const protocol::Notification& n);
  void ue_configured(UeState& ue, std::shared_ptr<const HandoverConfig> config);
  void ue_send_request(UeState& ue, des::MessageClass cls);
  void ue_broadcast_share(UeState& ue);
  void ga_hear_share(std::uint32_t id, std::shared_ptr<const Bytes> wire);
  void ga_process_share(std::uint32_t id, const Bytes& wire);
  void ga_send_request(UeState& ue);
  void send_attach(UeState& ue);
  void arm_timer(UeState& ue, SimTime after);
  void cancel_timer(UeState& ue);
  SimTime protocol_timeout(const UeState& ue) const;

  // satellites and core (satellite.cpp, core_node.cpp)
  Outcome satellite_handle(std::uint32_t sat, const des::Message& m);
  Outcome source_ue_request(const des::Message& m);
  Outcome source_target_response(const des::Message& m);
  Outcome source_ga_request(const des::Message& m);
  Outcome source_monitor_group(std::uint32_t group);
  Outcome target_ho_request(const des::Message& m);
  Outcome target_group_request(const des::Message& m);
  Outcome target_attach(const des::Message& m);
  Outcome core_handle(const des::Message& m);
  void schedule_monitor(std::uint32_t group);
  std::shared_ptr<const HandoverConfig> issue_config(std::optional<protocol::Share> share, Bytes rand);

  SimulationSetup setup_;
  des::Scheduler scheduler_;
  metrics::MetricsLedger ledger_;
  std::vector<RecordSink> sinks_;
  std::vector<Node> satellites_;
  std::unique_ptr<Node> core_;
  std::vector<protocol::SatKeyPair> keys_;
  protocol::CachingVerifier verifier_;
  std::vector<UeState> ues_;
  std::vector<std::uint32_t> uplinks_before_config_;
  std::vector<GroupRuntime> groups_;
  std::map<std::string, std::uint32_t> group_index_;
  std::vector<HoEntry> ho_;
  std::map<std::string, NextEpoch> next_epoch_;
  Bytes target_rand_;
  Rng source_rng_;
  Rng target_rng_;
  std::uint64_t next_message_id_ = 1;
  bool ran_ = false;
};

}  // namespace ntn::entities
