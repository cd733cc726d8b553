#include "ntn/entities/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "payloads.hpp"
#include "ntn/protocol/wire.hpp"

namespace ntn::entities {

using des::Endpoint;
using des::EndpointKind;
using des::EventKind;
using des::Message;
using des::MessageClass;
using metrics::RecordKind;

std::string_view to_string(Protocol p) { return p == Protocol::Ho ? "ho" : "gho"; }

std::optional<Protocol> parse_protocol(std::string_view s) {
  if (s == "ho") return Protocol::Ho;
  if (s == "gho") return Protocol::Gho;
  return std::nullopt;
}

std::string_view to_string(UePhase p) {
  switch (p) {
    case UePhase::Connected: return "Connected";
    case UePhase::AwaitingHoResponse: return "AwaitingHoResponse";
    case UePhase::GroupNotified: return "GroupNotified";
    case UePhase::ShareBroadcast: return "ShareBroadcast";
    case UePhase::AwaitingGroupConfig: return "AwaitingGroupConfig";
    case UePhase::Configured: return "Configured";
    case UePhase::Attaching: return "Attaching";
    case UePhase::Attached: return "Attached";
    case UePhase::Failed: return "Failed";
  }
  return "?";
}

std::string_view to_string(GroupStatus s) {
  switch (s) {
    case GroupStatus::Monitoring: return "monitoring";
    case GroupStatus::Notified: return "notified";
    case GroupStatus::Requested: return "requested";
    case GroupStatus::Configured: return "configured";
    case GroupStatus::Cancelled: return "cancelled";
  }
  return "?";
}

namespace {

metrics::LedgerLabels labels_for(const SimulationSetup& s) {
  metrics::LedgerLabels l;
  l.protocol = std::string(to_string(s.protocol));
  l.seed = s.seed;
  l.ue_count = static_cast<std::uint32_t>(s.ues.size());
  l.satellites = static_cast<std::uint32_t>(s.satellites.size());
  l.t_end = s.t_end;
  l.bucket = s.bucket;
  return l;
}

void validate(const SimulationSetup& s) {
  if (s.satellites.size() < 2) throw std::invalid_argument("need a source and a target satellite");
  if (s.ues.empty()) throw std::invalid_argument("need at least one UE");
  if (!s.idle.empty() && s.idle.size() != s.ues.size()) throw std::invalid_argument("idle mask size mismatch");
  if (s.k_ga == 0) throw std::invalid_argument("k_ga must be at least 1");
  if (s.min_group_size == 0) throw std::invalid_argument("min_group_size must be at least 1");
  if (s.share_bytes == 0 || s.rand_bytes == 0) throw std::invalid_argument("share and RAND lengths must be positive");
  if (s.t_end < SimTime::zero()) throw std::invalid_argument("t_end must be non-negative");
  std::vector<bool> grouped(s.ues.size(), false);
  std::set<std::string> gids;
  for (const auto& g : s.groups) {
    if (g.members.empty()) throw std::invalid_argument("empty group " + g.gid.value);
    if (!gids.insert(g.gid.value).second) throw std::invalid_argument("duplicate group id " + g.gid.value);
    for (auto m : g.members) {
      if (m >= s.ues.size()) throw std::invalid_argument("group member out of range in " + g.gid.value);
      if (!s.idle.empty() && s.idle[m]) throw std::invalid_argument("idle UE placed in group " + g.gid.value);
      if (grouped[m]) throw std::invalid_argument("UE in more than one group: " + std::to_string(m));
      grouped[m] = true;
    }
  }
}

Bytes seeded_bytes(std::size_t n, std::uint64_t seed, const std::string& label) {
  Bytes out(n);
  protocol::deterministic_bytes(out, protocol::derive_seed(seed, label));
  return out;
}

SimTime ceil_us(double seconds) { return SimTime::from_us(static_cast<std::int64_t>(std::ceil(seconds * 1e6))); }

}  // namespace

Simulation::Simulation(SimulationSetup setup)
    : setup_((validate(setup), std::move(setup))),
      ledger_(labels_for(setup_)),
      verifier_(protocol::default_signature()),
      source_rng_(mix_seed(setup_.seed, label_hash("source"))),
      target_rng_(mix_seed(setup_.seed, label_hash("target"))) {
  const auto n_sats = static_cast<std::uint32_t>(setup_.satellites.size());
  satellites_.reserve(n_sats);
  for (std::uint32_t i = 0; i < n_sats; ++i) {
    satellites_.push_back(
        Node{Endpoint::satellite(i), des::NodeQueue(setup_.queue_capacity, setup_.processors, setup_.priority)});
    keys_.push_back(protocol::default_signature().keypair_from_seed(
        protocol::derive_seed(setup_.seed, "sat-key|" + std::to_string(setup_.satellites[i].id))));
  }
  core_ = std::make_unique<Node>(
      Node{Endpoint::core(), des::NodeQueue(setup_.queue_capacity, setup_.processors, setup_.priority)});

  const auto n = static_cast<std::uint32_t>(setup_.ues.size());
  ues_.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    ues_[i].id = i;
    ues_[i].position = setup_.ues[i];
    ues_[i].idle = !setup_.idle.empty() && setup_.idle[i];
  }
  uplinks_before_config_.assign(n, 0);
  ho_.resize(n);
  target_rand_ = seeded_bytes(setup_.rand_bytes, setup_.seed, "rand|target");

  if (setup_.protocol == Protocol::Gho) {
    groups_.reserve(setup_.groups.size());
    for (const auto& spec : setup_.groups) {
      const auto g = static_cast<std::uint32_t>(groups_.size());
      GroupRuntime grp;
      grp.gid = spec.gid;
      grp.members = spec.members;
      for (auto m : spec.members) {
        grp.centroid.x_km += setup_.ues[m].x_km;
        grp.centroid.y_km += setup_.ues[m].y_km;
      }
      grp.centroid.x_km /= static_cast<double>(spec.members.size());
      grp.centroid.y_km /= static_cast<double>(spec.members.size());
      grp.rand = seeded_bytes(setup_.rand_bytes, setup_.seed, "rand|source|" + spec.gid.value);
      auto bundle = protocol::generate_shares(spec.gid, grp.rand, spec.members.size(), setup_.seed,
                                              setup_.share_bytes);
      for (std::size_t k = 0; k < spec.members.size(); ++k) {
        auto& ue = ues_[spec.members[k]];
        if (ue.group) throw std::invalid_argument("UE assigned to two groups");
        ue.group = g;
        ue.share = bundle.shares[k];
      }
      grp.commitments = std::make_shared<const protocol::CommitmentMap>(std::move(bundle.commitments));
      grp.share_map = std::move(bundle.share_map);
      if (!group_index_.emplace(spec.gid.value, g).second) {
        throw std::invalid_argument("duplicate group id " + spec.gid.value);
      }
      groups_.push_back(std::move(grp));
    }
  }
}

Simulation::~Simulation() = default;

void Simulation::emit(RecordKind kind, Endpoint subject, std::optional<MessageClass> cls) {
  const metrics::MetricRecord r{now(), kind, subject, cls};
  ledger_.record(r);
  for (const auto& sink : sinks_) sink(r);
}

Message Simulation::make(MessageClass cls, Endpoint from, Endpoint to, std::vector<des::CryptoOp> inbound,
                         std::any payload) {
  Message m;
  m.id = next_message_id_++;
  m.cls = cls;
  m.sender = from;
  m.receiver = to;
  m.size_bytes = setup_.packet_bytes;
  m.crypto_ops = std::move(inbound);
  m.created_at = now();
  m.payload = std::move(payload);
  return m;
}

SimTime Simulation::delay_for(const Message& m) const {
  const auto sk = m.sender.kind;
  const auto rk = m.receiver.kind;
  if (setup_.propagation == des::PropagationMode::Distance) {
    const double t = now().seconds();
    if ((sk == EndpointKind::Ue && rk == EndpointKind::Satellite) ||
        (sk == EndpointKind::Satellite && rk == EndpointKind::Ue)) {
      const auto& ue = sk == EndpointKind::Ue ? m.sender : m.receiver;
      const auto& sat = sk == EndpointKind::Satellite ? m.sender : m.receiver;
      const double ground =
          geometry::distance_km(ues_[ue.index].position, geometry::position_at(setup_.satellites[sat.index], t));
      return des::distance_link_delay(setup_.delays, std::hypot(ground, setup_.altitude_km));
    }
    if (sk == EndpointKind::Satellite && rk == EndpointKind::Satellite) {
      return des::distance_link_delay(
          setup_.delays, geometry::distance_km(geometry::position_at(setup_.satellites[m.sender.index], t),
                                               geometry::position_at(setup_.satellites[m.receiver.index], t)));
    }
  }
  return des::link_delay(setup_.delays, sk, rk);
}

void Simulation::send(Message m) {
  const SimTime d = delay_for(m);
  const Endpoint to = m.receiver;
  scheduler_.schedule_after(d, EventKind::MessageArrival, to,
                            [this, m = std::move(m)]() mutable { deliver(std::move(m)); });
}

Simulation::Node& Simulation::node_of(Endpoint e) {
  if (e.kind == EndpointKind::Core) return *core_;
  return satellites_.at(e.index);
}

void Simulation::deliver(Message m) {
  switch (m.receiver.kind) {
    case EndpointKind::Satellite:
    case EndpointKind::Core: arrive(node_of(m.receiver), std::move(m)); return;
    case EndpointKind::Ue: ue_receive(m.receiver.index, m); return;
    case EndpointKind::Group: break;
  }
  if (const auto* n = std::any_cast<detail::NotificationWire>(&m.payload)) {
    const auto notif = protocol::decode_notification(*n->wire);
    for (auto member : groups_.at(n->group).members) ue_notification(member, notif);
  } else if (const auto* s = std::any_cast<detail::ShareWire>(&m.payload)) {
    for (auto ga : groups_.at(s->group).aggregators) ga_hear_share(ga, s->wire);
  }
}

void Simulation::arrive(Node& node, Message m) {
  const bool internal = m.internal();
  const MessageClass cls = m.cls;
  std::optional<std::uint32_t> job;
  if (internal) {
    ++node.internal_jobs;
    emit(RecordKind::Internal, node.self, cls);
    if (const auto* j = std::any_cast<detail::MonitorJob>(&m.payload)) job = j->group;
  } else {
    emit(RecordKind::Received, node.self, cls);
  }
  auto admitted = node.queue.enqueue(std::move(m), now());
  if (admitted.outcome == des::Admission::Dropped) {
    if (!internal) {
      emit(RecordKind::Dropped, node.self, cls);
    } else {
      ++node.internal_dropped;
      if (job) {
        const auto g = *job;
        scheduler_.schedule_after(setup_.gho_timeout, EventKind::TriggerCheck, node.self,
                                  [this, g] { schedule_monitor(g); });
      }
    }
  } else if (admitted.outcome == des::Admission::Serve) {
    start_service(node, std::move(*admitted.serve));
  }
}

void Simulation::start_service(Node& node, Message m) {
  const SimTime t = des::service_time(setup_.delays, m);
  scheduler_.schedule_after(t, EventKind::ProcessorFree, node.self,
                            [this, &node, m = std::move(m)]() mutable { finish_service(node, std::move(m)); });
}

void Simulation::finish_service(Node& node, Message m) {
  Outcome o = node.self.kind == EndpointKind::Core ? core_handle(m) : satellite_handle(node.self.index, m);
  const SimTime work = des::work_time(setup_.delays, o.work);
  if (work > SimTime::zero()) {
    scheduler_.schedule_after(work, EventKind::ProcessorFree, node.self,
                              [this, &node, out = std::move(o.out)]() mutable { release(node, std::move(out)); });
  } else {
    release(node, std::move(o.out));
  }
}

void Simulation::release(Node& node, std::vector<Message> out) {
  for (auto& m : out) send(std::move(m));
  if (auto next = node.queue.complete(now())) start_service(node, std::move(*next));
}

void Simulation::schedule_initial_events() {
  const auto& source = setup_.satellites[0];
  const auto& target = setup_.satellites[1];
  const std::span<const geometry::SatelliteTrack> others(setup_.satellites.begin() + 1, setup_.satellites.end());
  const SimTime one_us = SimTime::from_us(1);

  for (auto& ue : ues_) {
    if (ue.idle) continue;
    if (const auto t = geometry::handover_crossing_time(ue.position, source, target)) {
      // The crossing instant itself is a tie, which keeps the UE in place.
      SimTime at = ceil_us(*t);
      while (at <= setup_.t_end && geometry::needs_handover(ue.position, source, others, at.seconds()) != target.id) {
        at += one_us;
      }
      if (at <= setup_.t_end) {
        scheduler_.schedule(at, EventKind::TriggerCheck, Endpoint::ue(ue.id), [this, id = ue.id] { ue_trigger(id); });
      }
    }
    if (const auto w = geometry::footprint_window(ue.position, source); w && std::isfinite(w->exit_s)) {
      const SimTime at = std::max(SimTime::zero(), ceil_us(w->exit_s) + one_us);
      if (at <= setup_.t_end) {
        scheduler_.schedule(at, EventKind::TriggerCheck, Endpoint::ue(ue.id), [this, id = ue.id] { ue_exit(id); });
      }
    }
  }

  for (std::uint32_t g = 0; g < groups_.size(); ++g) {
    const auto t = geometry::bisector_approach_time(groups_[g].centroid, source, target, setup_.notify_lead_km);
    if (!t) continue;
    const SimTime at = SimTime::from_us(static_cast<std::int64_t>(std::floor(*t * 1e6)));
    if (at <= setup_.t_end) {
      scheduler_.schedule(at, EventKind::TriggerCheck, Endpoint::satellite(0), [this, g] { schedule_monitor(g); });
    }
  }
}

void Simulation::schedule_monitor(std::uint32_t group) {
  const Endpoint self = Endpoint::satellite(0);
  arrive(satellites_[0], make(MessageClass::NotificationBroadcast, self, self, {}, detail::MonitorJob{group}));
}

NodeStats Simulation::stats_of(const Node& node) const {
  NodeStats s;
  s.received = node.queue.received();
  s.dropped = node.queue.dropped();
  s.serviced = node.queue.serviced();
  s.internal_jobs = node.internal_jobs;
  s.internal_dropped = node.internal_dropped;
  s.queued_at_end = node.queue.queued();
  s.in_service_at_end = node.queue.in_service();
  s.max_queued = node.queue.max_queued();
  s.conserved = node.queue.conserved();
  return s;
}

RunResult Simulation::run() {
  if (ran_) throw std::logic_error("a Simulation runs only once");
  ran_ = true;
  schedule_initial_events();
  scheduler_.run_until(setup_.t_end);

  RunResult result{ledger_, {}, stats_of(*core_), {}, {}, {}, {}, uplinks_before_config_, scheduler_.fired(),
                   verifier_.misses()};
  for (const auto& node : satellites_) result.satellites.push_back(stats_of(node));
  for (const auto& stats : result.satellites) {
    if (!stats.conserved) throw std::logic_error("message conservation violated at a satellite");
  }
  if (!result.core.conserved) throw std::logic_error("message conservation violated at the core");
  result.final_phases.reserve(ues_.size());
  for (const auto& ue : ues_) {
    result.final_phases.push_back(ue.phase);
    result.requests_sent.push_back(ue.requests_sent);
    result.was_aggregator.push_back(ue.is_ga);
  }
  for (const auto& g : groups_) result.group_status.push_back(g.status);
  return result;
}

}  // namespace ntn::entities
