#include <algorithm>

#include "ntn/entities/simulation.hpp"
#include "ntn/protocol/wire.hpp"
#include "payloads.hpp"

namespace ntn::entities {

using des::CryptoOp;
using des::Endpoint;
using des::EventKind;
using des::MessageClass;
using metrics::RecordKind;

namespace {

bool awaiting_group(UePhase p) {
  return p == UePhase::GroupNotified || p == UePhase::ShareBroadcast || p == UePhase::AwaitingGroupConfig;
}

}  // namespace

SimTime Simulation::protocol_timeout(const UeState& ue) const {
  return ue.via_group ? setup_.gho_timeout : setup_.ho_timeout;
}

void Simulation::arm_timer(UeState& ue, SimTime after) {
  const auto generation = ++ue.timer_generation;
  ue.timer = now() + after;
  scheduler_.schedule_after(after, EventKind::TimerExpiry, Endpoint::ue(ue.id),
                            [this, id = ue.id, generation] { ue_timer(id, generation); });
}

void Simulation::cancel_timer(UeState& ue) {
  ++ue.timer_generation;
  ue.timer.reset();
}

void Simulation::ue_send_request(UeState& ue, MessageClass cls) {
  ++ue.requests_sent;
  if (!ue.config_received_at) ++uplinks_before_config_[ue.id];
  send(make(cls, Endpoint::ue(ue.id), Endpoint::satellite(0), {CryptoOp::Decrypt}, detail::HoRequest{ue.id}));
}

void Simulation::ue_broadcast_share(UeState& ue) {
  const auto g = *ue.group;
  ++ue.requests_sent;
  ue.share_sent = true;
  auto wire = std::make_shared<const Bytes>(protocol::encode(protocol::ShareBroadcast{groups_[g].gid, *ue.share}));
  send(make(MessageClass::ShareBroadcast, Endpoint::ue(ue.id), Endpoint::group(g), {},
            detail::ShareWire{g, std::move(wire)}));
}

void Simulation::send_attach(UeState& ue) {
  send(make(MessageClass::AttachRequest, Endpoint::ue(ue.id), Endpoint::satellite(1), {CryptoOp::Decrypt},
            detail::AttachRequest{ue.id}));
}

void Simulation::ue_trigger(std::uint32_t id) {
  auto& ue = ues_[id];
  if (ue.config_received_at || ue.phase == UePhase::Failed || ue.left_coverage) return;
  const auto mark_sent = [&] {
    if (ue.request_sent_at) return;
    ue.request_sent_at = now();
    emit(RecordKind::RequestSent, Endpoint::ue(id));
  };
  switch (ue.phase) {
    case UePhase::Connected:
      mark_sent();
      ue.phase = UePhase::AwaitingHoResponse;
      ue_send_request(ue, MessageClass::UeRequest);
      arm_timer(ue, setup_.ho_timeout);
      break;
    case UePhase::GroupNotified:
      mark_sent();
      ue.phase = UePhase::ShareBroadcast;
      ue_broadcast_share(ue);
      arm_timer(ue, setup_.gho_timeout);
      break;
    case UePhase::AwaitingGroupConfig:
      // An aggregator that fired before its own trigger; its timer is running.
      if (!ue.share_sent) {
        mark_sent();
        ue_broadcast_share(ue);
      }
      break;
    default: break;
  }
}

void Simulation::ue_timer(std::uint32_t id, std::uint64_t generation) {
  auto& ue = ues_[id];
  if (generation != ue.timer_generation) return;
  ue.timer.reset();
  switch (ue.phase) {
    case UePhase::AwaitingHoResponse:
      if (ue.retransmit_count < setup_.max_retransmissions) {
        ++ue.retransmit_count;
        ue_send_request(ue, MessageClass::UeRetransmission);
        arm_timer(ue, setup_.ho_timeout);
      }
      break;
    case UePhase::GroupNotified:
    case UePhase::ShareBroadcast:
    case UePhase::AwaitingGroupConfig:
      if (ue.retransmit_count < setup_.max_retransmissions) {
        ++ue.retransmit_count;
        if (ue.share_sent) ue_broadcast_share(ue);
        if (ue.ga_request) ga_send_request(ue);
        arm_timer(ue, setup_.gho_timeout);
      }
      break;
    case UePhase::Attaching:
      if (ue.attach_retries < setup_.max_retransmissions) {
        ++ue.attach_retries;
        send_attach(ue);
        arm_timer(ue, protocol_timeout(ue));
      } else {
        ue.phase = UePhase::Failed;
        ue.failed_at = now();
        emit(RecordKind::AttachAbandoned, Endpoint::ue(id));
      }
      break;
    default: break;
  }
}

void Simulation::ue_exit(std::uint32_t id) {
  auto& ue = ues_[id];
  ue.left_coverage = true;
  if (ue.config_received_at || ue.phase == UePhase::Failed) return;
  if (ue.request_sent_at) {
    cancel_timer(ue);
    ue.phase = UePhase::Failed;
    ue.failed_at = now();
    emit(RecordKind::Failed, Endpoint::ue(id));
  }
  // Either way the group lost a member it was counting on.
  if (ue.group) {
    const auto status = groups_[*ue.group].status;
    if (status == GroupStatus::Notified || status == GroupStatus::Requested) schedule_monitor(*ue.group);
  }
}

void Simulation::ue_configured(UeState& ue, std::shared_ptr<const HandoverConfig> config) {
  if (!ue.request_sent_at) {
    // Configured through the group before its own trigger fired.
    ue.request_sent_at = now();
    emit(RecordKind::RequestSent, Endpoint::ue(ue.id));
  }
  ue.config_received_at = now();
  emit(RecordKind::ConfigReceived, Endpoint::ue(ue.id));
  if (config->new_share) ue.share = *config->new_share;
  ue.config = std::move(config);
  cancel_timer(ue);
  ue.phase = UePhase::Configured;
  send_attach(ue);
  ue.phase = UePhase::Attaching;
  arm_timer(ue, protocol_timeout(ue));
}

void Simulation::ue_receive(std::uint32_t id, const des::Message& m) {
  auto& ue = ues_[id];
  if (ue.phase == UePhase::Failed) return;
  if (const auto* c = std::any_cast<detail::ConfigPayload>(&m.payload)) {
    // Source downlink; unreachable once the UE has left the footprint.
    if (!ue.config_received_at && !ue.left_coverage) ue_configured(ue, c->config);
    return;
  }
  if (std::any_cast<detail::AttachAck>(&m.payload) != nullptr) {
    if (ue.phase != UePhase::Attaching) return;
    cancel_timer(ue);
    ue.phase = UePhase::Attached;
    ue.attached_at = now();
    emit(RecordKind::Attached, Endpoint::ue(id));
    return;
  }
  if (const auto* p = std::any_cast<detail::GaProvision>(&m.payload)) {
    if (ue.ga || ue.group != p->group || ue.config_received_at) return;
    ue.ga.emplace(groups_[p->group].gid, p->rand, p->threshold, *p->commitments, setup_.share_bytes);
    ue.is_ga = true;
  }
}

void Simulation::ue_notification(std::uint32_t id, const protocol::Notification& n) {
  auto& ue = ues_[id];
  if (!ue.group || ue.phase == UePhase::Failed || ue.left_coverage) return;
  const auto& grp = groups_[*ue.group];
  const auto now_ms = static_cast<std::uint64_t>(now().us() / 1000);
  const auto outcome =
      protocol::verify_notification(keys_[0].public_key, n, grp.rand,
                                    static_cast<std::uint64_t>(setup_.freshness_window.us() / 1000), now_ms,
                                    ue.seen, verifier_);
  if (outcome != protocol::VerifyOutcome::Accept) return;

  if (n.action == protocol::GroupAction::SwitchToGroupHandover) {
    if (ue.phase == UePhase::Connected && !ue.config_received_at) {
      ue.phase = UePhase::GroupNotified;
      ue.via_group = true;
    }
    return;
  }
  if (!ue.via_group || ue.config_received_at || !awaiting_group(ue.phase)) return;
  ue.via_group = false;
  ue.ga_request.reset();
  cancel_timer(ue);
  if (ue.share_sent) {
    ue.phase = UePhase::AwaitingHoResponse;
    ue_send_request(ue, MessageClass::UeRequest);
    arm_timer(ue, setup_.ho_timeout);
  } else {
    ue.phase = UePhase::Connected;
  }
}

void Simulation::ga_hear_share(std::uint32_t id, std::shared_ptr<const Bytes> wire) {
  auto& ue = ues_[id];
  if (!ue.ga || ue.phase == UePhase::Failed) return;
  // One hash per share on the aggregator's own serial lane.
  ue.ga_lane_free = std::max(now(), ue.ga_lane_free) + setup_.delays.hash;
  scheduler_.schedule(ue.ga_lane_free, EventKind::ProcessorFree, Endpoint::ue(id),
                      [this, id, wire = std::move(wire)] { ga_process_share(id, *wire); });
}

void Simulation::ga_process_share(std::uint32_t id, const Bytes& wire) {
  auto& ue = ues_[id];
  if (!ue.ga || !ue.via_group || ue.phase == UePhase::Failed || ue.config_received_at) return;
  const auto heard = protocol::decode_share_broadcast(wire);
  const auto req = protocol::ga_on_broadcast(*ue.ga, heard.gid, heard.share);
  if (!req) return;

  if (setup_.digest_addressing) {
    protocol::DigestGroupRequest d{req->gid, req->ticket, {}};
    for (auto slot : req->aggregated_commitment) d.commitments.push_back(ue.ga->commitment_map()[slot]);
    ue.ga_request = std::make_shared<const Bytes>(protocol::encode(d));
  } else {
    ue.ga_request = std::make_shared<const Bytes>(protocol::encode(*req));
  }
  ga_send_request(ue);
  if (ue.phase == UePhase::GroupNotified) {
    ue.phase = UePhase::AwaitingGroupConfig;
    arm_timer(ue, setup_.gho_timeout);
  } else if (ue.phase == UePhase::ShareBroadcast) {
    ue.phase = UePhase::AwaitingGroupConfig;
  }
}

void Simulation::ga_send_request(UeState& ue) {
  if (!ue.config_received_at) ++uplinks_before_config_[ue.id];
  send(make(MessageClass::GaRequest, Endpoint::ue(ue.id), Endpoint::satellite(0), {CryptoOp::BatchHash},
            detail::GaRequestWire{ue.ga_request, setup_.digest_addressing}));
}

}  // namespace ntn::entities
