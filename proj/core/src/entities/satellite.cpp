#include <algorithm>

#include "ntn/entities/simulation.hpp"
#include "ntn/protocol/wire.hpp"
#include "payloads.hpp"

namespace ntn::entities {

using des::CryptoOp;
using des::Endpoint;
using des::MessageClass;
using metrics::RecordKind;

namespace {

const Endpoint kSource = Endpoint::satellite(0);
const Endpoint kTarget = Endpoint::satellite(1);

bool still_connected(const UeState& ue) {
  if (ue.config_received_at || ue.left_coverage) return false;
  switch (ue.phase) {
    case UePhase::Connected:
    case UePhase::GroupNotified:
    case UePhase::ShareBroadcast:
    case UePhase::AwaitingGroupConfig: return true;
    default: return false;
  }
}

std::size_t slot_of(const GroupRuntime& g, std::uint32_t ue) {
  return static_cast<std::size_t>(std::find(g.members.begin(), g.members.end(), ue) - g.members.begin());
}

}  // namespace

Simulation::Outcome Simulation::satellite_handle(std::uint32_t sat, const des::Message& m) {
  if (sat == 0) {
    switch (m.cls) {
      case MessageClass::UeRequest:
      case MessageClass::UeRetransmission: return source_ue_request(m);
      case MessageClass::InterSatellite: return source_target_response(m);
      case MessageClass::GaRequest: return source_ga_request(m);
      case MessageClass::NotificationBroadcast:
        if (const auto* job = std::any_cast<detail::MonitorJob>(&m.payload)) return source_monitor_group(job->group);
        return {};
      default: return {};
    }
  }
  if (sat == 1) {
    if (m.cls == MessageClass::AttachRequest) return target_attach(m);
    if (m.cls == MessageClass::InterSatellite) {
      if (std::any_cast<detail::HoForward>(&m.payload) != nullptr) return target_ho_request(m);
      if (std::any_cast<detail::GroupForward>(&m.payload) != nullptr) return target_group_request(m);
    }
  }
  return {};
}

Simulation::Outcome Simulation::source_ue_request(const des::Message& m) {
  const auto id = std::any_cast<const detail::HoRequest&>(m.payload).ue;
  auto& entry = ho_[id];
  if (!entry.config) {
    const auto& ue = ues_[id];
    if (ue.group && groups_[*ue.group].status == GroupStatus::Configured) {
      const auto& grp = groups_[*ue.group];
      entry.config = (*grp.configs)[slot_of(grp, id)];
    }
  }
  if (entry.config) {
    return {{make(MessageClass::ConfigDelivery, kSource, Endpoint::ue(id), {}, detail::ConfigPayload{entry.config})},
            {CryptoOp::Encrypt}};
  }
  if (entry.in_flight_until && now() < *entry.in_flight_until) return {};
  entry.in_flight_until = now() + setup_.ho_timeout;
  return {{make(MessageClass::InterSatellite, kSource, kTarget, {CryptoOp::Decrypt}, detail::HoForward{id})}, {}};
}

Simulation::Outcome Simulation::source_target_response(const des::Message& m) {
  if (const auto* r = std::any_cast<detail::HoResponse>(&m.payload)) {
    auto& entry = ho_[r->ue];
    if (entry.config) return {};
    entry.config = r->config;
    entry.in_flight_until.reset();
    return {{make(MessageClass::ConfigDelivery, kSource, Endpoint::ue(r->ue), {}, detail::ConfigPayload{r->config}),
             make(MessageClass::CoreNotify, kSource, Endpoint::core(), {}, detail::CoreNotice{})},
            {CryptoOp::Encrypt}};
  }
  const auto* r = std::any_cast<detail::GroupResponse>(&m.payload);
  if (r == nullptr) return {};
  auto& grp = groups_[r->group];
  if (grp.status != GroupStatus::Requested && grp.status != GroupStatus::Notified) return {};
  grp.status = GroupStatus::Configured;
  grp.configs = r->configs;
  Outcome o;
  o.out.reserve(grp.members.size() + 1);
  for (std::size_t k = 0; k < grp.members.size(); ++k) {
    o.out.push_back(make(MessageClass::ConfigDelivery, kSource, Endpoint::ue(grp.members[k]), {},
                         detail::ConfigPayload{(*r->configs)[k]}));
    o.work.push_back(CryptoOp::Encrypt);
  }
  o.out.push_back(make(MessageClass::CoreNotify, kSource, Endpoint::core(), {}, detail::CoreNotice{}));
  return o;
}

Simulation::Outcome Simulation::source_ga_request(const des::Message& m) {
  const auto& w = std::any_cast<const detail::GaRequestWire&>(m.payload);
  std::optional<std::uint32_t> g;
  bool valid = false;
  try {
    if (w.digest) {
      const auto req = protocol::decode_digest_group_request(*w.wire);
      if (auto it = group_index_.find(req.gid.value); it != group_index_.end()) {
        g = it->second;
        const auto& grp = groups_[*g];
        if (grp.status == GroupStatus::Monitoring || grp.status == GroupStatus::Cancelled) return {};
        valid = req.commitments.size() > grp.threshold &&
                protocol::verify_ticket_by_digest(req.ticket, req.commitments, grp.share_map);
      }
    } else {
      const auto req = protocol::decode_group_request(*w.wire);
      if (auto it = group_index_.find(req.gid.value); it != group_index_.end()) {
        g = it->second;
        const auto& grp = groups_[*g];
        if (grp.status == GroupStatus::Monitoring || grp.status == GroupStatus::Cancelled) return {};
        valid = req.aggregated_commitment.size() > grp.threshold &&
                protocol::verify_ticket(req, grp.share_map, *grp.commitments);
      }
    }
  } catch (const protocol::DecodeError&) {
    valid = false;
  }
  if (!g || !valid) {
    emit(RecordKind::VerificationFailure, kSource);
    return {};
  }

  auto& grp = groups_[*g];
  if (grp.status == GroupStatus::Configured) {
    const auto requester = m.sender.index;
    return {{make(MessageClass::ConfigDelivery, kSource, m.sender, {},
                  detail::ConfigPayload{(*grp.configs)[slot_of(grp, requester)]})},
            {CryptoOp::Encrypt}};
  }
  if (grp.status == GroupStatus::Requested && now() < *grp.forwarded_at + setup_.gho_timeout) return {};
  grp.status = GroupStatus::Requested;
  grp.forwarded_at = now();
  auto members = std::make_shared<const std::vector<std::uint32_t>>(grp.members);
  return {{make(MessageClass::InterSatellite, kSource, kTarget, {CryptoOp::Decrypt},
                detail::GroupForward{*g, grp.gid, std::move(members)})},
          {}};
}

Simulation::Outcome Simulation::source_monitor_group(std::uint32_t group) {
  auto& grp = groups_[group];
  std::vector<std::uint32_t> connected;
  for (auto member : grp.members) {
    if (still_connected(ues_[member])) connected.push_back(member);
  }
  const auto sign = [&](protocol::GroupAction action) {
    const auto n = protocol::make_notification(keys_[0], setup_.satellites[0].id, grp.rand, grp.gid, action,
                                               static_cast<std::uint64_t>(now().us() / 1000));
    return make(MessageClass::NotificationBroadcast, kSource, Endpoint::group(group), {},
                detail::NotificationWire{group, std::make_shared<const Bytes>(protocol::encode(n))});
  };

  if (grp.status == GroupStatus::Monitoring) {
    if (connected.size() < setup_.min_group_size) return {};
    grp.threshold = protocol::decide_threshold(connected.size(), setup_.threshold_fraction);
    grp.aggregators =
        protocol::select_aggregators(connected, std::min(setup_.k_ga, connected.size()), source_rng_);
    grp.status = GroupStatus::Notified;
    Outcome o;
    o.out.push_back(sign(protocol::GroupAction::SwitchToGroupHandover));
    o.work.push_back(CryptoOp::Sign);
    for (auto ga : grp.aggregators) {
      o.out.push_back(make(MessageClass::ConfigDelivery, kSource, Endpoint::ue(ga), {},
                           detail::GaProvision{group, grp.commitments, grp.threshold, grp.rand}));
      o.work.push_back(CryptoOp::Encrypt);
    }
    return o;
  }
  if ((grp.status == GroupStatus::Notified || grp.status == GroupStatus::Requested) &&
      connected.size() < setup_.min_group_size) {
    grp.status = GroupStatus::Cancelled;
    return {{sign(protocol::GroupAction::CancelGroupHandover)}, {CryptoOp::Sign}};
  }
  return {};
}

std::shared_ptr<const HandoverConfig> Simulation::issue_config(std::optional<protocol::Share> share, Bytes rand) {
  auto cfg = std::make_shared<HandoverConfig>();
  const auto token = [&] {
    Bytes b(32);
    for (std::size_t i = 0; i < b.size(); i += 8) {
      const auto v = target_rng_.next_u64();
      for (std::size_t k = 0; k < 8; ++k) b[i + k] = static_cast<std::uint8_t>(v >> (8 * k));
    }
    return b;
  };
  cfg->config_token = token();
  cfg->new_share = std::move(share);
  cfg->rand_target = std::move(rand);
  cfg->pk_target = keys_[1].public_key;
  cfg->kgnb_token = token();
  return cfg;
}

Simulation::Outcome Simulation::target_ho_request(const des::Message& m) {
  const auto id = std::any_cast<const detail::HoForward&>(m.payload).ue;
  return {{make(MessageClass::InterSatellite, kTarget, kSource, {CryptoOp::Decrypt},
                detail::HoResponse{id, issue_config(std::nullopt, target_rand_)})},
          {CryptoOp::Encrypt}};
}

Simulation::Outcome Simulation::target_group_request(const des::Message& m) {
  const auto& req = std::any_cast<const detail::GroupForward&>(m.payload);
  auto it = next_epoch_.find(req.gid.value);
  if (it == next_epoch_.end()) {
    Bytes rand(setup_.rand_bytes);
    protocol::deterministic_bytes(rand, protocol::derive_seed(setup_.seed, "rand|target|" + req.gid.value));
    auto bundle = protocol::generate_shares(req.gid, rand, req.members->size(),
                                            mix_seed(setup_.seed, label_hash("target-shares")), setup_.share_bytes);
    it = next_epoch_.emplace(req.gid.value, NextEpoch{std::move(rand), std::move(bundle)}).first;
  }
  const auto& epoch = it->second;
  auto configs = std::make_shared<detail::ConfigList>();
  configs->reserve(req.members->size());
  for (std::size_t k = 0; k < req.members->size(); ++k) {
    configs->push_back(issue_config(epoch.bundle.shares[k], epoch.rand));
  }
  auto commitments = std::make_shared<const protocol::CommitmentMap>(epoch.bundle.commitments);
  return {{make(MessageClass::InterSatellite, kTarget, kSource, {CryptoOp::Decrypt},
                detail::GroupResponse{req.group, std::move(configs), std::move(commitments)})},
          {CryptoOp::BatchHash, CryptoOp::Encrypt}};
}

Simulation::Outcome Simulation::target_attach(const des::Message& m) {
  const auto id = std::any_cast<const detail::AttachRequest&>(m.payload).ue;
  return {{make(MessageClass::ConfigDelivery, kTarget, Endpoint::ue(id), {}, detail::AttachAck{})},
          {CryptoOp::Encrypt}};
}

}  // namespace ntn::entities
