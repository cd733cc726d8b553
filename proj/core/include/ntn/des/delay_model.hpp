#pragma once

#include <span>

#include "ntn/des/message.hpp"
#include "ntn/des/sim_time.hpp"

namespace ntn::des {

enum class PropagationMode { Fixed, Distance };

/// Link and processing delays of the message processing model.
/// Defaults are the experiment's table values.
struct DelayModel {
  SimTime inter_satellite = SimTime::from_us(1000);
  SimTime ground_satellite = SimTime::from_us(3000);
  SimTime core_satellite = SimTime::from_us(10000);
  SimTime transmission = SimTime::from_us(1);
  SimTime physical = SimTime::from_us(50);
  SimTime logic = SimTime::from_us(50);
  SimTime encrypt_decrypt = SimTime::from_us(100);
  SimTime sign_verify = SimTime::from_us(300);
  SimTime hash = SimTime::from_us(50);
  SimTime batch_hash = SimTime::from_us(100);
  /// UE-to-UE share broadcast on the ground.
  SimTime ground_broadcast = SimTime::from_us(1000);
};

/// Fixed per-link-class propagation plus transmission delay.
/// Throws std::invalid_argument for pairs with no link (e.g. UE <-> core).
SimTime link_delay(const DelayModel& model, EndpointKind sender, EndpointKind receiver);

/// Speed-of-light propagation over `distance_km` plus transmission delay.
SimTime distance_link_delay(const DelayModel& model, double distance_km);

SimTime crypto_cost(const DelayModel& model, CryptoOp op);

/// Sum of crypto work items with no base cost.
SimTime work_time(const DelayModel& model, std::span<const CryptoOp> ops);

/// Physical-layer + logic + the message's crypto work items.
SimTime service_time(const DelayModel& model, const Message& msg);

}  // namespace ntn::des
