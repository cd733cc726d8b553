#pragma once

#include <any>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ntn/des/sim_time.hpp"

namespace ntn::des {

enum class MessageClass : std::uint8_t {
  UeRequest,
  UeRetransmission,
  ShareBroadcast,
  GaRequest,
  InterSatellite,
  CoreResponse,
  AttachRequest,
  ConfigDelivery,
  NotificationBroadcast,
  CoreNotify,
};

inline constexpr std::size_t kMessageClassCount = 10;

inline constexpr std::array<MessageClass, kMessageClassCount> kAllMessageClasses = {
    MessageClass::UeRequest,      MessageClass::UeRetransmission,      MessageClass::ShareBroadcast,
    MessageClass::GaRequest,      MessageClass::InterSatellite,        MessageClass::CoreResponse,
    MessageClass::AttachRequest,  MessageClass::ConfigDelivery,        MessageClass::NotificationBroadcast,
    MessageClass::CoreNotify,
};

std::string_view to_string(MessageClass c);
std::optional<MessageClass> parse_message_class(std::string_view s);

enum class CryptoOp : std::uint8_t { Encrypt, Decrypt, Sign, Verify, Hash, BatchHash };

enum class EndpointKind : std::uint8_t { Ue, Satellite, Core, Group };

struct Endpoint {
  EndpointKind kind = EndpointKind::Ue;
  std::uint32_t index = 0;

  static constexpr Endpoint ue(std::uint32_t i) { return {EndpointKind::Ue, i}; }
  static constexpr Endpoint satellite(std::uint32_t i) { return {EndpointKind::Satellite, i}; }
  static constexpr Endpoint core() { return {EndpointKind::Core, 0}; }
  /// Over-the-air broadcast to the members of a group; fanned out by the engine.
  static constexpr Endpoint group(std::uint32_t i) { return {EndpointKind::Group, i}; }

  friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

/// "UE12", "SAT1" (1-based for satellites), "CORE", "GROUP3".
std::string to_string(const Endpoint& e);

inline constexpr std::uint32_t kDefaultPacketBytes = 3000;

struct Message {
  std::uint64_t id = 0;
  MessageClass cls = MessageClass::UeRequest;
  Endpoint sender;
  Endpoint receiver;
  std::uint32_t size_bytes = kDefaultPacketBytes;
  /// Work the receiving processor performs on top of the base phy+logic cost.
  std::vector<CryptoOp> crypto_ops;
  SimTime created_at;
  std::optional<SimTime> enqueued_at;
  std::optional<SimTime> service_start_at;
  std::any payload;

  bool internal() const { return sender == receiver; }
};

}  // namespace ntn::des
