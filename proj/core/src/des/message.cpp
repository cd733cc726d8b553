#include "ntn/des/message.hpp"

#include <string>

namespace ntn::des {

std::string_view to_string(MessageClass c) {
  switch (c) {
    case MessageClass::UeRequest: return "ue-request";
    case MessageClass::UeRetransmission: return "ue-retransmission";
    case MessageClass::ShareBroadcast: return "share-broadcast";
    case MessageClass::GaRequest: return "ga-request";
    case MessageClass::InterSatellite: return "inter-satellite";
    case MessageClass::CoreResponse: return "core-response";
    case MessageClass::AttachRequest: return "attach-request";
    case MessageClass::ConfigDelivery: return "config-delivery";
    case MessageClass::NotificationBroadcast: return "notification-broadcast";
    case MessageClass::CoreNotify: return "core-notify";
  }
  return "unknown";
}

std::optional<MessageClass> parse_message_class(std::string_view s) {
  for (auto c : kAllMessageClasses) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

std::string to_string(const Endpoint& e) {
  switch (e.kind) {
    case EndpointKind::Ue: return "UE" + std::to_string(e.index);
    case EndpointKind::Satellite: return "SAT" + std::to_string(e.index + 1);
    case EndpointKind::Core: return "CORE";
    case EndpointKind::Group: return "GROUP" + std::to_string(e.index);
  }
  return "?";
}

}  // namespace ntn::des
