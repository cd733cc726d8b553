#pragma once

// Simulator-internal message payloads. Protocol values that have a wire
// format travel encoded so receivers exercise the decoders.

#include <cstdint>
#include <memory>
#include <vector>

#include "ntn/entities/types.hpp"

namespace ntn::entities::detail {

using ConfigPtr = std::shared_ptr<const HandoverConfig>;
using ConfigList = std::vector<ConfigPtr>;

struct HoRequest {
  std::uint32_t ue;
};
struct HoForward {
  std::uint32_t ue;
};
struct HoResponse {
  std::uint32_t ue;
  ConfigPtr config;
};
struct GroupForward {
  std::uint32_t group;
  protocol::GroupId gid;
  std::shared_ptr<const std::vector<std::uint32_t>> members;
};
struct GroupResponse {
  std::uint32_t group;
  std::shared_ptr<const ConfigList> configs;
  std::shared_ptr<const protocol::CommitmentMap> commitments;
};
struct ConfigPayload {
  ConfigPtr config;
};
struct AttachRequest {
  std::uint32_t ue;
};
struct AttachAck {};
struct GaProvision {
  std::uint32_t group;
  std::shared_ptr<const protocol::CommitmentMap> commitments;
  std::size_t threshold;
  Bytes rand;
};
struct NotificationWire {
  std::uint32_t group;
  std::shared_ptr<const Bytes> wire;
};
struct ShareWire {
  std::uint32_t group;
  std::shared_ptr<const Bytes> wire;
};
struct GaRequestWire {
  std::shared_ptr<const Bytes> wire;
  bool digest;
};
struct MonitorJob {
  std::uint32_t group;
};
struct CoreNotice {};

}  // namespace ntn::entities::detail
