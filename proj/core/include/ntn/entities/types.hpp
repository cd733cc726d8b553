#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "ntn/des/sim_time.hpp"
#include "ntn/geometry.hpp"
#include "ntn/protocol/aggregator.hpp"
#include "ntn/protocol/notification.hpp"

namespace ntn::entities {

using des::SimTime;
using protocol::Bytes;

enum class Protocol : std::uint8_t { Ho, Gho };

std::string_view to_string(Protocol p);
std::optional<Protocol> parse_protocol(std::string_view s);

enum class UePhase : std::uint8_t {
  Connected,
  AwaitingHoResponse,
  GroupNotified,
  ShareBroadcast,
  AwaitingGroupConfig,
  Configured,
  Attaching,
  Attached,
  Failed,
};

std::string_view to_string(UePhase p);

/// What a UE receives from the source once the target has accepted it.
struct HandoverConfig {
  Bytes config_token;
  /// Share for the next epoch (group handover only).
  std::optional<protocol::Share> new_share;
  Bytes rand_target;
  Bytes pk_target;
  Bytes kgnb_token;
};

struct UeState {
  std::uint32_t id = 0;
  geometry::GroundPoint position;
  std::optional<std::uint32_t> group;
  bool is_ga = false;
  bool idle = false;
  /// Outside the source footprint; it can no longer reach SAT_1.
  bool left_coverage = false;
  UePhase phase = UePhase::Connected;

  std::uint32_t retransmit_count = 0;
  std::uint32_t attach_retries = 0;
  /// Handover requests and share broadcasts this UE originated.
  std::uint32_t requests_sent = 0;
  std::optional<SimTime> timer;
  std::uint64_t timer_generation = 0;

  std::optional<protocol::Share> share;
  bool share_sent = false;
  /// Accepted a SwitchToGroupHandover and has not been cancelled since.
  bool via_group = false;
  std::optional<SimTime> request_sent_at;
  std::optional<SimTime> config_received_at;
  std::optional<SimTime> attached_at;
  std::optional<SimTime> failed_at;
  std::shared_ptr<const HandoverConfig> config;

  protocol::SeenSet seen;
  /// Aggregator state, present once the source provisioned this UE as a GA.
  std::optional<protocol::GaState> ga;
  SimTime ga_lane_free;
  std::shared_ptr<const Bytes> ga_request;
};

/// Source-side lifecycle of one group.
enum class GroupStatus : std::uint8_t { Monitoring, Notified, Requested, Configured, Cancelled };

std::string_view to_string(GroupStatus s);

struct GroupRuntime {
  protocol::GroupId gid;
  std::vector<std::uint32_t> members;
  geometry::GroundPoint centroid;
  /// Epoch RAND and shares issued by the source satellite.
  Bytes rand;
  std::shared_ptr<const protocol::CommitmentMap> commitments;
  protocol::CommitmentShareMap share_map;
  std::size_t threshold = 0;
  std::vector<std::uint32_t> aggregators;
  GroupStatus status = GroupStatus::Monitoring;
  std::optional<SimTime> forwarded_at;
  std::shared_ptr<const std::vector<std::shared_ptr<const HandoverConfig>>> configs;
};

/// Target-side record of shares issued for the next epoch.
struct NextEpoch {
  Bytes rand;
  protocol::ShareBundle bundle;
};

}  // namespace ntn::entities
