#pragma once

#include <cstdint>
#include <set>
#include <string_view>
#include <tuple>

#include "ntn/protocol/crypto.hpp"
#include "ntn/protocol/shares.hpp"

namespace ntn::protocol {

using RanId = std::uint32_t;

enum class GroupAction : std::uint8_t { SwitchToGroupHandover = 0x01, CancelGroupHandover = 0x02 };

std::string_view to_string(GroupAction a);

/// Signed group-handover broadcast. The signature covers action || nonce with
/// nonce = RAN-ID || RAND || GID || TimeStamp; RAND itself is not broadcast.
struct Notification {
  RanId ran_id = 0;
  GroupId gid;
  GroupAction action = GroupAction::SwitchToGroupHandover;
  std::uint64_t timestamp_ms = 0;
  Bytes signature;

  friend bool operator==(const Notification&, const Notification&) = default;
};

/// Canonical bytes that get signed.
Bytes notification_signing_payload(RanId ran_id, ByteView rand, const GroupId& gid, GroupAction action,
                                   std::uint64_t timestamp_ms);

Notification make_notification(const SatKeyPair& keys, RanId ran_id, ByteView rand, const GroupId& gid,
                               GroupAction action, std::uint64_t timestamp_ms,
                               const SignatureScheme& scheme = default_signature());

enum class VerifyOutcome { Accept, BadSignature, StaleTimestamp, Replay };

std::string_view to_string(VerifyOutcome v);

/// Notifications a UE has already accepted: (ran_id, gid, action, timestamp).
class SeenSet {
 public:
  bool contains(const Notification& n) const { return seen_.contains(key(n)); }
  void insert(const Notification& n) { seen_.insert(key(n)); }
  std::size_t size() const { return seen_.size(); }

 private:
  using Key = std::tuple<RanId, std::string, std::uint8_t, std::uint64_t>;
  static Key key(const Notification& n) {
    return {n.ran_id, n.gid.value, static_cast<std::uint8_t>(n.action), n.timestamp_ms};
  }
  std::set<Key> seen_;
};

/// Accepts iff the signature verifies under `public_key`, the timestamp lies
/// within `freshness_window_ms` of `now_ms`, and the notification has not been
/// accepted before. Accepted notifications are added to `seen`.
VerifyOutcome verify_notification(ByteView public_key, const Notification& n, ByteView rand,
                                  std::uint64_t freshness_window_ms, std::uint64_t now_ms, SeenSet& seen,
                                  const SignatureScheme& scheme = default_signature());

}  // namespace ntn::protocol
