#pragma once

// Bit-exact wire encodings. Length prefixes and integers are 4-byte
// big-endian; timestamps are 8-byte big-endian milliseconds.

#include "ntn/protocol/aggregator.hpp"
#include "ntn/protocol/notification.hpp"

namespace ntn::protocol {

struct ShareBroadcast {
  GroupId gid;
  Share share;

  friend bool operator==(const ShareBroadcast&, const ShareBroadcast&) = default;
};

/// lp(GID) || Share. Nothing else is broadcast.
Bytes encode(const ShareBroadcast& b);
/// Share length is whatever follows the GID.
ShareBroadcast decode_share_broadcast(ByteView in);

/// lp(GID) || lp(Ticket) || count || index...
Bytes encode(const GroupHandoverRequest& r);
GroupHandoverRequest decode_group_request(ByteView in);

/// Group request that names commitments by digest instead of slot.
struct DigestGroupRequest {
  GroupId gid;
  Ticket ticket;
  std::vector<Commitment> commitments;

  friend bool operator==(const DigestGroupRequest&, const DigestGroupRequest&) = default;
};

/// lp(GID) || lp(Ticket) || count || lp(digest)...
Bytes encode(const DigestGroupRequest& r);
DigestGroupRequest decode_digest_group_request(ByteView in);

/// lp(RAN-ID) || lp(GID) || action || timestamp || signature
Bytes encode(const Notification& n);
/// Throws DecodeError on truncation, trailing bytes or an unknown action byte.
Notification decode_notification(ByteView in);

}  // namespace ntn::protocol
