#pragma once

// Additive threshold secret sharing values: per-member shares, the hash
// commitments handed to aggregators, and XOR tickets.

#include <compare>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "ntn/protocol/bytes.hpp"
#include "ntn/protocol/crypto.hpp"

namespace ntn::protocol {

inline constexpr std::size_t kDefaultShareBytes = 16;
inline constexpr std::size_t kDefaultRandBytes = 16;

struct GroupId {
  std::string value;

  friend auto operator<=>(const GroupId&, const GroupId&) = default;
};

struct Share {
  Bytes bytes;

  friend bool operator==(const Share&, const Share&) = default;
};

struct Commitment {
  Bytes digest;

  friend bool operator==(const Commitment&, const Commitment&) = default;
};

/// Commitments of all group members, indexed by member slot.
using CommitmentMap = std::vector<Commitment>;

/// Commitment -> share, held by the satellite that issued the shares.
class CommitmentShareMap {
 public:
  /// Throws std::logic_error on a duplicate commitment.
  void insert(const Commitment& c, Share s);
  const Share* find(const Commitment& c) const;
  std::size_t size() const { return map_.size(); }

 private:
  std::unordered_map<std::string, Share> map_;
};

struct Ticket {
  Bytes bytes;

  static Ticket zero(std::size_t length) { return Ticket{Bytes(length, 0)}; }
  bool is_zero() const;

  friend bool operator==(const Ticket&, const Ticket&) = default;
};

struct ShareBundle {
  std::vector<Share> shares;
  CommitmentMap commitments;
  CommitmentShareMap share_map;
};

/// Hash(GID || RAND || Share) over the length-prefixed canonical encoding.
Commitment commitment(const GroupId& gid, ByteView rand, const Share& share,
                      const HashFunction& hash = default_hash());

/// Bytewise XOR. Throws std::invalid_argument on a length mismatch.
Ticket xor_aggregate(const Ticket& ticket, const Share& share);

/// n fresh shares drawn from a ChaCha20 stream keyed by (seed, gid, rand),
/// their commitments in member order, and the commitment -> share map.
/// Throws std::invalid_argument for n == 0 and std::logic_error if two
/// commitments collide.
ShareBundle generate_shares(const GroupId& gid, ByteView rand, std::size_t n, std::uint64_t seed,
                            std::size_t share_bytes = kDefaultShareBytes,
                            const HashFunction& hash = default_hash());

}  // namespace ntn::protocol
