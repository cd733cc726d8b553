#pragma once

// Group aggregator logic and the source satellite's ticket check.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ntn/protocol/shares.hpp"
#include "ntn/rng.hpp"

namespace ntn::protocol {

struct GroupHandoverRequest {
  GroupId gid;
  Ticket ticket;
  /// Member slots whose shares were XORed into the ticket, in arrival order.
  std::vector<std::uint32_t> aggregated_commitment;

  friend bool operator==(const GroupHandoverRequest&, const GroupHandoverRequest&) = default;
};

/// State of one group aggregator for one handover epoch.
class GaState {
 public:
  GaState(GroupId gid, Bytes rand, std::size_t threshold, CommitmentMap commitment_map,
          std::size_t share_bytes = kDefaultShareBytes);

  const GroupId& gid() const { return gid_; }
  const Bytes& rand() const { return rand_; }
  std::size_t threshold() const { return threshold_; }
  const CommitmentMap& commitment_map() const { return commitment_map_; }
  const Ticket& ticket() const { return ticket_; }
  const std::vector<std::uint32_t>& aggregated_commitment() const { return aggregated_; }
  bool fired() const { return fired_; }

  /// Slot of a commitment in the map, if present.
  std::optional<std::uint32_t> slot_of(const Commitment& c) const;

 private:
  friend std::optional<GroupHandoverRequest> ga_on_broadcast(GaState&, const GroupId&, const Share&,
                                                             const HashFunction&);
  GroupId gid_;
  Bytes rand_;
  std::size_t threshold_;
  CommitmentMap commitment_map_;
  std::unordered_map<std::string, std::uint32_t> slots_;
  std::vector<bool> counted_;
  Ticket ticket_;
  std::vector<std::uint32_t> aggregated_;
  bool fired_ = false;
};

/// Processes one overheard (GID, share) broadcast.
///
/// Foreign groups, shares whose commitment is not in the map and shares that
/// were already counted are ignored. Returns the request exactly once: at the
/// first share that lifts the count strictly above the threshold.
std::optional<GroupHandoverRequest> ga_on_broadcast(GaState& state, const GroupId& gid, const Share& share,
                                                    const HashFunction& hash = default_hash());

/// XOR of the shares named by the request's slots equals its ticket. Unknown
/// slots, repeated slots and missing shares fail verification.
bool verify_ticket(const GroupHandoverRequest& req, const CommitmentShareMap& share_map,
                   const CommitmentMap& commitment_map);

/// Digest-addressed variant: the request names commitments rather than slots.
bool verify_ticket_by_digest(const Ticket& ticket, std::span<const Commitment> commitments,
                             const CommitmentShareMap& share_map);

/// floor(fraction * connected). Throws std::invalid_argument unless
/// connected >= 1 and 0 < fraction < 1.
std::size_t decide_threshold(std::size_t connected, double fraction);

/// k distinct members chosen uniformly at random, returned in ascending order.
/// Throws std::invalid_argument unless 1 <= k <= members.size().
std::vector<std::uint32_t> select_aggregators(std::span<const std::uint32_t> members, std::size_t k, Rng& rng);

}  // namespace ntn::protocol
