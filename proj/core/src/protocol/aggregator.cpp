#include "ntn/protocol/aggregator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ntn::protocol {

GaState::GaState(GroupId gid, Bytes rand, std::size_t threshold, CommitmentMap commitment_map,
                 std::size_t share_bytes)
    : gid_(std::move(gid)),
      rand_(std::move(rand)),
      threshold_(threshold),
      commitment_map_(std::move(commitment_map)),
      counted_(commitment_map_.size(), false),
      ticket_(Ticket::zero(share_bytes)) {
  for (std::uint32_t i = 0; i < commitment_map_.size(); ++i) {
    const auto& d = commitment_map_[i].digest;
    if (!slots_.emplace(std::string(d.begin(), d.end()), i).second) {
      throw std::logic_error("duplicate digest in commitment map");
    }
  }
}

std::optional<std::uint32_t> GaState::slot_of(const Commitment& c) const {
  auto it = slots_.find(std::string(c.digest.begin(), c.digest.end()));
  if (it == slots_.end()) return std::nullopt;
  return it->second;
}

std::optional<GroupHandoverRequest> ga_on_broadcast(GaState& state, const GroupId& gid, const Share& share,
                                                    const HashFunction& hash) {
  if (gid != state.gid_) return std::nullopt;
  const auto slot = state.slot_of(commitment(gid, state.rand_, share, hash));
  if (!slot || state.counted_[*slot]) return std::nullopt;

  state.ticket_ = xor_aggregate(state.ticket_, share);
  state.counted_[*slot] = true;
  state.aggregated_.push_back(*slot);

  if (state.fired_ || state.aggregated_.size() <= state.threshold_) return std::nullopt;
  state.fired_ = true;
  return GroupHandoverRequest{state.gid_, state.ticket_, state.aggregated_};
}

bool verify_ticket(const GroupHandoverRequest& req, const CommitmentShareMap& share_map,
                   const CommitmentMap& commitment_map) {
  std::vector<bool> used(commitment_map.size(), false);
  Ticket acc = Ticket::zero(req.ticket.bytes.size());
  for (auto slot : req.aggregated_commitment) {
    if (slot >= commitment_map.size() || used[slot]) return false;
    used[slot] = true;
    const Share* share = share_map.find(commitment_map[slot]);
    if (share == nullptr || share->bytes.size() != acc.bytes.size()) return false;
    acc = xor_aggregate(acc, *share);
  }
  return acc == req.ticket;
}

bool verify_ticket_by_digest(const Ticket& ticket, std::span<const Commitment> commitments,
                             const CommitmentShareMap& share_map) {
  Ticket acc = Ticket::zero(ticket.bytes.size());
  for (std::size_t i = 0; i < commitments.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (commitments[j] == commitments[i]) return false;
    }
    const Share* share = share_map.find(commitments[i]);
    if (share == nullptr || share->bytes.size() != acc.bytes.size()) return false;
    acc = xor_aggregate(acc, *share);
  }
  return acc == ticket;
}

std::size_t decide_threshold(std::size_t connected, double fraction) {
  if (connected == 0) throw std::invalid_argument("threshold needs at least one connected member");
  if (!(fraction > 0.0 && fraction < 1.0)) throw std::invalid_argument("threshold fraction must lie in (0, 1)");
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(connected)));
}

std::vector<std::uint32_t> select_aggregators(std::span<const std::uint32_t> members, std::size_t k, Rng& rng) {
  if (k == 0 || k > members.size()) {
    throw std::invalid_argument("aggregator count must lie in [1, member count]");
  }
  std::vector<std::uint32_t> pool(members.begin(), members.end());
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace ntn::protocol
