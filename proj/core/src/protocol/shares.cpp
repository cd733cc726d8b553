#include "ntn/protocol/shares.hpp"

#include <algorithm>
#include <stdexcept>

namespace ntn::protocol {
namespace {

std::string key_of(const Commitment& c) { return {c.digest.begin(), c.digest.end()}; }

}  // namespace

void CommitmentShareMap::insert(const Commitment& c, Share s) {
  if (!map_.emplace(key_of(c), std::move(s)).second) {
    throw std::logic_error("duplicate commitment in share map");
  }
}

const Share* CommitmentShareMap::find(const Commitment& c) const {
  auto it = map_.find(key_of(c));
  return it == map_.end() ? nullptr : &it->second;
}

bool Ticket::is_zero() const {
  return std::all_of(bytes.begin(), bytes.end(), [](std::uint8_t b) { return b == 0; });
}

Commitment commitment(const GroupId& gid, ByteView rand, const Share& share, const HashFunction& hash) {
  ByteWriter w;
  w.prefixed(gid.value).prefixed(rand).prefixed(share.bytes);
  return Commitment{hash.digest(w.bytes())};
}

Ticket xor_aggregate(const Ticket& ticket, const Share& share) {
  if (ticket.bytes.size() != share.bytes.size()) {
    throw std::invalid_argument("ticket and share lengths differ");
  }
  Ticket out = ticket;
  for (std::size_t i = 0; i < out.bytes.size(); ++i) out.bytes[i] ^= share.bytes[i];
  return out;
}

ShareBundle generate_shares(const GroupId& gid, ByteView rand, std::size_t n, std::uint64_t seed,
                            std::size_t share_bytes, const HashFunction& hash) {
  if (n == 0) throw std::invalid_argument("a group needs at least one share");
  if (share_bytes == 0) throw std::invalid_argument("share length must be positive");
  const Bytes stream_seed = derive_seed(seed, "shares|" + gid.value + "|" + to_hex(rand));
  Bytes stream(n * share_bytes);
  deterministic_bytes(stream, stream_seed);

  ShareBundle bundle;
  bundle.shares.reserve(n);
  bundle.commitments.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto first = stream.begin() + static_cast<std::ptrdiff_t>(i * share_bytes);
    Share s{Bytes(first, first + static_cast<std::ptrdiff_t>(share_bytes))};
    Commitment c = commitment(gid, rand, s, hash);
    bundle.share_map.insert(c, s);
    bundle.commitments.push_back(std::move(c));
    bundle.shares.push_back(std::move(s));
  }
  return bundle;
}

}  // namespace ntn::protocol
