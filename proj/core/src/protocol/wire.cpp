#include "ntn/protocol/wire.hpp"

namespace ntn::protocol {
namespace {

void expect_done(const ByteReader& r) {
  if (!r.done()) throw DecodeError("trailing bytes");
}

}  // namespace

Bytes encode(const ShareBroadcast& b) {
  ByteWriter w;
  w.prefixed(b.gid.value).raw(b.share.bytes);
  return std::move(w).bytes();
}

ShareBroadcast decode_share_broadcast(ByteView in) {
  ByteReader r(in);
  ShareBroadcast b;
  b.gid.value = r.prefixed_string();
  b.share.bytes = r.raw(r.remaining());
  return b;
}

Bytes encode(const GroupHandoverRequest& req) {
  ByteWriter w;
  w.prefixed(req.gid.value).prefixed(req.ticket.bytes).u32(static_cast<std::uint32_t>(req.aggregated_commitment.size()));
  for (auto i : req.aggregated_commitment) w.u32(i);
  return std::move(w).bytes();
}

GroupHandoverRequest decode_group_request(ByteView in) {
  ByteReader r(in);
  GroupHandoverRequest req;
  req.gid.value = r.prefixed_string();
  req.ticket.bytes = r.prefixed();
  const std::uint32_t count = r.u32();
  if (count > r.remaining() / 4) throw DecodeError("index count exceeds payload");
  req.aggregated_commitment.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) req.aggregated_commitment.push_back(r.u32());
  expect_done(r);
  return req;
}

Bytes encode(const DigestGroupRequest& req) {
  ByteWriter w;
  w.prefixed(req.gid.value).prefixed(req.ticket.bytes).u32(static_cast<std::uint32_t>(req.commitments.size()));
  for (const auto& c : req.commitments) w.prefixed(c.digest);
  return std::move(w).bytes();
}

DigestGroupRequest decode_digest_group_request(ByteView in) {
  ByteReader r(in);
  DigestGroupRequest req;
  req.gid.value = r.prefixed_string();
  req.ticket.bytes = r.prefixed();
  const std::uint32_t count = r.u32();
  if (count > r.remaining() / 4) throw DecodeError("digest count exceeds payload");
  req.commitments.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) req.commitments.push_back(Commitment{r.prefixed()});
  expect_done(r);
  return req;
}

Bytes encode(const Notification& n) {
  ByteWriter ran;
  ran.u32(n.ran_id);
  ByteWriter w;
  w.prefixed(ran.bytes())
      .prefixed(n.gid.value)
      .u8(static_cast<std::uint8_t>(n.action))
      .u64(n.timestamp_ms)
      .raw(n.signature);
  return std::move(w).bytes();
}

Notification decode_notification(ByteView in) {
  ByteReader r(in);
  Notification n;
  const Bytes ran = r.prefixed();
  if (ran.size() != 4) throw DecodeError("RAN-ID must be 4 bytes");
  n.ran_id = ByteReader(ran).u32();
  n.gid.value = r.prefixed_string();
  const std::uint8_t action = r.u8();
  if (action != 0x01 && action != 0x02) throw DecodeError("unknown action byte");
  n.action = static_cast<GroupAction>(action);
  n.timestamp_ms = r.u64();
  n.signature = r.raw(r.remaining());
  return n;
}

}  // namespace ntn::protocol
