#include "ntn/protocol/notification.hpp"

namespace ntn::protocol {

std::string_view to_string(GroupAction a) {
  switch (a) {
    case GroupAction::SwitchToGroupHandover: return "SwitchToGroupHandover";
    case GroupAction::CancelGroupHandover: return "CancelGroupHandover";
  }
  return "?";
}

std::string_view to_string(VerifyOutcome v) {
  switch (v) {
    case VerifyOutcome::Accept: return "accept";
    case VerifyOutcome::BadSignature: return "bad-signature";
    case VerifyOutcome::StaleTimestamp: return "stale-timestamp";
    case VerifyOutcome::Replay: return "replay";
  }
  return "?";
}

Bytes notification_signing_payload(RanId ran_id, ByteView rand, const GroupId& gid, GroupAction action,
                                   std::uint64_t timestamp_ms) {
  ByteWriter ran;
  ran.u32(ran_id);
  ByteWriter ts;
  ts.u64(timestamp_ms);
  const std::uint8_t action_byte = static_cast<std::uint8_t>(action);

  ByteWriter m;
  m.prefixed(ByteView(&action_byte, 1))
      .prefixed(ran.bytes())
      .prefixed(rand)
      .prefixed(gid.value)
      .prefixed(ts.bytes());
  return std::move(m).bytes();
}

Notification make_notification(const SatKeyPair& keys, RanId ran_id, ByteView rand, const GroupId& gid,
                               GroupAction action, std::uint64_t timestamp_ms, const SignatureScheme& scheme) {
  const Bytes payload = notification_signing_payload(ran_id, rand, gid, action, timestamp_ms);
  return Notification{ran_id, gid, action, timestamp_ms, scheme.sign(keys, payload)};
}

VerifyOutcome verify_notification(ByteView public_key, const Notification& n, ByteView rand,
                                  std::uint64_t freshness_window_ms, std::uint64_t now_ms, SeenSet& seen,
                                  const SignatureScheme& scheme) {
  const Bytes payload = notification_signing_payload(n.ran_id, rand, n.gid, n.action, n.timestamp_ms);
  if (!scheme.verify(public_key, payload, n.signature)) return VerifyOutcome::BadSignature;
  const std::uint64_t age = now_ms >= n.timestamp_ms ? now_ms - n.timestamp_ms : n.timestamp_ms - now_ms;
  if (age > freshness_window_ms) return VerifyOutcome::StaleTimestamp;
  if (seen.contains(n)) return VerifyOutcome::Replay;
  seen.insert(n);
  return VerifyOutcome::Accept;
}

}  // namespace ntn::protocol
