#include <doctest.h>

#include <openssl/sha.h>

#include <algorithm>
#include <set>
#include <stdexcept>

#include "ntn/protocol/aggregator.hpp"
#include "ntn/protocol/notification.hpp"
#include "ntn/protocol/wire.hpp"
#include "ntn/rng.hpp"

using namespace ntn;
using namespace ntn::protocol;

namespace {

Bytes openssl_sha256(ByteView data) {
  Bytes out(SHA256_DIGEST_LENGTH);
  SHA256(data.data(), data.size(), out.data());
  return out;
}

Bytes lp(ByteView v) {
  Bytes out = {static_cast<std::uint8_t>(v.size() >> 24), static_cast<std::uint8_t>(v.size() >> 16),
               static_cast<std::uint8_t>(v.size() >> 8), static_cast<std::uint8_t>(v.size())};
  out.insert(out.end(), v.begin(), v.end());
  return out;
}

SatKeyPair keys_for(std::uint64_t seed) { return default_signature().keypair_from_seed(derive_seed(seed, "sat-key|1")); }

}  // namespace

TEST_CASE("hex round trip") {
  CHECK(to_hex(Bytes{0x00, 0xab, 0x10}) == "00ab10");
  CHECK(from_hex("00AB10") == Bytes{0x00, 0xab, 0x10});
  CHECK_THROWS(from_hex("abc"));
}

TEST_CASE("commitment digest is frozen") {
  const Share s{{0x0a, 0x0b}};
  const Bytes rand = {0x01, 0x02};
  const auto c = commitment(GroupId{"G1"}, rand, s);
  // Computed independently with Python hashlib over the length-prefixed encoding.
  CHECK(to_hex(c.digest) == "d956567573614a6ee03e65d109d615a971e02ff3ce46d4402fb97c19da39c8be");
  Bytes encoded = lp(as_bytes("G1"));
  for (const auto& part : {lp(rand), lp(s.bytes)}) encoded.insert(encoded.end(), part.begin(), part.end());
  CHECK(c.digest == openssl_sha256(encoded));
}

TEST_CASE("seed derivation is frozen") {
  CHECK(to_hex(derive_seed(10, "deploy")) == "e9a58b7f3d898bf8a70c42d2e573188c3e40634e008fc659693ac8c601dfc097");
}

TEST_CASE("sha256 agrees with openssl on random inputs") {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    Bytes data(rng.below(300));
    for (auto& b : data) b = static_cast<std::uint8_t>(rng.next_u64());
    CHECK(default_hash().digest(data) == openssl_sha256(data));
  }
}

TEST_CASE("share generation is deterministic and collision free") {
  const Bytes rand = {1, 2, 3, 4};
  const auto a = generate_shares(GroupId{"G7"}, rand, 50, 10);
  const auto b = generate_shares(GroupId{"G7"}, rand, 50, 10);
  const auto c = generate_shares(GroupId{"G7"}, rand, 50, 20);
  CHECK(a.shares == b.shares);
  CHECK(a.shares != c.shares);
  CHECK(a.share_map.size() == 50);
  for (std::size_t i = 0; i < 50; ++i) {
    CHECK(a.shares[i].bytes.size() == kDefaultShareBytes);
    CHECK(a.commitments[i] == commitment(GroupId{"G7"}, rand, a.shares[i]));
    REQUIRE(a.share_map.find(a.commitments[i]) != nullptr);
  }
  CHECK_THROWS_AS(generate_shares(GroupId{"G7"}, rand, 0, 10), std::invalid_argument);
}

TEST_CASE("xor aggregate") {
  auto t = Ticket::zero(2);
  CHECK(t.is_zero());
  t = xor_aggregate(t, Share{{0x0f, 0xf0}});
  t = xor_aggregate(t, Share{{0xff, 0x00}});
  CHECK(t.bytes == Bytes{0xf0, 0xf0});
  t = xor_aggregate(t, Share{{0xf0, 0xf0}});
  CHECK(t.is_zero());
  CHECK_THROWS_AS(xor_aggregate(t, Share{{1}}), std::invalid_argument);
}

TEST_CASE("threshold and aggregator selection") {
  CHECK(decide_threshold(20, 0.5) == 10);
  CHECK(decide_threshold(7, 0.5) == 3);
  CHECK(decide_threshold(1, 0.5) == 0);
  CHECK_THROWS_AS(decide_threshold(0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(decide_threshold(5, 1.0), std::invalid_argument);
  const std::vector<std::uint32_t> members = {4, 9, 13, 21, 30};
  Rng rng(1);
  std::set<std::uint32_t> seen;
  for (int i = 0; i < 200; ++i) {
    const auto ga = select_aggregators(members, 2, rng);
    REQUIRE(ga.size() == 2);
    CHECK(ga[0] < ga[1]);
    seen.insert(ga.begin(), ga.end());
  }
  CHECK(seen.size() == members.size());
  CHECK_THROWS_AS(select_aggregators(members, 6, rng), std::invalid_argument);
}

// Every subset of arrivals for every group size up to 8 and every threshold:
// the request is emitted iff more than threshold distinct shares arrived, and
// its ticket is the XOR of exactly the shares it names.
TEST_CASE("aggregator matches brute force on every subset") {
  const GroupId gid{"G0"};
  const Bytes rand = {9, 9};
  for (std::size_t n = 1; n <= 8; ++n) {
    const auto bundle = generate_shares(gid, rand, n, 77);
    for (std::size_t threshold = 0; threshold < n; ++threshold) {
      for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        GaState ga(gid, rand, threshold, bundle.commitments);
        std::optional<GroupHandoverRequest> req;
        for (std::uint32_t i = 0; i < n; ++i) {
          if ((mask & (1u << i)) == 0) continue;
          auto r = ga_on_broadcast(ga, gid, bundle.shares[i]);
          if (r) {
            REQUIRE_FALSE(req.has_value());
            req = std::move(r);
          }
        }
        const auto count = static_cast<std::size_t>(std::popcount(mask));
        REQUIRE(req.has_value() == (count > threshold));
        if (!req) continue;
        auto expect = Ticket::zero(kDefaultShareBytes);
        for (auto slot : req->aggregated_commitment) {
          REQUIRE((mask & (1u << slot)) != 0);
          expect = xor_aggregate(expect, bundle.shares[slot]);
        }
        REQUIRE(req->aggregated_commitment.size() == threshold + 1);
        REQUIRE(req->ticket == expect);
        REQUIRE(verify_ticket(*req, bundle.share_map, bundle.commitments));
        auto forged = *req;
        forged.ticket.bytes[0] ^= 1;
        REQUIRE_FALSE(verify_ticket(forged, bundle.share_map, bundle.commitments));
      }
    }
  }
}

TEST_CASE("aggregator ignores foreign, unknown and repeated shares") {
  const GroupId gid{"G1"};
  const Bytes rand = {1};
  const auto bundle = generate_shares(gid, rand, 4, 3);
  GaState ga(gid, rand, 2, bundle.commitments);
  CHECK_FALSE(ga_on_broadcast(ga, GroupId{"G2"}, bundle.shares[0]));
  CHECK_FALSE(ga_on_broadcast(ga, gid, Share{Bytes(16, 0x55)}));
  CHECK_FALSE(ga_on_broadcast(ga, gid, bundle.shares[0]));
  CHECK_FALSE(ga_on_broadcast(ga, gid, bundle.shares[0]));
  CHECK_FALSE(ga_on_broadcast(ga, gid, bundle.shares[1]));
  const auto req = ga_on_broadcast(ga, gid, bundle.shares[3]);
  REQUIRE(req.has_value());
  CHECK(req->aggregated_commitment == std::vector<std::uint32_t>{0, 1, 3});
  CHECK_FALSE(ga_on_broadcast(ga, gid, bundle.shares[2]));
}

TEST_CASE("ticket verification rejects malformed requests") {
  const GroupId gid{"G1"};
  const Bytes rand = {1};
  const auto bundle = generate_shares(gid, rand, 4, 3);
  auto ticket = xor_aggregate(xor_aggregate(Ticket::zero(16), bundle.shares[0]), bundle.shares[1]);
  CHECK(verify_ticket({gid, ticket, {0, 1}}, bundle.share_map, bundle.commitments));
  CHECK_FALSE(verify_ticket({gid, ticket, {0, 1, 1, 1}}, bundle.share_map, bundle.commitments));
  CHECK_FALSE(verify_ticket({gid, ticket, {0, 9}}, bundle.share_map, bundle.commitments));
  CHECK_FALSE(verify_ticket({gid, ticket, {0, 2}}, bundle.share_map, bundle.commitments));
  const std::vector<Commitment> named = {bundle.commitments[1], bundle.commitments[0]};
  CHECK(verify_ticket_by_digest(ticket, named, bundle.share_map));
  const std::vector<Commitment> unknown = {bundle.commitments[0], Commitment{Bytes(32, 0)}};
  CHECK_FALSE(verify_ticket_by_digest(ticket, unknown, bundle.share_map));
}

TEST_CASE("notifications: fresh accepted, replay, stale and forged rejected") {
  const auto keys = keys_for(10);
  const auto other = keys_for(11);
  const Bytes rand = {4, 2};
  const GroupId gid{"G5"};
  int accepted = 0;
  int rejected = 0;
  for (std::uint64_t ts = 1000; ts < 1100; ++ts) {
    SeenSet seen;
    for (auto action : {GroupAction::SwitchToGroupHandover, GroupAction::CancelGroupHandover}) {
      const auto n = make_notification(keys, 1, rand, gid, action, ts);
      CHECK(verify_notification(keys.public_key, n, rand, 5000, ts + 10, seen) == VerifyOutcome::Accept);
      ++accepted;
      CHECK(verify_notification(keys.public_key, n, rand, 5000, ts + 20, seen) == VerifyOutcome::Replay);
      CHECK(verify_notification(keys.public_key, n, rand, 5000, ts + 5001, seen) == VerifyOutcome::StaleTimestamp);
      CHECK(verify_notification(other.public_key, n, rand, 5000, ts, seen) == VerifyOutcome::BadSignature);
      auto flipped = n;
      flipped.signature[ts % flipped.signature.size()] ^= static_cast<std::uint8_t>(1u << (ts % 8));
      CHECK(verify_notification(keys.public_key, flipped, rand, 5000, ts, seen) == VerifyOutcome::BadSignature);
      auto relabeled = n;
      relabeled.gid = GroupId{"G6"};
      CHECK(verify_notification(keys.public_key, relabeled, rand, 5000, ts, seen) == VerifyOutcome::BadSignature);
      const Bytes wrong_rand = {4, 3};
      CHECK(verify_notification(keys.public_key, n, wrong_rand, 5000, ts, seen) == VerifyOutcome::BadSignature);
      rejected += 5;
    }
  }
  CHECK(accepted == 200);
  CHECK(rejected == 1000);
}

TEST_CASE("caching verifier returns the same verdicts") {
  const auto keys = keys_for(1);
  CachingVerifier cache(default_signature());
  const Bytes msg = {1, 2, 3};
  const auto sig = default_signature().sign(keys, msg);
  auto bad = sig;
  bad[0] ^= 1;
  for (int i = 0; i < 3; ++i) {
    CHECK(cache.verify(keys.public_key, msg, sig));
    CHECK_FALSE(cache.verify(keys.public_key, msg, bad));
  }
  CHECK(cache.misses() == 2);
}

TEST_CASE("wire encodings round trip") {
  const GroupHandoverRequest req{GroupId{"G3:4"}, Ticket{Bytes(16, 0x5a)}, {3, 1, 7}};
  CHECK(decode_group_request(encode(req)) == req);
  auto trailing = encode(req);
  trailing.push_back(0);
  CHECK_THROWS_AS(decode_group_request(trailing), DecodeError);
  auto truncated = encode(req);
  truncated.pop_back();
  CHECK_THROWS_AS(decode_group_request(truncated), DecodeError);

  const ShareBroadcast sb{GroupId{"G1"}, Share{Bytes(16, 7)}};
  const auto sb2 = decode_share_broadcast(encode(sb));
  CHECK(sb2.gid == sb.gid);
  CHECK(sb2.share == sb.share);

  const DigestGroupRequest d{GroupId{"G2"}, Ticket{Bytes(16, 1)}, {Commitment{Bytes(32, 2)}, Commitment{Bytes(32, 3)}}};
  const auto d2 = decode_digest_group_request(encode(d));
  CHECK(d2.gid == d.gid);
  CHECK(d2.ticket == d.ticket);
  CHECK(d2.commitments == d.commitments);

  const auto n = make_notification(keys_for(2), 7, Bytes{1}, GroupId{"G9"}, GroupAction::CancelGroupHandover, 123);
  const auto n2 = decode_notification(encode(n));
  CHECK(n2.ran_id == 7);
  CHECK(n2.gid == n.gid);
  CHECK(n2.action == n.action);
  CHECK(n2.timestamp_ms == 123);
  CHECK(n2.signature == n.signature);
}
