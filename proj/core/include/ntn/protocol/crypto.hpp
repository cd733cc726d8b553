#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>

#include "ntn/protocol/bytes.hpp"

namespace ntn::protocol {

class HashFunction {
 public:
  virtual ~HashFunction() = default;
  virtual std::size_t digest_size() const = 0;
  virtual Bytes digest(ByteView data) const = 0;
};

/// SHA-256 (libsodium).
class Sha256 final : public HashFunction {
 public:
  std::size_t digest_size() const override { return 32; }
  Bytes digest(ByteView data) const override;
};

/// Signing key SK_RAN-ID and verification key PK_RAN-ID of one satellite.
struct SatKeyPair {
  Bytes secret_key;
  Bytes public_key;
};

class SignatureScheme {
 public:
  virtual ~SignatureScheme() = default;
  virtual SatKeyPair keypair_from_seed(ByteView seed) const = 0;
  virtual Bytes sign(const SatKeyPair& keys, ByteView message) const = 0;
  virtual bool verify(ByteView public_key, ByteView message, ByteView signature) const = 0;
};

/// Ed25519 (libsodium). Seeds must be 32 bytes.
class Ed25519 final : public SignatureScheme {
 public:
  SatKeyPair keypair_from_seed(ByteView seed) const override;
  Bytes sign(const SatKeyPair& keys, ByteView message) const override;
  bool verify(ByteView public_key, ByteView message, ByteView signature) const override;
};

/// Memoises verification results of an underlying scheme.
///
/// Every member of a group receives the same broadcast bytes, so the simulator
/// verifies each distinct (key, message, signature) triple once.
class CachingVerifier final : public SignatureScheme {
 public:
  explicit CachingVerifier(const SignatureScheme& inner) : inner_(inner) {}

  SatKeyPair keypair_from_seed(ByteView seed) const override { return inner_.keypair_from_seed(seed); }
  Bytes sign(const SatKeyPair& keys, ByteView message) const override { return inner_.sign(keys, message); }
  bool verify(ByteView public_key, ByteView message, ByteView signature) const override;

  std::size_t misses() const { return misses_; }

 private:
  const SignatureScheme& inner_;
  mutable std::mutex mu_;
  mutable std::unordered_map<std::string, bool> cache_;
  mutable std::size_t misses_ = 0;
};

const HashFunction& default_hash();
const SignatureScheme& default_signature();

/// Fills `out` with a ChaCha20 keystream keyed by the 32-byte `seed`.
void deterministic_bytes(std::span<std::uint8_t> out, ByteView seed);

/// 32-byte seed derived from a run seed and a domain-separated label.
Bytes derive_seed(std::uint64_t run_seed, std::string_view label);

}  // namespace ntn::protocol
