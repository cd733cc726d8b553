#include "ntn/protocol/crypto.hpp"

#include <sodium.h>

#include <stdexcept>

namespace ntn::protocol {
namespace {

void ensure_sodium() {
  static const bool ready = [] { return sodium_init() >= 0; }();
  if (!ready) throw std::runtime_error("libsodium initialisation failed");
}

}  // namespace

Bytes Sha256::digest(ByteView data) const {
  ensure_sodium();
  Bytes out(crypto_hash_sha256_BYTES);
  crypto_hash_sha256(out.data(), data.data(), data.size());
  return out;
}

SatKeyPair Ed25519::keypair_from_seed(ByteView seed) const {
  ensure_sodium();
  if (seed.size() != crypto_sign_SEEDBYTES) throw std::invalid_argument("Ed25519 seed must be 32 bytes");
  SatKeyPair keys{Bytes(crypto_sign_SECRETKEYBYTES), Bytes(crypto_sign_PUBLICKEYBYTES)};
  crypto_sign_seed_keypair(keys.public_key.data(), keys.secret_key.data(), seed.data());
  return keys;
}

Bytes Ed25519::sign(const SatKeyPair& keys, ByteView message) const {
  ensure_sodium();
  if (keys.secret_key.size() != crypto_sign_SECRETKEYBYTES) throw std::invalid_argument("bad Ed25519 secret key");
  Bytes sig(crypto_sign_BYTES);
  crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), keys.secret_key.data());
  return sig;
}

bool Ed25519::verify(ByteView public_key, ByteView message, ByteView signature) const {
  ensure_sodium();
  if (public_key.size() != crypto_sign_PUBLICKEYBYTES || signature.size() != crypto_sign_BYTES) return false;
  return crypto_sign_verify_detached(signature.data(), message.data(), message.size(), public_key.data()) == 0;
}

bool CachingVerifier::verify(ByteView public_key, ByteView message, ByteView signature) const {
  ByteWriter w;
  w.prefixed(public_key).prefixed(message).prefixed(signature);
  std::string key(w.bytes().begin(), w.bytes().end());
  std::lock_guard lock(mu_);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  ++misses_;
  const bool ok = inner_.verify(public_key, message, signature);
  cache_.emplace(std::move(key), ok);
  return ok;
}

const HashFunction& default_hash() {
  static const Sha256 hash;
  return hash;
}

const SignatureScheme& default_signature() {
  static const Ed25519 scheme;
  return scheme;
}

void deterministic_bytes(std::span<std::uint8_t> out, ByteView seed) {
  ensure_sodium();
  if (seed.size() != randombytes_SEEDBYTES) throw std::invalid_argument("stream seed must be 32 bytes");
  randombytes_buf_deterministic(out.data(), out.size(), seed.data());
}

Bytes derive_seed(std::uint64_t run_seed, std::string_view label) {
  ByteWriter w;
  w.prefixed(std::string_view("ntn-seed")).u64(run_seed).prefixed(label);
  return Sha256{}.digest(w.bytes());
}

}  // namespace ntn::protocol
