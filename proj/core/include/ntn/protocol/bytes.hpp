#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ntn::protocol {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline ByteView as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

std::string to_hex(ByteView bytes);
Bytes from_hex(std::string_view hex);

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Big-endian writer for the canonical encodings.
class ByteWriter {
 public:
  ByteWriter& u8(std::uint8_t v);
  ByteWriter& u32(std::uint32_t v);
  ByteWriter& u64(std::uint64_t v);
  ByteWriter& raw(ByteView v);
  /// 4-byte big-endian length, then the bytes.
  ByteWriter& prefixed(ByteView v);
  ByteWriter& prefixed(std::string_view v) { return prefixed(as_bytes(v)); }

  const Bytes& bytes() const& { return out_; }
  Bytes bytes() && { return std::move(out_); }

 private:
  Bytes out_;
};

/// Reader counterpart; every accessor throws DecodeError on truncation.
class ByteReader {
 public:
  explicit ByteReader(ByteView in) : in_(in) {}

  std::uint8_t u8();
  std::uint32_t u32();
  std::uint64_t u64();
  Bytes raw(std::size_t n);
  Bytes prefixed();
  std::string prefixed_string();

  std::size_t remaining() const { return in_.size() - pos_; }
  bool done() const { return remaining() == 0; }

 private:
  void need(std::size_t n) const;
  ByteView in_;
  std::size_t pos_ = 0;
};

}  // namespace ntn::protocol
