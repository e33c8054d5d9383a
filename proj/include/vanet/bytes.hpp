#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vanet/errors.hpp"

namespace vanet {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline ByteView as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

inline ByteView as_bytes(const Bytes& b) { return {b.data(), b.size()}; }

// Big-endian writers. All canonical encodings in this project are
// big-endian with fixed field widths.
inline void put_u8(Bytes& out, std::uint8_t v) { out.push_back(v); }

inline void put_u16(Bytes& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

inline void put_u32(Bytes& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8)
    out.push_back(static_cast<std::uint8_t>(v >> shift));
}

inline void put_u64(Bytes& out, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8)
    out.push_back(static_cast<std::uint8_t>(v >> shift));
}

inline void put_i32(Bytes& out, std::int32_t v) {
  put_u32(out, static_cast<std::uint32_t>(v));
}

inline void put_i64(Bytes& out, std::int64_t v) {
  put_u64(out, static_cast<std::uint64_t>(v));
}

inline void put_bytes(Bytes& out, ByteView v) {
  out.insert(out.end(), v.begin(), v.end());
}

// Sequential reader over a canonical encoding. Underruns and trailing
// bytes are decode errors.
class ByteReader {
 public:
  explicit ByteReader(ByteView data) : data_(data) {}

  std::uint8_t u8() { return take(1)[0]; }

  std::uint16_t u16() {
    auto b = take(2);
    return static_cast<std::uint16_t>((std::uint16_t(b[0]) << 8) | b[1]);
  }

  std::uint32_t u32() {
    auto b = take(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | b[i];
    return v;
  }

  std::uint64_t u64() {
    auto b = take(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | b[i];
    return v;
  }

  std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }

  ByteView take(std::size_t n) {
    if (n > data_.size() - pos_)
      throw DecodeError("truncated encoding: wanted " + std::to_string(n) +
                        " bytes, " + std::to_string(data_.size() - pos_) +
                        " left");
    ByteView v = data_.subspan(pos_, n);
    pos_ += n;
    return v;
  }

  template <std::size_t N>
  void read(std::array<std::uint8_t, N>& out) {
    auto v = take(N);
    std::memcpy(out.data(), v.data(), N);
  }

  std::size_t remaining() const { return data_.size() - pos_; }

  // Call once all fields are consumed; trailing bytes are an error.
  void finish() const {
    if (pos_ != data_.size())
      throw DecodeError("trailing bytes after encoding: " +
                        std::to_string(data_.size() - pos_));
  }

 private:
  ByteView data_;
  std::size_t pos_ = 0;
};

constexpr std::uint64_t fnv_offset_basis = 1469598103934665603ULL;
constexpr std::uint64_t fnv_prime = 1099511628211ULL;

inline std::uint64_t fnv1a(ByteView data, std::uint64_t h = fnv_offset_basis) {
  for (std::uint8_t b : data) {
    h ^= b;
    h *= fnv_prime;
  }
  return h;
}

inline std::uint64_t fnv1a_u64(std::uint64_t v, std::uint64_t h) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (i * 8)) & 0xFF;
    h *= fnv_prime;
  }
  return h;
}

inline std::string to_hex(ByteView data) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  s.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    s.push_back(digits[b >> 4]);
    s.push_back(digits[b & 0xF]);
  }
  return s;
}

}  // namespace vanet
