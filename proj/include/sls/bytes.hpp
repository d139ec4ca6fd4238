// slsim: rollup sequencer simulator with transaction quarantine
// Copyright 2026 The slsim Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sls {

using u128 = unsigned __int128;
using i128 = __int128;

using Bytes = std::vector<uint8_t>;
using BytesView = std::span<const uint8_t>;

/// Thrown when a binary or textual encoding cannot be decoded.
class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string to_hex(BytesView data);
Bytes from_hex(std::string_view hex);

std::string to_string(u128 v);
std::string to_string(i128 v);
u128 parse_u128(std::string_view s);
uint64_t parse_u64(std::string_view s);

/// Fixed-width byte string. `Tag` separates digests that must not be mixed up.
template <size_t N, class Tag>
struct FixedBytes {
  static constexpr size_t size = N;
  std::array<uint8_t, N> bytes{};

  auto operator<=>(const FixedBytes&) const = default;

  bool is_zero() const {
    for (auto b : bytes)
      if (b != 0) return false;
    return true;
  }
  std::string hex() const { return to_hex(bytes); }

  static FixedBytes from_span(BytesView data) {
    if (data.size() != N) throw DecodeError("fixed bytes: wrong length");
    FixedBytes out;
    std::copy(data.begin(), data.end(), out.bytes.begin());
    return out;
  }
  static FixedBytes from_hex_string(std::string_view hex) {
    if (hex.starts_with("0x")) hex.remove_prefix(2);
    return from_span(from_hex(hex));
  }
};

/// Unsigned 256-bit integer with wrapping add/mul and saturating sub.
class Word {
 public:
  constexpr Word() = default;
  constexpr Word(u128 v) : limbs_{static_cast<uint64_t>(v), static_cast<uint64_t>(v >> 64), 0, 0} {}

  static Word from_bytes(BytesView be);  // up to 32 bytes, big-endian, right-aligned
  static Word from_decimal(std::string_view s);
  static Word max();

  std::array<uint8_t, 32> to_bytes() const;
  std::string to_decimal() const;
  std::string hex() const;

  bool is_zero() const { return (limbs_[0] | limbs_[1] | limbs_[2] | limbs_[3]) == 0; }
  bool fits_u128() const { return (limbs_[2] | limbs_[3]) == 0; }
  u128 low128() const { return (static_cast<u128>(limbs_[1]) << 64) | limbs_[0]; }

  bool bit(size_t i) const { return (limbs_[i / 64] >> (i % 64)) & 1; }
  void set_bit(size_t i) { limbs_[i / 64] |= uint64_t{1} << (i % 64); }

  friend Word operator+(const Word& a, const Word& b);
  friend Word operator*(const Word& a, const Word& b);
  friend Word saturating_sub(const Word& a, const Word& b);

  friend bool operator==(const Word&, const Word&) = default;
  friend std::strong_ordering operator<=>(const Word& a, const Word& b) {
    for (int i = 3; i >= 0; --i)
      if (auto c = a.limbs_[i] <=> b.limbs_[i]; c != 0) return c;
    return std::strong_ordering::equal;
  }

 private:
  std::array<uint64_t, 4> limbs_{};  // little-endian limbs
};

/// Big-endian serializer used by every canonical encoding.
class ByteWriter {
 public:
  void u8(uint8_t v) { out_.push_back(v); }
  void u32(uint32_t v) { be(v, 4); }
  void u64(uint64_t v) { be(v, 8); }
  void u128(sls::u128 v) {
    u64(static_cast<uint64_t>(v >> 64));
    u64(static_cast<uint64_t>(v));
  }
  void raw(BytesView data) { out_.insert(out_.end(), data.begin(), data.end()); }
  void blob(BytesView data) {
    u32(static_cast<uint32_t>(data.size()));
    raw(data);
  }

  const Bytes& bytes() const& { return out_; }
  Bytes take() && { return std::move(out_); }

 private:
  void be(uint64_t v, int width) {
    for (int i = width - 1; i >= 0; --i) out_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  Bytes out_;
};

class ByteReader {
 public:
  explicit ByteReader(BytesView data) : data_(data) {}

  uint8_t u8() { return take(1)[0]; }
  uint32_t u32() { return static_cast<uint32_t>(be(4)); }
  uint64_t u64() { return be(8); }
  sls::u128 u128() {
    sls::u128 hi = u64();
    return (hi << 64) | u64();
  }
  BytesView raw(size_t n) { return take(n); }
  Bytes blob() {
    auto n = u32();
    auto s = take(n);
    return Bytes(s.begin(), s.end());
  }
  bool done() const { return pos_ == data_.size(); }
  void expect_done() const {
    if (!done()) throw DecodeError("trailing bytes");
  }

 private:
  BytesView take(size_t n) {
    if (data_.size() - pos_ < n) throw DecodeError("unexpected end of input");
    auto s = data_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  uint64_t be(int width) {
    uint64_t v = 0;
    for (auto b : take(width)) v = (v << 8) | b;
    return v;
  }

  BytesView data_;
  size_t pos_ = 0;
};

}  // namespace sls
