// slsim: rollup sequencer simulator with transaction quarantine
// Copyright 2026 The slsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include "sls/bytes.hpp"

#include <algorithm>
#include <charconv>

namespace sls {

namespace {
int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}
}  // namespace

std::string to_hex(BytesView data) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (auto b : data) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xf]);
  }
  return out;
}

Bytes from_hex(std::string_view hex) {
  if (hex.starts_with("0x")) hex.remove_prefix(2);
  if (hex.size() % 2 != 0) throw DecodeError("hex: odd length");
  Bytes out(hex.size() / 2);
  for (size_t i = 0; i < out.size(); ++i) {
    int hi = hex_digit(hex[2 * i]);
    int lo = hex_digit(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw DecodeError("hex: invalid digit");
    out[i] = static_cast<uint8_t>((hi << 4) | lo);
  }
  return out;
}

std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v != 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

std::string to_string(i128 v) {
  if (v < 0) return "-" + to_string(static_cast<u128>(-(v + 1)) + 1);
  return to_string(static_cast<u128>(v));
}

u128 parse_u128(std::string_view s) {
  if (s.empty()) throw DecodeError("integer: empty");
  u128 v = 0;
  constexpr u128 max = ~u128{0};
  for (char c : s) {
    if (c < '0' || c > '9') throw DecodeError("integer: invalid digit in '" + std::string(s) + "'");
    unsigned d = static_cast<unsigned>(c - '0');
    if (v > (max - d) / 10) throw DecodeError("integer: overflow");
    v = v * 10 + d;
  }
  return v;
}

uint64_t parse_u64(std::string_view s) {
  uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw DecodeError("integer: invalid u64 '" + std::string(s) + "'");
  return v;
}

Word Word::from_bytes(BytesView be) {
  if (be.size() > 32) throw DecodeError("word: more than 32 bytes");
  Word w;
  size_t n = be.size();
  for (size_t i = 0; i < n; ++i) {
    size_t bit_pos = (n - 1 - i) * 8;
    w.limbs_[bit_pos / 64] |= static_cast<uint64_t>(be[i]) << (bit_pos % 64);
  }
  return w;
}

Word Word::max() {
  Word w;
  w.limbs_.fill(~uint64_t{0});
  return w;
}

Word Word::from_decimal(std::string_view s) {
  if (s.empty()) throw DecodeError("word: empty");
  Word w;
  for (char c : s) {
    if (c < '0' || c > '9') throw DecodeError("word: invalid digit");
    u128 carry = static_cast<u128>(c - '0');
    for (auto& limb : w.limbs_) {
      u128 cur = static_cast<u128>(limb) * 10 + carry;
      limb = static_cast<uint64_t>(cur);
      carry = cur >> 64;
    }
    if (carry != 0) throw DecodeError("word: overflow");
  }
  return w;
}

std::array<uint8_t, 32> Word::to_bytes() const {
  std::array<uint8_t, 32> out{};
  for (size_t i = 0; i < 32; ++i) {
    size_t bit_pos = (31 - i) * 8;
    out[i] = static_cast<uint8_t>(limbs_[bit_pos / 64] >> (bit_pos % 64));
  }
  return out;
}

std::string Word::hex() const {
  return to_hex(to_bytes());
}

std::string Word::to_decimal() const {
  if (is_zero()) return "0";
  // Repeated division by 10 on 32-bit chunks.
  std::array<uint32_t, 8> parts{};
  for (int i = 0; i < 4; ++i) {
    parts[2 * i] = static_cast<uint32_t>(limbs_[i]);
    parts[2 * i + 1] = static_cast<uint32_t>(limbs_[i] >> 32);
  }
  std::string s;
  auto nonzero = [&] {
    for (auto p : parts)
      if (p) return true;
    return false;
  };
  while (nonzero()) {
    uint64_t rem = 0;
    for (int i = 7; i >= 0; --i) {
      uint64_t cur = (rem << 32) | parts[i];
      parts[i] = static_cast<uint32_t>(cur / 10);
      rem = cur % 10;
    }
    s.push_back(static_cast<char>('0' + rem));
  }
  std::reverse(s.begin(), s.end());
  return s;
}

Word operator+(const Word& a, const Word& b) {
  Word r;
  u128 carry = 0;
  for (int i = 0; i < 4; ++i) {
    u128 sum = static_cast<u128>(a.limbs_[i]) + b.limbs_[i] + carry;
    r.limbs_[i] = static_cast<uint64_t>(sum);
    carry = sum >> 64;
  }
  return r;
}

Word operator*(const Word& a, const Word& b) {
  Word r;
  for (int i = 0; i < 4; ++i) {
    u128 carry = 0;
    for (int j = 0; i + j < 4; ++j) {
      u128 cur = static_cast<u128>(a.limbs_[i]) * b.limbs_[j] + r.limbs_[i + j] + carry;
      r.limbs_[i + j] = static_cast<uint64_t>(cur);
      carry = cur >> 64;
    }
  }
  return r;
}

Word saturating_sub(const Word& a, const Word& b) {
  if (a <= b) return Word{};
  Word r;
  uint64_t borrow = 0;
  for (int i = 0; i < 4; ++i) {
    u128 sub = static_cast<u128>(b.limbs_[i]) + borrow;
    if (static_cast<u128>(a.limbs_[i]) >= sub) {
      r.limbs_[i] = static_cast<uint64_t>(a.limbs_[i] - sub);
      borrow = 0;
    } else {
      r.limbs_[i] = static_cast<uint64_t>((static_cast<u128>(1) << 64) + a.limbs_[i] - sub);
      borrow = 1;
    }
  }
  return r;
}

}  // namespace sls
