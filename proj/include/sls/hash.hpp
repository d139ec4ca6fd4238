// slsim: rollup sequencer simulator with transaction quarantine
// Copyright 2026 The slsim Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "sls/bytes.hpp"

#include <memory>

namespace sls {

struct DigestTag;
using Hash32 = FixedBytes<32, DigestTag>;

Hash32 sha256(BytesView data);
inline Hash32 sha256(std::string_view s) {
  return sha256(BytesView(reinterpret_cast<const uint8_t*>(s.data()), s.size()));
}

/// Streaming SHA-256.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  Sha256& update(BytesView data);
  Hash32 finish();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sls
