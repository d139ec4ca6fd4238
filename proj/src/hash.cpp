// slsim: rollup sequencer simulator with transaction quarantine
// Copyright 2026 The slsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include "sls/hash.hpp"

#include <openssl/evp.h>

namespace sls {

struct Sha256::Impl {
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  ~Impl() { EVP_MD_CTX_free(ctx); }
};

Sha256::Sha256() : impl_(std::make_unique<Impl>()) {
  if (impl_->ctx == nullptr || EVP_DigestInit_ex(impl_->ctx, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256: init failed");
}

Sha256::~Sha256() = default;

Sha256& Sha256::update(BytesView data) {
  if (!data.empty()) EVP_DigestUpdate(impl_->ctx, data.data(), data.size());
  return *this;
}

Hash32 Sha256::finish() {
  Hash32 out;
  unsigned len = 0;
  EVP_DigestFinal_ex(impl_->ctx, out.bytes.data(), &len);
  return out;
}

Hash32 sha256(BytesView data) {
  return Sha256{}.update(data).finish();
}

}  // namespace sls
