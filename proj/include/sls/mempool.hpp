// slsim: rollup sequencer simulator with transaction quarantine
// Copyright 2026 The slsim Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "sls/vm.hpp"

#include <functional>

namespace sls {

struct PoolConfig {
  size_t max_queued = 1024;
  size_t max_pending = 4096;
  unsigned min_replacement_bump_percent = 10;
  uint64_t tx_lifetime = 10800;  // seconds, applies to queued entries
};

enum class PoolStatus { queued, pending };

struct PoolEntry {
  SignedTransaction tx;
  TxHash hash;
  uint64_t received_at = 0;
  PoolStatus status = PoolStatus::queued;
};

enum class RejectReason {
  nonce_too_low,
  insufficient_balance,
  underpriced_replacement,
  pool_full,
  already_known,
  malformed,
};

std::string_view to_string(RejectReason r);

struct Accepted {
  PoolStatus status;
  std::vector<TxHash> evicted;
};
struct Replaced {
  TxHash old;
  PoolStatus status;
};
struct Rejected {
  RejectReason reason;
};

using SubmitResult = std::variant<Accepted, Replaced, Rejected>;

enum class RetireReason { nonce_too_low, lifetime_exceeded, insufficient_balance };

std::string_view to_string(RetireReason r);

struct Retirement {
  TxHash hash;
  RetireReason reason;
};

/// Queued/pending transaction pool. An entry is PENDING when its nonce is part
/// of the gap-free run starting at the sender's account nonce; everything else
/// is QUEUED. Statuses are refreshed on every mutation against the state
/// supplied with it.
class Mempool {
 public:
  explicit Mempool(PoolConfig config = {}) : config_(config) {}

  SubmitResult submit(const SignedTransaction& tx, uint64_t now, const WorldState& state);

  /// PENDING entries executable under `base_fee`, best effective tip first.
  /// Ties break on received_at then hash. A sender contributes only the
  /// nonce-contiguous prefix starting at its account nonce; an underpriced or
  /// excluded entry ends that sender's prefix.
  std::vector<SignedTransaction> pending_candidates(
      uint64_t base_fee, const WorldState& state,
      const std::function<bool(const TxHash&)>& excluded = nullptr) const;

  /// Drops entries whose nonce is below the account nonce, queued entries
  /// older than the lifetime, and entries the sender can no longer pay for.
  std::vector<Retirement> retire(uint64_t now, const WorldState& state);

  bool remove(const TxHash& hash, const WorldState& state);

  const PoolEntry* find(const TxHash& hash) const;
  size_t size() const { return entries_.size(); }
  size_t count(PoolStatus status) const;
  std::vector<PoolEntry> entries() const;  // sorted by (sender, nonce)

 private:
  void refresh(const Address& sender, const WorldState& state);
  void erase(const TxHash& hash);

  PoolConfig config_;
  std::map<TxHash, PoolEntry> entries_;
  std::map<Address, std::map<uint64_t, TxHash>> by_sender_;
};

}  // namespace sls
