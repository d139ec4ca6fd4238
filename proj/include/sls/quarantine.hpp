// slsim: rollup sequencer simulator with transaction quarantine
// Copyright 2026 The slsim Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "sls/detection.hpp"

namespace sls {

struct QuarantineConfig {
  uint64_t time_criterion_period = 86400;  // seconds
  std::set<Address> operators;
};

enum class EntryState { active, released, retired };

enum class AuditKind {
  admitted,
  approval,
  pending_approvals,
  released_administrative,
  released_time,
  released_failure,
  released_economic,
  still_held,
  insufficient_collateral,
  retired_nonce,
  retired_mempool,
  replaced,
  release_denied,
};

std::string_view to_string(EntryState s);
std::string_view to_string(AuditKind k);

struct AuditRecord {
  uint64_t time = 0;
  uint64_t block = 0;
  AuditKind kind = AuditKind::admitted;
  std::optional<Address> actor;
  std::string detail;

  friend bool operator==(const AuditRecord&, const AuditRecord&) = default;
};

struct QuarantineEntry {
  uint64_t serial = 0;  // admission order within the run
  Transaction tx;
  TxHash hash;
  Verdict verdict;
  uint64_t quarantined_at = 0;
  uint64_t quarantined_block = 0;
  std::set<Address> approvals;
  bool is_deposit = false;
  EntryState state = EntryState::active;
  std::vector<AuditRecord> audit;
};

enum class QuarantineErrc { already_quarantined, not_found, not_authorized, deposit_not_releasable };

std::string_view to_string(QuarantineErrc e);

class QuarantineError : public std::runtime_error {
 public:
  explicit QuarantineError(QuarantineErrc code);
  QuarantineErrc code() const { return code_; }

 private:
  QuarantineErrc code_;
};

/// Staked collateral per account, plus amounts locked against released
/// transactions until those leave the pool.
class CollateralLedger {
 public:
  void stake(const Address& account, u128 amount) { stakes_[account] += amount; }
  u128 available(const Address& account) const;
  u128 locked(const TxHash& hash) const;

  void lock(const TxHash& hash, const Address& account, u128 amount);
  /// Returns the refunded amount (zero when nothing was locked).
  u128 refund(const TxHash& hash);

  const std::map<Address, u128>& stakes() const { return stakes_; }

 private:
  std::map<Address, u128> stakes_;
  std::map<TxHash, std::pair<Address, u128>> locks_;
};

/// Duplicate keys of every transaction released so far. Never shrinks.
class ReleasedRegistry {
 public:
  void note(const DuplicateKey& key) { keys_.insert(key); }
  bool contains(const DuplicateKey& key) const { return keys_.contains(key); }
  size_t size() const { return keys_.size(); }

 private:
  std::set<DuplicateKey> keys_;
};

enum class ReleaseOutcome { released, still_held };

struct ApprovalOutcome {
  bool released = false;
  std::vector<Address> missing;  // victims whose admin has not approved yet
};

struct EconomicOutcome {
  bool released = false;
  u128 needed = 0;  // stake must exceed this
};

struct MaintenanceReport {
  std::vector<TxHash> retired;
  std::vector<TxHash> time_released;
};

struct ReplacementDirective {
  bool quarantine_new = false;  // false when the replacement is a released duplicate
};

/// Holding area for transactions flagged malicious.
///
/// Per-block maintenance applies only the cheap criteria (nonce and time) and
/// never simulates. Failure, administrative and economic release are applied
/// only when explicitly requested. Deposits are held forever.
class Quarantine {
 public:
  explicit Quarantine(QuarantineConfig config = {}) : config_(std::move(config)) {}

  const QuarantineEntry& admit(const Transaction& tx, const Verdict& verdict, uint64_t now, uint64_t block_no);

  MaintenanceReport per_block_maintenance(const WorldState& chain_state, uint64_t now, uint64_t block_no);

  /// Re-simulates the entry on `tip`; releases it when it now reverts or the
  /// sender can no longer afford it.
  ReleaseOutcome request_failure_release(const TxHash& hash, const WorldState& tip, const BlockContext& ctx,
                                         uint64_t now, uint64_t block_no);

  /// `state` supplies the admins of the victim contracts.
  ApprovalOutcome approve_release(const TxHash& hash, const Address& approver, const WorldState& state,
                                  uint64_t now, uint64_t block_no);

  /// Releases when the sender's available stake strictly exceeds the damage
  /// estimate; the damage amount is then locked in `ledger`.
  EconomicOutcome try_economic_release(const TxHash& hash, CollateralLedger& ledger, uint64_t now,
                                       uint64_t block_no);

  /// The pool dropped the transaction; the entry leaves as if it never entered.
  void on_mempool_retired(const TxHash& hash, std::string_view reason, uint64_t now, uint64_t block_no);

  /// `old_hash` was replaced in the pool by `new_tx`. The old entry stays.
  ReplacementDirective on_replacement(const TxHash& old_hash, const SignedTransaction& new_tx, uint64_t now,
                                      uint64_t block_no);

  bool is_active(const TxHash& hash) const { return active_.contains(hash); }
  bool is_released_duplicate(const SignedTransaction& tx) const;

  const QuarantineEntry* active_entry(const TxHash& hash) const;
  std::span<const QuarantineEntry> entries() const { return entries_; }  // every admission, in order
  size_t active_count() const { return active_.size(); }
  const ReleasedRegistry& registry() const { return registry_; }
  const QuarantineConfig& config() const { return config_; }

 private:
  QuarantineEntry& active_or_throw(const TxHash& hash);
  QuarantineEntry& releasable_or_throw(const TxHash& hash, uint64_t now, uint64_t block_no);
  void release(QuarantineEntry& e, AuditKind kind, uint64_t now, uint64_t block_no, std::optional<Address> actor,
               std::string detail = {});
  void retire(QuarantineEntry& e, AuditKind kind, uint64_t now, uint64_t block_no, std::string detail);

  QuarantineConfig config_;
  std::vector<QuarantineEntry> entries_;
  std::map<TxHash, size_t> active_;  // hash -> index into entries_
  ReleasedRegistry registry_;
};

}  // namespace sls
