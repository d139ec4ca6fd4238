// slsim: rollup sequencer simulator with transaction quarantine
// Copyright 2026 The slsim Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "sls/scenario.hpp"

#include <functional>

namespace sls {

struct Counters {
  uint64_t isolated_sims = 0;
  uint64_t contextual_sims = 0;
  uint64_t deposit_sims = 0;
  uint64_t maintenance_sims = 0;  // must stay zero
  uint64_t deferred_count = 0;
  uint64_t failure_sims = 0;

  friend bool operator==(const Counters&, const Counters&) = default;
};

/// A transaction that left the pool without being included.
struct PoolDrop {
  uint64_t block = 0;  // the block after which it was dropped
  uint64_t time = 0;
  TxHash hash;
  std::string reason;
};

struct EventLog {
  uint64_t time = 0;
  size_t line = 0;
  std::string text;
};

/// Block builder with malice detection, quarantine routing and batch posting.
/// External triggers are applied between blocks through the public methods.
class Sequencer {
 public:
  Sequencer(SequencerConfig config, QuarantineConfig qconfig, PoolConfig pconfig, uint64_t escape_timeout,
            WorldState genesis, InvariantSet invariants);

  SubmitResult submit(const SignedTransaction& tx, uint64_t now);
  DepositTransaction deposit(const event::Deposit& d, uint64_t now);
  ApprovalOutcome approve(const TxHash& hash, const Address& approver, uint64_t now);
  void stake(const Address& account, u128 amount) { ledger_.stake(account, amount); }
  EconomicOutcome economic_release(const TxHash& hash, uint64_t now);
  ReleaseOutcome failure_release(const TxHash& hash, uint64_t now);
  void set_base_fee(uint64_t fee) { base_fee_ = fee; }
  EscapeResult escape_withdraw(const DepositId& id, uint64_t now) { return l1_.escape_withdraw(id, now); }

  const Block& build_block(uint64_t timestamp);

  /// Seals the open L1 block so trailing posts become part of the history.
  void finish(uint64_t timestamp);

  bool detection_active() const { return config_.detection_enabled && !invariants_.empty(); }

  L1History history() const;
  std::span<const Block> blocks() const { return blocks_; }
  const WorldState& tip_state() const { return state_; }
  const Quarantine& quarantine() const { return quarantine_; }
  const Mempool& pool() const { return pool_; }
  const L1Chain& l1() const { return l1_; }
  const CollateralLedger& ledger() const { return ledger_; }
  const Counters& counters() const { return counters_; }
  const std::set<DepositId>& minted() const { return minted_; }
  std::span<const PoolDrop> pool_drops() const { return drops_; }
  const SequencerConfig& config() const { return config_; }
  uint64_t base_fee() const { return base_fee_; }

 private:
  uint64_t next_block() const { return blocks_.size(); }
  void drop_from_pool(const TxHash& hash);

  SequencerConfig config_;
  uint64_t base_fee_;
  WorldState genesis_;
  WorldState state_;
  InvariantSet invariants_;
  InvariantDetector detector_;
  Mempool pool_;
  Quarantine quarantine_;
  CollateralLedger ledger_;
  L1Chain l1_;
  std::vector<Block> blocks_;
  std::set<DepositId> minted_;
  std::vector<PoolDrop> drops_;
  Counters counters_;
};

struct RunReport {
  std::vector<Block> blocks;
  std::vector<QuarantineEntry> quarantine;
  Counters counters;
  std::vector<EventLog> events;
  std::vector<PoolDrop> pool_drops;
  std::map<DepositId, EscrowEntry> escrow;
  std::map<TxHash, std::string> labels;
  std::map<Address, std::string> names;
  StateRoot final_state_root;
  L1History l1;
};

struct RunOptions {
  std::optional<unsigned> workers;  // overrides the scenario's detection worker count
  std::function<void(const Sequencer&)> after_block;
};

/// Drives a scenario: before each block, events up to the block's timestamp
/// are applied in order; an advance event moves the clock forward without
/// producing blocks. Throws ScenarioError for events that cannot be applied.
RunReport run(const Scenario& scenario, const RunOptions& options = {});

}  // namespace sls
