// slsim: rollup sequencer simulator with transaction quarantine
// Copyright 2026 The slsim Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "sls/vm.hpp"

namespace sls {

/// Deposit index i maps to bit (i mod 256) of word i/256; bit 0 is the least
/// significant bit.
std::vector<Word> encode_bitmap(const std::vector<bool>& flags);
std::vector<bool> decode_bitmap(std::span<const Word> words, size_t count);

enum class L1Errc { bitmap_too_short, bitmap_mismatch, epoch_not_sealed, not_found };

std::string_view to_string(L1Errc e);

class L1Error : public std::runtime_error {
 public:
  explicit L1Error(L1Errc code, const std::string& detail = {});
  L1Errc code() const { return code_; }

 private:
  L1Errc code_;
};

/// Batch data for one L2 block. Only the first block of an epoch carries the
/// deposit acceptance bitmap.
struct L1Record {
  uint64_t epoch = 0;
  uint64_t l2_block = 0;
  uint64_t timestamp = 0;
  uint64_t base_fee = 0;
  bool epoch_head = false;
  std::vector<SignedTransaction> batch;
  uint32_t deposit_count = 0;  // deposits of L1 block `epoch` covered by the bitmap
  std::vector<Word> deposit_bitmap;

  friend bool operator==(const L1Record&, const L1Record&) = default;
};

struct L1Block {
  uint64_t number = 0;
  uint64_t timestamp = 0;
  std::vector<DepositTransaction> deposits;
  std::vector<L1Record> inbox_posts;

  friend bool operator==(const L1Block&, const L1Block&) = default;
};

/// Everything a replica needs besides L1 blocks: the L2 genesis and the
/// parameters that shape block headers.
struct RollupGenesis {
  Address fee_recipient;
  uint64_t blocks_per_epoch = 4;
  WorldState state;
};

struct L1History {
  RollupGenesis genesis;
  std::vector<L1Block> blocks;
};

enum class EscrowStatus { pending, accepted, refused, refunded };

std::string_view to_string(EscrowStatus s);

struct EscrowEntry {
  DepositTransaction deposit;
  EscrowStatus status = EscrowStatus::pending;
  uint64_t submitted_at = 0;
  uint64_t refundable_at = 0;
};

enum class EscapeOutcome { refunded, already_accepted, too_early, already_refunded };

std::string_view to_string(EscapeOutcome o);

struct EscapeResult {
  EscapeOutcome outcome = EscapeOutcome::refunded;
  u128 value = 0;  // refunded amount
};

inline constexpr uint64_t default_escape_timeout = 7 * 86400;

/// Simulated L1: deposit escrow and the batch inbox. One L1 block is sealed
/// per L2 epoch; deposits and posts accumulate in the open block until then.
class L1Chain {
 public:
  explicit L1Chain(uint64_t escape_timeout = default_escape_timeout) : escape_timeout_(escape_timeout) {}

  /// Escrows `value` and queues the deposit in the open block.
  DepositTransaction submit_deposit(const Address& sender, const Address& recipient, u128 value, Bytes data,
                                    uint64_t gas_limit, uint64_t now);

  const L1Block& seal_block(uint64_t timestamp);

  /// Appends to the open block and settles escrow for the head record's epoch.
  void post_batch(L1Record record);

  EscapeResult escape_withdraw(const DepositId& id, uint64_t now);

  /// Sealed blocks plus the open block, if it holds anything.
  std::vector<L1Block> history() const;

  std::span<const L1Block> sealed() const { return sealed_; }
  const L1Block& open_block() const { return open_; }
  const EscrowEntry& escrow(const DepositId& id) const;
  const std::map<DepositId, EscrowEntry>& escrows() const { return escrow_; }
  u128 escrowed_value() const;  // PENDING and REFUSED deposits
  uint64_t escape_timeout() const { return escape_timeout_; }

 private:
  uint64_t escape_timeout_;
  std::vector<L1Block> sealed_;
  L1Block open_;
  std::map<DepositId, EscrowEntry> escrow_;
};

/// Every deposit is in exactly one place: minted on L2 (and ACCEPTED), refunded
/// on L1, or still escrowed. Returns a description of the first violation.
std::optional<std::string> check_conservation(const L1Chain& l1, const std::set<DepositId>& minted_on_l2);

}  // namespace sls
