// slsim: rollup sequencer simulator with transaction quarantine
// Copyright 2026 The slsim Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "sls/bytes.hpp"
#include "sls/hash.hpp"

#include <optional>
#include <variant>

namespace sls {

struct AddressTag;
struct TxHashTag;
struct StateRootTag;

using Address = FixedBytes<20, AddressTag>;
using TxHash = FixedBytes<32, TxHashTag>;
using StateRoot = FixedBytes<32, StateRootTag>;

/// Address derived from a human-readable name (last 20 bytes of its SHA-256).
Address address_from_name(std::string_view name);

inline Word to_word(const Address& a) {
  return Word::from_bytes(a.bytes);
}
/// Low 20 bytes of the word.
Address to_address(const Word& w);

/// Minimum gas any transaction consumes.
inline constexpr uint64_t base_tx_gas = 21;

struct SignedTransaction {
  Address sender;
  uint64_t nonce = 0;
  std::optional<Address> recipient;  // nullopt: contract creation
  u128 value = 0;
  Bytes data;
  uint64_t max_fee = 0;
  uint64_t priority_fee = 0;
  uint64_t gas_limit = base_tx_gas;

  bool is_create() const { return !recipient.has_value(); }
  bool well_formed() const { return priority_fee <= max_fee && gas_limit >= base_tx_gas; }

  friend bool operator==(const SignedTransaction&, const SignedTransaction&) = default;
};

struct DepositId {
  uint64_t l1_block = 0;
  uint32_t l1_index = 0;

  auto operator<=>(const DepositId&) const = default;
};

struct DepositTransaction {
  uint64_t l1_block = 0;
  uint32_t l1_index = 0;
  Address sender;
  Address recipient;
  u128 value = 0;
  Bytes data;
  uint64_t gas_limit = base_tx_gas;

  DepositId id() const { return {l1_block, l1_index}; }

  friend bool operator==(const DepositTransaction&, const DepositTransaction&) = default;
};

using Transaction = std::variant<SignedTransaction, DepositTransaction>;

/// Bit-exact encoding, all integers big-endian:
///   nonce(8) sender(20) tag(1) recipient(20) value(16) max_fee(8)
///   priority_fee(8) gas_limit(8) data_len(4) data
/// tag is 0x01 for contract creation (recipient bytes zero), 0x00 otherwise.
Bytes canonical_encode(const SignedTransaction& tx);

/// l1_block(8) l1_index(4) sender(20) recipient(20) value(16) gas_limit(8) data_len(4) data
Bytes canonical_encode(const DepositTransaction& tx);

SignedTransaction decode_signed_transaction(BytesView encoded);
DepositTransaction decode_deposit_transaction(BytesView encoded);

/// SHA-256 of the canonical encoding.
TxHash tx_hash(const SignedTransaction& tx);
/// SHA-256 of 0x7e followed by the canonical deposit encoding.
TxHash tx_hash(const DepositTransaction& tx);
TxHash tx_hash(const Transaction& tx);

/// Gas-free identity used to recognise resubmissions of released transactions.
struct DuplicateKey {
  Address sender;
  std::optional<Address> recipient;
  Bytes data;
  u128 value = 0;

  auto operator<=>(const DuplicateKey&) const = default;
};

DuplicateKey duplicate_key(const SignedTransaction& tx);

struct Block {
  uint64_t number = 0;
  Hash32 parent_hash;
  uint64_t timestamp = 0;
  uint64_t base_fee = 0;
  uint64_t epoch = 0;
  std::vector<DepositTransaction> deposits;
  std::vector<SignedTransaction> transactions;
  StateRoot state_root;

  friend bool operator==(const Block&, const Block&) = default;
};

/// Full canonical block encoding (header fields, then each deposit and
/// transaction as length-prefixed canonical encodings).
Bytes encode_block(const Block& block);
Hash32 block_hash(const Block& block);

}  // namespace sls
