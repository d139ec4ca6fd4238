// slsim: rollup sequencer simulator with transaction quarantine
// Copyright 2026 The slsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include "sls/core.hpp"

namespace sls {

Address address_from_name(std::string_view name) {
  auto digest = sha256(name);
  return Address::from_span(BytesView(digest.bytes).subspan(12));
}

Address to_address(const Word& w) {
  auto b = w.to_bytes();
  return Address::from_span(BytesView(b).subspan(12));
}

Bytes canonical_encode(const SignedTransaction& tx) {
  ByteWriter w;
  w.u64(tx.nonce);
  w.raw(tx.sender.bytes);
  w.u8(tx.is_create() ? 0x01 : 0x00);
  w.raw(tx.recipient.value_or(Address{}).bytes);
  w.u128(tx.value);
  w.u64(tx.max_fee);
  w.u64(tx.priority_fee);
  w.u64(tx.gas_limit);
  w.blob(tx.data);
  return std::move(w).take();
}

Bytes canonical_encode(const DepositTransaction& tx) {
  ByteWriter w;
  w.u64(tx.l1_block);
  w.u32(tx.l1_index);
  w.raw(tx.sender.bytes);
  w.raw(tx.recipient.bytes);
  w.u128(tx.value);
  w.u64(tx.gas_limit);
  w.blob(tx.data);
  return std::move(w).take();
}

SignedTransaction decode_signed_transaction(BytesView encoded) {
  ByteReader r(encoded);
  SignedTransaction tx;
  tx.nonce = r.u64();
  tx.sender = Address::from_span(r.raw(20));
  auto tag = r.u8();
  auto recipient = Address::from_span(r.raw(20));
  if (tag == 0x00)
    tx.recipient = recipient;
  else if (tag != 0x01 || !recipient.is_zero())
    throw DecodeError("transaction: invalid recipient tag");
  tx.value = r.u128();
  tx.max_fee = r.u64();
  tx.priority_fee = r.u64();
  tx.gas_limit = r.u64();
  tx.data = r.blob();
  r.expect_done();
  return tx;
}

DepositTransaction decode_deposit_transaction(BytesView encoded) {
  ByteReader r(encoded);
  DepositTransaction tx;
  tx.l1_block = r.u64();
  tx.l1_index = r.u32();
  tx.sender = Address::from_span(r.raw(20));
  tx.recipient = Address::from_span(r.raw(20));
  tx.value = r.u128();
  tx.gas_limit = r.u64();
  tx.data = r.blob();
  r.expect_done();
  return tx;
}

TxHash tx_hash(const SignedTransaction& tx) {
  auto d = sha256(canonical_encode(tx));
  return TxHash{d.bytes};
}

TxHash tx_hash(const DepositTransaction& tx) {
  static constexpr uint8_t deposit_type = 0x7e;
  Sha256 h;
  h.update(BytesView(&deposit_type, 1));
  h.update(canonical_encode(tx));
  return TxHash{h.finish().bytes};
}

TxHash tx_hash(const Transaction& tx) {
  return std::visit([](const auto& t) { return tx_hash(t); }, tx);
}

DuplicateKey duplicate_key(const SignedTransaction& tx) {
  return {tx.sender, tx.recipient, tx.data, tx.value};
}

Bytes encode_block(const Block& block) {
  ByteWriter w;
  w.u64(block.number);
  w.raw(block.parent_hash.bytes);
  w.u64(block.timestamp);
  w.u64(block.base_fee);
  w.u64(block.epoch);
  w.raw(block.state_root.bytes);
  w.u32(static_cast<uint32_t>(block.deposits.size()));
  for (const auto& d : block.deposits) w.blob(canonical_encode(d));
  w.u32(static_cast<uint32_t>(block.transactions.size()));
  for (const auto& tx : block.transactions) w.blob(canonical_encode(tx));
  return std::move(w).take();
}

Hash32 block_hash(const Block& block) {
  return sha256(encode_block(block));
}

}  // namespace sls
