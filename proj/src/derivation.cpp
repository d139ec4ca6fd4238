// slsim: rollup sequencer simulator with transaction quarantine
// Copyright 2026 The slsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include "sls/derivation.hpp"

namespace sls {

std::string_view to_string(DerivationErrc e) {
  switch (e) {
    case DerivationErrc::gap:
      return "DERIVATION_GAP";
    case DerivationErrc::bitmap_mismatch:
      return "BITMAP_MISMATCH";
    case DerivationErrc::invalid_block:
      return "INVALID_BLOCK";
  }
  return "?";
}

DerivationError::DerivationError(DerivationErrc code, uint64_t where, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + "(" + std::to_string(where) + "): " + detail),
      code_(code),
      where_(where) {}

DerivedChain derive(const L1History& history) {
  const uint64_t bpe = history.genesis.blocks_per_epoch;
  if (bpe == 0) throw DerivationError(DerivationErrc::gap, 0, "blocks_per_epoch is zero");

  DerivedChain chain;
  WorldState state = history.genesis.state;

  for (size_t l1_number = 0; l1_number < history.blocks.size(); ++l1_number) {
    const L1Block& l1_block = history.blocks[l1_number];
    if (l1_block.number != l1_number)
      throw DerivationError(DerivationErrc::gap, l1_number, "L1 block numbers are not contiguous");

    for (const L1Record& rec : l1_block.inbox_posts) {
      const uint64_t n = chain.blocks.size();
      if (rec.l2_block != n)
        throw DerivationError(DerivationErrc::gap, n / bpe,
                              "expected L2 block " + std::to_string(n) + ", found " + std::to_string(rec.l2_block));
      if (rec.epoch != n / bpe || rec.epoch_head != (n % bpe == 0))
        throw DerivationError(DerivationErrc::gap, rec.epoch, "record epoch does not match L2 block " +
                                                                  std::to_string(n));
      if (rec.epoch >= l1_number)
        throw DerivationError(DerivationErrc::gap, rec.epoch, "record posted before its epoch was sealed");

      Block block;
      block.number = n;
      if (n > 0) block.parent_hash = block_hash(chain.blocks.back());
      block.timestamp = rec.timestamp;
      block.base_fee = rec.base_fee;
      block.epoch = rec.epoch;
      block.transactions = rec.batch;

      if (rec.epoch_head) {
        const auto& deposits = history.blocks[rec.epoch].deposits;
        if (rec.deposit_count != deposits.size())
          throw DerivationError(DerivationErrc::bitmap_mismatch, n,
                                "bitmap covers " + std::to_string(rec.deposit_count) + " deposits, epoch has " +
                                    std::to_string(deposits.size()));
        std::vector<bool> flags;
        try {
          flags = decode_bitmap(rec.deposit_bitmap, deposits.size());
        } catch (const L1Error& e) {
          throw DerivationError(DerivationErrc::bitmap_mismatch, n, e.what());
        }
        for (size_t i = 0; i < deposits.size(); ++i)
          if (flags[i]) block.deposits.push_back(deposits[i]);
      }

      try {
        state = apply_block(state, block, history.genesis.fee_recipient);
      } catch (const InvalidBlock& e) {
        throw DerivationError(DerivationErrc::invalid_block, n, e.what());
      }
      block.state_root = state_root(state);
      chain.blocks.push_back(std::move(block));
    }
  }
  chain.final_root = state_root(state);
  chain.final_state = std::move(state);
  return chain;
}

}  // namespace sls
