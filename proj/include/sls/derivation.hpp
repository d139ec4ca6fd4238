// slsim: rollup sequencer simulator with transaction quarantine
// Copyright 2026 The slsim Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "sls/l1da.hpp"

namespace sls {

struct DerivedChain {
  std::vector<Block> blocks;
  StateRoot final_root;
  WorldState final_state;
};

enum class DerivationErrc { gap, bitmap_mismatch, invalid_block };

std::string_view to_string(DerivationErrc e);

class DerivationError : public std::runtime_error {
 public:
  DerivationError(DerivationErrc code, uint64_t where, const std::string& detail);
  DerivationErrc code() const { return code_; }
  uint64_t where() const { return where_; }  // epoch for gaps, L2 block otherwise

 private:
  DerivationErrc code_;
  uint64_t where_;
};

/// Rebuilds the L2 chain from L1 data alone. Batch records are consumed in
/// posting order and must cover consecutive L2 blocks; each epoch head takes
/// the deposits its bitmap accepts, in L1 index order.
DerivedChain derive(const L1History& history);

}  // namespace sls
