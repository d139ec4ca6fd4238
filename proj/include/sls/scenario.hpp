// slsim: rollup sequencer simulator with transaction quarantine
// Copyright 2026 The slsim Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "sls/l1da.hpp"
#include "sls/mempool.hpp"
#include "sls/quarantine.hpp"

namespace sls {

struct SequencerConfig {
  uint64_t block_time = 2;  // seconds
  uint64_t blocks_per_epoch = 4;
  uint64_t base_fee = 1;
  size_t detection_budget = 16;  // sequential simulations per block
  Address fee_recipient;
  bool detection_enabled = true;
  unsigned detection_workers = 1;
};

class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(size_t line, const std::string& reason);
  size_t line() const { return line_; }
  const std::string& reason() const { return reason_; }

 private:
  size_t line_;
  std::string reason_;
};

namespace event {
struct Submit {
  std::string label;
  SignedTransaction tx;
};
struct Deposit {
  std::string label;
  Address sender;
  Address recipient;
  u128 value = 0;
  Bytes data;
  uint64_t gas_limit = base_tx_gas;
};
struct Approve {
  std::string tx;
  Address approver;
};
struct Stake {
  Address account;
  u128 amount = 0;
};
struct EconomicRelease {
  std::string tx;
};
struct FailureRelease {
  std::string tx;
};
struct SetBaseFee {
  uint64_t base_fee = 0;
};
struct Advance {
  uint64_t seconds = 0;
};
struct EscapeWithdraw {
  std::string deposit;
};
}  // namespace event

using EventBody = std::variant<event::Submit, event::Deposit, event::Approve, event::Stake, event::EconomicRelease,
                               event::FailureRelease, event::SetBaseFee, event::Advance, event::EscapeWithdraw>;

struct Event {
  uint64_t time = 0;
  size_t line = 0;  // source line, 0 when built programmatically
  EventBody body;
};

struct Scenario {
  SequencerConfig sequencer;
  QuarantineConfig quarantine;
  PoolConfig pool;
  uint64_t escape_timeout = default_escape_timeout;
  uint64_t blocks = 10;

  WorldState genesis;
  InvariantSet invariants;
  std::map<Address, std::string> names;
  std::vector<Event> events;  // non-decreasing time
};

}  // namespace sls
