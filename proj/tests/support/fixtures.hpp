// slsim: rollup sequencer simulator with transaction quarantine
// Copyright 2026 The slsim Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "sls/cli.hpp"

#include <filesystem>
#include <random>

namespace sls::testing {

/// Contract P with a pause guard and a solvency invariant, an admin who can
/// unpause it (tx A) and an attacker who drains it (tx B).
struct PauseFixture {
  Address admin = address_from_name("admin");
  Address attacker = address_from_name("attacker");
  Address contract = address_from_name("P");
  Address fee_recipient = address_from_name("fee_recipient");
  WorldState state;
  InvariantSet invariants;
  SignedTransaction unpause;  // A
  SignedTransaction drain;    // B
  SignedTransaction repause;  // admin, after A
  BlockContext context;

  static constexpr u128 contract_balance = 1000;

  PauseFixture();

  CandidateSet candidates(std::vector<SignedTransaction> txs) const;
};

Word word_of(std::string_view ascii);

SignedTransaction transfer(const Address& from, uint64_t nonce, const Address& to, u128 value,
                           uint64_t max_fee = 10, uint64_t prio = 1);
SignedTransaction call(const Address& from, uint64_t nonce, const Address& to, std::string_view fn,
                       std::vector<Word> args = {}, uint64_t max_fee = 10, uint64_t prio = 1, uint64_t gas = 100);

/// Reference classification: each candidate is simulated in order on the
/// state left by the benign candidates before it.
struct OracleOutcome {
  std::vector<TxHash> benign;
  std::vector<std::pair<TxHash, Verdict>> malicious;
  std::vector<TxHash> deferred;

  friend bool operator==(const OracleOutcome&, const OracleOutcome&) = default;
};

OracleOutcome sequential_oracle(const CandidateSet& set, const InvariantSet& invariants, const Detector& detector);
OracleOutcome summarize(const DetectionOutcome& outcome);

/// Random candidate sets over up to three contracts with mixed invariants.
struct GeneratedCase {
  CandidateSet set;
  InvariantSet invariants;
};

GeneratedCase generate_case(std::mt19937_64& rng);

/// Bit i of the flags lives in word i / 256 at big-endian bit position i % 256.
std::vector<std::array<uint8_t, 32>> reference_bitmap(const std::vector<bool>& flags);

std::filesystem::path scenario_dir();
std::vector<std::filesystem::path> corpus();
std::string read_file(const std::filesystem::path& path);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace sls::testing
