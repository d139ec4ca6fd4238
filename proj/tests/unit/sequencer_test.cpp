// slsim: rollup sequencer simulator with transaction quarantine
// Copyright 2026 The slsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fixtures.hpp"

#include <gtest/gtest.h>

using namespace sls;
using namespace sls::testing;

namespace {

struct Rig {
  PauseFixture f;
  SequencerConfig config;
  QuarantineConfig qconfig;
  PoolConfig pconfig;

  Rig() { config.fee_recipient = f.fee_recipient; }

  Sequencer make(WorldState genesis, InvariantSet invariants) const {
    return Sequencer(config, qconfig, pconfig, 1000, std::move(genesis), std::move(invariants));
  }
  Sequencer make() const { return make(f.state, f.invariants); }
};

std::vector<TxHash> included(const Block& b) {
  std::vector<TxHash> out;
  for (const auto& tx : b.transactions) out.push_back(tx_hash(tx));
  return out;
}

}  // namespace

TEST(Sequencer, EmptyBlocksChainTogether) {
  Rig rig;
  Sequencer seq = rig.make();
  for (uint64_t t : {2, 4, 6}) seq.build_block(t);
  ASSERT_EQ(seq.blocks().size(), 3u);
  Hash32 parent{};
  for (const auto& b : seq.blocks()) {
    EXPECT_EQ(b.parent_hash, parent);
    EXPECT_TRUE(b.transactions.empty());
    EXPECT_EQ(b.state_root, state_root(rig.f.state));
    parent = block_hash(b);
  }
  EXPECT_EQ(seq.blocks()[2].timestamp, 6u);
}

TEST(Sequencer, EpochsAndL1Blocks) {
  Rig rig;
  rig.config.blocks_per_epoch = 2;
  Sequencer seq = rig.make();
  for (uint64_t t = 2; t <= 10; t += 2) seq.build_block(t);
  std::vector<uint64_t> epochs;
  for (const auto& b : seq.blocks()) epochs.push_back(b.epoch);
  EXPECT_EQ(epochs, (std::vector<uint64_t>{0, 0, 1, 1, 2}));
  EXPECT_EQ(seq.l1().sealed().size(), 3u);
}

TEST(Sequencer, SingleTransferIsIncluded) {
  Rig rig;
  Sequencer seq = rig.make();
  const auto tx = transfer(rig.f.admin, 0, rig.f.attacker, 500, 10, 2);
  ASSERT_TRUE(std::holds_alternative<Accepted>(seq.submit(tx, 1)));
  const Block& b = seq.build_block(2);
  EXPECT_EQ(included(b), std::vector<TxHash>{tx_hash(tx)});
  EXPECT_EQ(seq.tip_state().balance(rig.f.attacker), 100000u + 500u);
  EXPECT_EQ(seq.tip_state().balance(rig.f.fee_recipient), 21u * 2u);
  EXPECT_EQ(seq.pool().size(), 0u);
  EXPECT_EQ(b.state_root, state_root(seq.tip_state()));
}

TEST(Sequencer, PauseExploitIsQuarantined) {
  Rig rig;
  Sequencer seq = rig.make();
  seq.submit(rig.f.unpause, 1);
  seq.submit(rig.f.drain, 1);
  const Block& b = seq.build_block(2);
  EXPECT_EQ(included(b), std::vector<TxHash>{tx_hash(rig.f.unpause)});
  EXPECT_TRUE(seq.quarantine().is_active(tx_hash(rig.f.drain)));
  EXPECT_NE(seq.pool().find(tx_hash(rig.f.drain)), nullptr);
  seq.build_block(4);
  EXPECT_TRUE(seq.blocks()[1].transactions.empty());
  EXPECT_EQ(seq.counters().maintenance_sims, 0u);
}

TEST(Sequencer, FloodOfMaliciousTransactionsDoesNotBlockBenignOnes) {
  Rig rig;
  const Address vault = address_from_name("vault");
  WorldState genesis = rig.f.state;
  ContractCode code;
  code.admin = rig.f.admin;
  code.fallback = {Statement::set(Expr::caller(), Expr::constant(Word{1}))};
  genesis.set_code(vault, code);
  InvariantSet inv;
  inv.add({"untouched", vault, Expr::binary(Expr::Op::eq, Expr::sload(Expr::caller()), Expr::constant(Word{})),
           rig.f.admin},
          genesis);
  std::vector<SignedTransaction> bad;
  for (int i = 0; i < 100; ++i) {
    const Address a = address_from_name("m" + std::to_string(i));
    genesis.set_balance(a, 5000);
    bad.push_back(transfer(a, 0, vault, 0, 10, 9));
  }
  const std::array<Address, 3> users{address_from_name("u0"), address_from_name("u1"), address_from_name("u2")};
  for (const auto& u : users) genesis.set_balance(u, 5000);

  Sequencer seq = rig.make(genesis, inv);
  for (const auto& tx : bad) seq.submit(tx, 1);
  std::vector<TxHash> good;
  for (size_t i = 0; i < users.size(); ++i) {
    good.push_back(tx_hash(transfer(users[i], 0, rig.f.admin, 1, 10, 1)));
    seq.submit(transfer(users[i], 0, rig.f.admin, 1, 10, 1), 1);
  }
  const Block& b = seq.build_block(2);
  auto got = included(b);
  std::sort(got.begin(), got.end());
  std::sort(good.begin(), good.end());
  EXPECT_EQ(got, good);
  EXPECT_EQ(seq.quarantine().active_count(), 100u);
  EXPECT_EQ(seq.counters().contextual_sims, 0u);
  EXPECT_EQ(seq.counters().deferred_count, 0u);
}

TEST(Sequencer, DepositsComeFirstAndMaliciousOnesAreRefused) {
  Rig rig;
  const Address alice = address_from_name("alice");
  WorldState genesis = rig.f.state;
  genesis.set_storage(rig.f.contract, word_of("paused"), Word{});
  Sequencer seq = rig.make(genesis, rig.f.invariants);

  auto d0 = seq.deposit({"d0", alice, alice, 500, {}, 21}, 1);
  auto d1 = seq.deposit({"d1", rig.f.attacker, rig.f.contract, 25, encode_call("drain"), 100}, 1);
  auto d2 = seq.deposit({"d2", alice, alice, 70, {}, 21}, 1);
  const auto tx = transfer(rig.f.admin, 0, alice, 1);
  seq.submit(tx, 1);
  const Block& b = seq.build_block(2);

  ASSERT_EQ(b.deposits.size(), 2u);
  EXPECT_EQ(b.deposits[0], d0);
  EXPECT_EQ(b.deposits[1], d2);
  EXPECT_EQ(included(b), std::vector<TxHash>{tx_hash(tx)});
  EXPECT_EQ(seq.tip_state().balance(alice), 571u);

  const auto& post = seq.l1().open_block().inbox_posts.at(0);
  EXPECT_TRUE(post.epoch_head);
  EXPECT_EQ(post.deposit_bitmap, std::vector<Word>{Word{5}});
  EXPECT_EQ(seq.l1().escrow(d1.id()).status, EscrowStatus::refused);
  EXPECT_TRUE(seq.quarantine().is_active(tx_hash(d1)));
  EXPECT_EQ(seq.minted(), (std::set<DepositId>{d0.id(), d2.id()}));
  EXPECT_FALSE(check_conservation(seq.l1(), seq.minted()).has_value());
  EXPECT_EQ(seq.counters().deposit_sims, 3u);

  EXPECT_EQ(seq.escape_withdraw(d1.id(), 3).value, 25u);
  EXPECT_EQ(seq.escape_withdraw(d1.id(), 4).outcome, EscapeOutcome::already_refunded);
}

TEST(Sequencer, DepositsWaitForTheNextEpochHead) {
  Rig rig;
  const Address alice = address_from_name("alice");
  Sequencer seq = rig.make();
  seq.build_block(2);
  seq.deposit({"late", alice, alice, 9, {}, 21}, 3);
  for (uint64_t t = 4; t <= 8; t += 2) EXPECT_TRUE(seq.build_block(t).deposits.empty());
  const Block& head = seq.build_block(10);
  EXPECT_EQ(head.number, 4u);
  EXPECT_EQ(head.deposits.size(), 1u);
}

TEST(Sequencer, ThroughputNeutralWithoutDetection) {
  Rig rig;
  auto run_with = [&](bool detection, bool invariants) {
    Rig r = rig;
    r.config.detection_enabled = detection;
    Sequencer seq = r.make(rig.f.state, invariants ? rig.f.invariants : InvariantSet{});
    seq.submit(transfer(rig.f.admin, 0, rig.f.attacker, 3), 1);
    seq.submit(transfer(rig.f.attacker, 0, rig.f.admin, 4), 1);
    seq.submit(transfer(rig.f.admin, 1, rig.f.attacker, 5), 3);
    seq.build_block(2);
    seq.build_block(4);
    return std::make_pair(std::vector<Block>(seq.blocks().begin(), seq.blocks().end()), seq.counters());
  };
  auto [plain_blocks, plain_counters] = run_with(false, true);
  auto [bare_blocks, bare_counters] = run_with(true, false);
  auto [detected_blocks, detected_counters] = run_with(true, true);
  EXPECT_EQ(plain_blocks, bare_blocks);
  EXPECT_EQ(plain_blocks, detected_blocks);
  EXPECT_EQ(plain_counters.isolated_sims, 0u);
  EXPECT_EQ(bare_counters.isolated_sims, 0u);
  EXPECT_GT(detected_counters.isolated_sims, 0u);
}

TEST(Sequencer, ReleasedTransactionRespectsBaseFee) {
  Rig rig;
  rig.qconfig.operators = {address_from_name("ops")};
  Sequencer seq = rig.make();
  seq.submit(rig.f.unpause, 1);
  seq.submit(rig.f.drain, 1);
  seq.build_block(2);
  seq.set_base_fee(20);
  EXPECT_TRUE(seq.approve(tx_hash(rig.f.drain), address_from_name("ops"), 3).released);
  EXPECT_TRUE(seq.build_block(4).transactions.empty());
  SignedTransaction bumped = rig.f.drain;
  bumped.max_fee = 30;
  ASSERT_TRUE(std::holds_alternative<Replaced>(seq.submit(bumped, 5)));
  EXPECT_EQ(included(seq.build_block(6)), std::vector<TxHash>{tx_hash(bumped)});
  EXPECT_EQ(seq.quarantine().entries().size(), 1u);
}

TEST(Sequencer, RunRejectsEventsAfterTheLastBlock) {
  Scenario s = load_scenario(scenario_dir() / "benign_transfers.slsim");
  s.events.push_back({s.blocks * s.sequencer.block_time + 1, 42, event::Advance{1}});
  try {
    run(s);
    FAIL() << "expected ScenarioError";
  } catch (const ScenarioError& e) {
    EXPECT_EQ(e.line(), 42u);
  }
}

TEST(SequencerProperty, ConservationHoldsAtEveryBlock) {
  for (const auto& p : corpus()) {
    RunOptions opts;
    opts.after_block = [&](const Sequencer& seq) {
      auto err = check_conservation(seq.l1(), seq.minted());
      EXPECT_FALSE(err.has_value()) << p.filename() << ": " << err.value_or("");
      EXPECT_EQ(seq.counters().maintenance_sims, 0u);
    };
    run(load_scenario(p), opts);
  }
}
