// slsim: rollup sequencer simulator with transaction quarantine
// Copyright 2026 The slsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fixtures.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#ifndef SLSIM_SCENARIO_DIR
#error "SLSIM_SCENARIO_DIR must point at the scenario corpus"
#endif

namespace sls::testing {
namespace {

Expr op(Expr::Op o, Expr a, Expr b) {
  return Expr::binary(o, std::move(a), std::move(b));
}

Expr lit(u128 v) {
  return Expr::constant(Word{v});
}

Expr key(std::string_view ascii) {
  return Expr::constant(word_of(ascii));
}

}  // namespace

Word word_of(std::string_view ascii) {
  std::array<uint8_t, 32> bytes{};
  std::copy(ascii.begin(), ascii.end(), bytes.begin());
  return Word::from_bytes(bytes);
}

SignedTransaction transfer(const Address& from, uint64_t nonce, const Address& to, u128 value, uint64_t max_fee,
                           uint64_t prio) {
  SignedTransaction tx;
  tx.sender = from;
  tx.nonce = nonce;
  tx.recipient = to;
  tx.value = value;
  tx.max_fee = max_fee;
  tx.priority_fee = prio;
  tx.gas_limit = 100;
  return tx;
}

SignedTransaction call(const Address& from, uint64_t nonce, const Address& to, std::string_view fn,
                       std::vector<Word> args, uint64_t max_fee, uint64_t prio, uint64_t gas) {
  SignedTransaction tx = transfer(from, nonce, to, 0, max_fee, prio);
  tx.data = encode_call(fn, args);
  tx.gas_limit = gas;
  return tx;
}

PauseFixture::PauseFixture() {
  state.set_balance(admin, 100000);
  state.set_balance(attacker, 100000);

  ContractCode code;
  code.admin = admin;
  const Expr is_admin = op(Expr::Op::eq, Expr::caller(), Expr::constant(to_word(admin)));
  code.functions[selector_of("unpause")] = {Statement::require(is_admin), Statement::set(key("paused"), lit(0))};
  code.functions[selector_of("pause")] = {Statement::require(is_admin), Statement::set(key("paused"), lit(1))};
  code.functions[selector_of("drain")] = {Statement::pause_guard(key("paused")),
                                          Statement::pay(Expr::caller(), Expr::balance(Expr::self()))};
  state.set_code(contract, code);
  state.set_balance(contract, contract_balance);
  state.set_storage(contract, word_of("paused"), Word{1});

  // solvent: balance(self) >= 1000, written as NOT(balance(self) < 1000)
  invariants.add({"solvent", contract,
                  Expr::unary(Expr::Op::lnot, op(Expr::Op::lt, Expr::balance(Expr::self()), lit(contract_balance))),
                  admin},
                 state);

  unpause = call(admin, 0, contract, "unpause", {}, 10, 5);
  drain = call(attacker, 0, contract, "drain", {}, 10, 1);
  repause = call(admin, 1, contract, "pause", {}, 10, 5);
  context = {1, 2, fee_recipient};
}

CandidateSet PauseFixture::candidates(std::vector<SignedTransaction> txs) const {
  CandidateSet set;
  for (auto& tx : txs) set.txs.push_back({std::move(tx), false});
  set.tip_state = state;
  set.context = context;
  return set;
}

OracleOutcome sequential_oracle(const CandidateSet& set, const InvariantSet& invariants, const Detector& detector) {
  OracleOutcome out;
  WorldState state = set.tip_state;
  for (const auto& cand : set.txs) {
    const TxHash h = tx_hash(cand.tx);
    SimulationResult sim = execute_transaction(state, cand.tx, set.context);
    if (!sim.executed()) {
      out.deferred.push_back(h);
      continue;
    }
    Verdict v = cand.cleared ? Verdict{} : detect(detector, sim, state, invariants);
    if (v.malicious) {
      out.malicious.emplace_back(h, std::move(v));
    } else {
      state = std::move(sim.post_state);
      out.benign.push_back(h);
    }
  }
  return out;
}

OracleOutcome summarize(const DetectionOutcome& outcome) {
  OracleOutcome out;
  for (const auto& tx : outcome.benign) out.benign.push_back(tx_hash(tx));
  for (const auto& f : outcome.malicious) out.malicious.emplace_back(tx_hash(f.tx), f.verdict);
  for (const auto& tx : outcome.deferred) out.deferred.push_back(tx_hash(tx));
  return out;
}

GeneratedCase generate_case(std::mt19937_64& rng) {
  auto pick = [&](size_t n) { return static_cast<size_t>(rng() % n); };
  auto chance = [&](unsigned percent) { return rng() % 100 < percent; };

  GeneratedCase g;
  WorldState& state = g.set.tip_state;
  const Address admin = address_from_name("gen-admin");
  const std::array<Address, 3> users{address_from_name("u0"), address_from_name("u1"), address_from_name("u2")};
  for (const auto& u : users) state.set_balance(u, 1'000'000);

  const size_t n_contracts = 1 + pick(3);
  std::vector<Address> contracts;
  for (size_t c = 0; c < n_contracts; ++c) contracts.push_back(address_from_name("c" + std::to_string(c)));

  for (size_t c = 0; c < n_contracts; ++c) {
    const Address& other = contracts[pick(n_contracts)];
    ContractCode code;
    code.admin = admin;
    // store(k, v)
    code.functions[selector_of("store")] = {Statement::set(Expr::arg(0), Expr::arg(1))};
    // guarded payout to the caller
    code.functions[selector_of("take")] = {Statement::pause_guard(key("k0")),
                                           Statement::pay(Expr::caller(), Expr::arg(0))};
    // payout gated on a storage value
    code.functions[selector_of("claim")] = {
        Statement::require(op(Expr::Op::eq, Expr::sload(key("k1")), Expr::arg(0))),
        Statement::pay(Expr::caller(), Expr::arg(1))};
    // forward funds to another contract
    code.functions[selector_of("forward")] = {Statement::pay(Expr::constant(to_word(other)), Expr::arg(0))};
    // toggle a flag and count calls
    code.functions[selector_of("toggle")] = {
        Statement::set(key("k0"), Expr::unary(Expr::Op::lnot, Expr::sload(key("k0")))),
        Statement::set(key("n"), op(Expr::Op::add, Expr::sload(key("n")), lit(1)))};
    // credit the caller's ledger slot
    code.fallback = {Statement::set(Expr::caller(), op(Expr::Op::add, Expr::sload(Expr::caller()), Expr::callvalue()))};
    state.set_code(contracts[c], code);
    state.set_balance(contracts[c], 100 * pick(21));
    if (chance(50)) state.set_storage(contracts[c], word_of("k0"), Word{1});
    if (chance(50)) state.set_storage(contracts[c], word_of("k1"), Word{pick(3)});
  }

  for (size_t c = 0; c < n_contracts; ++c) {
    const size_t n_inv = pick(3);
    for (size_t i = 0; i < n_inv; ++i) {
      Expr pred;
      switch (pick(5)) {
        case 0:
          pred = Expr::unary(Expr::Op::lnot, op(Expr::Op::lt, Expr::balance(Expr::self()), lit(100 * pick(15))));
          break;
        case 1:
          pred = op(Expr::Op::eq, Expr::sload(key("k0")), lit(pick(2)));
          break;
        case 2:
          pred = op(Expr::Op::lt, Expr::sload(key("n")), lit(1 + pick(3)));
          break;
        case 3:
          pred = op(Expr::Op::lor, Expr::sload(key("k0")),
                    Expr::unary(Expr::Op::lnot, op(Expr::Op::lt, Expr::balance(Expr::self()), lit(500))));
          break;
        default:
          pred = op(Expr::Op::lt, Expr::sload(Expr::caller()), lit(50));
          break;
      }
      g.invariants.add({"inv" + std::to_string(c) + "_" + std::to_string(i), contracts[c], std::move(pred), admin},
                       state);
    }
  }

  std::array<uint64_t, 3> next_nonce{};
  const size_t n_txs = 1 + pick(6);
  for (size_t t = 0; t < n_txs; ++t) {
    const size_t s = pick(users.size());
    uint64_t nonce = next_nonce[s];
    if (chance(10)) nonce += 1;  // gap
    else if (chance(5) && nonce > 0) nonce -= 1;  // stale
    else ++next_nonce[s];

    const Address& to = contracts[pick(n_contracts)];
    SignedTransaction tx;
    switch (pick(7)) {
      case 0:
        tx = call(users[s], nonce, to, "store", {word_of(pick(2) ? "k0" : "k1"), Word{pick(3)}});
        break;
      case 1:
        tx = call(users[s], nonce, to, "take", {Word{100 * pick(12)}});
        break;
      case 2:
        tx = call(users[s], nonce, to, "claim", {Word{pick(3)}, Word{100 * pick(12)}});
        break;
      case 3:
        tx = call(users[s], nonce, to, "forward", {Word{100 * pick(8)}});
        break;
      case 4:
        tx = call(users[s], nonce, to, "toggle");
        break;
      case 5:
        tx = transfer(users[s], nonce, to, 10 * pick(8));
        break;
      default:
        tx = transfer(users[pick(users.size())], nonce, users[pick(users.size())], pick(1000));
        tx.sender = users[s];
        break;
    }
    tx.max_fee = 1 + pick(20);
    tx.priority_fee = pick(tx.max_fee + 1);
    if (chance(5)) tx.gas_limit = base_tx_gas + 1;  // runs out of gas in most bodies
    g.set.txs.push_back({tx, chance(10)});
  }
  g.set.context = {static_cast<uint64_t>(1 + pick(3)), 100, address_from_name("gen-fees")};
  return g;
}

std::vector<std::array<uint8_t, 32>> reference_bitmap(const std::vector<bool>& flags) {
  std::vector<std::array<uint8_t, 32>> words((flags.size() + 255) / 256);
  for (size_t i = 0; i < flags.size(); ++i) {
    if (!flags[i]) continue;
    const size_t bit = i % 256;
    words[i / 256][31 - bit / 8] |= static_cast<uint8_t>(1u << (bit % 8));
  }
  return words;
}

std::filesystem::path scenario_dir() {
  return SLSIM_SCENARIO_DIR;
}

std::vector<std::filesystem::path> corpus() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(scenario_dir()))
    if (e.path().extension() == ".slsim") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Scenario load_scenario(const std::filesystem::path& path) {
  return parse_scenario(read_file(path));
}

}  // namespace sls::testing
