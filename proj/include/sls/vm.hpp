// slsim: rollup sequencer simulator with transaction quarantine
// Copyright 2026 The slsim Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "sls/core.hpp"

#include <map>
#include <memory>
#include <set>

namespace sls {

/// Expression tree of the contract language. Evaluation is total: arithmetic
/// wraps modulo 2^256 except SUB, which saturates at zero; booleans are 0/1
/// and any non-zero word is true.
struct Expr {
  enum class Op : uint8_t {
    constant = 0x01,
    sload = 0x02,
    balance = 0x03,
    caller = 0x04,
    callvalue = 0x05,
    self = 0x06,
    arg = 0x07,  // 32-byte calldata word after the 4-byte selector
    add = 0x10,
    sub = 0x11,
    mul = 0x12,
    eq = 0x20,
    lt = 0x21,
    land = 0x30,
    lor = 0x31,
    lnot = 0x32,
  };

  Op op = Op::constant;
  Word value;  // constant payload, or the argument index for Op::arg
  std::vector<Expr> args;

  static Expr constant(Word v) { return {Op::constant, v, {}}; }
  static Expr sload(Expr key) { return unary(Op::sload, std::move(key)); }
  static Expr balance(Expr addr) { return unary(Op::balance, std::move(addr)); }
  static Expr caller() { return {Op::caller, {}, {}}; }
  static Expr callvalue() { return {Op::callvalue, {}, {}}; }
  static Expr self() { return {Op::self, {}, {}}; }
  static Expr arg(uint32_t index) { return {Op::arg, Word{index}, {}}; }
  static Expr binary(Op op, Expr a, Expr b) {
    Expr e{op, {}, {}};
    e.args.push_back(std::move(a));
    e.args.push_back(std::move(b));
    return e;
  }
  static Expr unary(Op op, Expr a) {
    Expr e{op, {}, {}};
    e.args.push_back(std::move(a));
    return e;
  }

  friend bool operator==(const Expr&, const Expr&) = default;
};

/// Number of operands an operator takes.
size_t arity(Expr::Op op);

struct Statement {
  enum class Kind : uint8_t {
    require = 0x01,      // revert unless operand is non-zero
    set = 0x02,          // storage[key] = value
    pay = 0x03,          // transfer amount from the contract to address
    pause_guard = 0x04,  // REQUIRE(SLOAD(key) == 0)
  };

  Kind kind = Kind::require;
  std::vector<Expr> operands;

  static Statement require(Expr cond) { return {Kind::require, {std::move(cond)}}; }
  static Statement set(Expr key, Expr value) { return {Kind::set, {std::move(key), std::move(value)}}; }
  static Statement pay(Expr to, Expr amount) { return {Kind::pay, {std::move(to), std::move(amount)}}; }
  static Statement pause_guard(Expr key) { return {Kind::pause_guard, {std::move(key)}}; }

  friend bool operator==(const Statement&, const Statement&) = default;
};

using Selector = uint32_t;

/// First four bytes of SHA-256(name), big-endian.
Selector selector_of(std::string_view function_name);

/// Calldata for a call: selector followed by 32-byte big-endian argument words.
Bytes encode_call(std::string_view function_name, std::span<const Word> args = {});

/// A contract: an administrator and a set of entry points. Calldata whose
/// leading 4 bytes match a function selector runs that function; anything
/// else runs the fallback list.
struct ContractCode {
  Address admin;
  std::vector<Statement> fallback;
  std::map<Selector, std::vector<Statement>> functions;

  const std::vector<Statement>& dispatch(BytesView calldata) const;

  friend bool operator==(const ContractCode&, const ContractCode&) = default;
};

Bytes encode_code(const ContractCode& code);
ContractCode decode_code(BytesView encoded);
Hash32 code_hash(const ContractCode& code);

struct Account {
  u128 balance = 0;
  uint64_t nonce = 0;
  std::optional<ContractCode> code;
  std::map<Word, Word> storage;  // zero values are never stored

  bool empty() const { return balance == 0 && nonce == 0 && !code && storage.empty(); }

  friend bool operator==(const Account&, const Account&) = default;
};

/// Map of accounts with canonical absence: an account that is indistinguishable
/// from a fresh one is never stored. Accounts are shared between copies, so
/// copying a state costs one map node per account.
class WorldState {
 public:
  const Account* find(const Address& addr) const;

  u128 balance(const Address& addr) const;
  uint64_t nonce(const Address& addr) const;
  Word storage(const Address& addr, const Word& key) const;
  const ContractCode* code(const Address& addr) const;

  void set_balance(const Address& addr, u128 value);
  void set_nonce(const Address& addr, uint64_t value);
  void set_storage(const Address& addr, const Word& key, const Word& value);
  void set_code(const Address& addr, std::optional<ContractCode> code);
  void put(const Address& addr, Account account);

  size_t size() const { return accounts_.size(); }
  auto begin() const { return accounts_.begin(); }
  auto end() const { return accounts_.end(); }

  friend bool operator==(const WorldState& a, const WorldState& b);

 private:
  template <class F>
  void update(const Address& addr, F&& fn);

  std::map<Address, std::shared_ptr<const Account>> accounts_;
};

/// A state location touched during execution.
struct AccessKey {
  enum class Kind : uint8_t { storage = 0, balance = 1, nonce = 2, code = 3 };
  Kind kind = Kind::balance;
  Address addr;
  Word key;  // only meaningful for storage

  static AccessKey storage(const Address& a, const Word& k) { return {Kind::storage, a, k}; }
  static AccessKey balance_of(const Address& a) { return {Kind::balance, a, {}}; }
  static AccessKey nonce_of(const Address& a) { return {Kind::nonce, a, {}}; }
  static AccessKey code_of(const Address& a) { return {Kind::code, a, {}}; }

  auto operator<=>(const AccessKey&) const = default;
};

using AccessSet = std::set<AccessKey>;

bool intersects(const AccessSet& a, const AccessSet& b);

enum class ExecStatus { success, revert, precondition_failed };

enum class Precondition {
  nonce_mismatch,
  fee_below_base_fee,
  insufficient_balance,
  malformed,
};

std::string_view to_string(ExecStatus s);
std::string_view to_string(Precondition p);

struct BlockContext {
  uint64_t base_fee = 0;
  uint64_t timestamp = 0;
  Address fee_recipient;
};

struct SimulationResult {
  TxHash tx_id;
  bool is_deposit = false;
  Address sender;
  u128 value = 0;
  ExecStatus status = ExecStatus::success;
  std::optional<Precondition> failure;  // set iff status == precondition_failed
  uint64_t gas_used = 0;
  AccessSet reads;
  AccessSet writes;
  std::map<Address, i128> balance_deltas;
  WorldState post_state;

  bool executed() const { return status != ExecStatus::precondition_failed; }
};

/// Runs a transaction against `state`. Pure function of its arguments.
///
/// Signed transactions must match the sender nonce, carry max_fee >= base fee
/// and be covered by the sender balance (value + gas_limit * max_fee);
/// otherwise the result has status precondition_failed and no writes. Gas is
/// 21 plus one per executed statement; the sender pays gas_used times the
/// effective price, the base-fee share is burned and the tip is credited to
/// the fee recipient. A revert rolls back everything except the nonce bump and
/// the gas charge.
///
/// Deposits are not checked: value is minted to the sender and then
/// transferred to the recipient. Deposits pay no fees, and a revert keeps only
/// the mint.
///
/// Crediting a balance is recorded as a write without a read, so credits to a
/// shared account commute for dependency analysis.
SimulationResult execute_transaction(const WorldState& state, const SignedTransaction& tx,
                                     const BlockContext& ctx);
SimulationResult execute_transaction(const WorldState& state, const DepositTransaction& tx,
                                     const BlockContext& ctx);
SimulationResult execute_transaction(const WorldState& state, const Transaction& tx,
                                     const BlockContext& ctx);

/// Address of a contract created by `sender` at `nonce`: the last 20 bytes of
/// SHA-256(sender | nonce).
Address create_address(const Address& sender, uint64_t nonce);

/// Process-wide count of execute_transaction calls.
uint64_t simulation_count();

/// Applies the effects recorded in `result` onto `state`: balances by delta,
/// nonces, storage and code by value. For a transaction whose reads are
/// unchanged between the state it was simulated on and `state`, this equals
/// executing it on `state`.
void apply_effects(WorldState& state, const SimulationResult& result);

/// Environment for evaluating an expression outside a transaction.
struct EvalEnv {
  const WorldState* state = nullptr;
  Address self;
  Address caller;
  u128 callvalue = 0;
  BytesView calldata;
  AccessSet* reads = nullptr;  // optional read tracking
};

Word evaluate(const Expr& expr, const EvalEnv& env);

/// SHA-256 over the per-account digests in address order, where each digest is
/// SHA-256(address | balance | nonce | code hash or zeros | key,value pairs).
StateRoot state_root(const WorldState& state);

class InvalidBlock : public std::runtime_error {
 public:
  InvalidBlock(size_t index, std::string reason);
  size_t index() const { return index_; }

 private:
  size_t index_;
};

/// Executes deposits then transactions in order. Throws InvalidBlock if a
/// transaction fails its preconditions.
WorldState apply_block(const WorldState& state, const Block& block, const Address& fee_recipient);

}  // namespace sls
