// slsim: rollup sequencer simulator with transaction quarantine
// Copyright 2026 The slsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include "sls/vm.hpp"

#include <algorithm>
#include <atomic>

namespace sls {

namespace {
std::atomic<uint64_t> g_simulations{0};
}  // namespace

size_t arity(Expr::Op op) {
  switch (op) {
    case Expr::Op::constant:
    case Expr::Op::caller:
    case Expr::Op::callvalue:
    case Expr::Op::self:
    case Expr::Op::arg:
      return 0;
    case Expr::Op::sload:
    case Expr::Op::balance:
    case Expr::Op::lnot:
      return 1;
    case Expr::Op::add:
    case Expr::Op::sub:
    case Expr::Op::mul:
    case Expr::Op::eq:
    case Expr::Op::lt:
    case Expr::Op::land:
    case Expr::Op::lor:
      return 2;
  }
  throw DecodeError("expr: unknown operator");
}

Selector selector_of(std::string_view function_name) {
  auto d = sha256(function_name);
  return (Selector{d.bytes[0]} << 24) | (Selector{d.bytes[1]} << 16) | (Selector{d.bytes[2]} << 8) |
         Selector{d.bytes[3]};
}

Bytes encode_call(std::string_view function_name, std::span<const Word> args) {
  ByteWriter w;
  w.u32(selector_of(function_name));
  for (const auto& a : args) w.raw(a.to_bytes());
  return std::move(w).take();
}

const std::vector<Statement>& ContractCode::dispatch(BytesView calldata) const {
  if (calldata.size() >= 4) {
    Selector sel = (Selector{calldata[0]} << 24) | (Selector{calldata[1]} << 16) |
                   (Selector{calldata[2]} << 8) | Selector{calldata[3]};
    if (auto it = functions.find(sel); it != functions.end()) return it->second;
  }
  return fallback;
}

// ---------------------------------------------------------------------------
// Code encoding

namespace {
void encode_expr(ByteWriter& w, const Expr& e) {
  w.u8(static_cast<uint8_t>(e.op));
  if (e.op == Expr::Op::constant) w.raw(e.value.to_bytes());
  if (e.op == Expr::Op::arg) w.u32(static_cast<uint32_t>(e.value.low128()));
  for (const auto& a : e.args) encode_expr(w, a);
}

Expr decode_expr(ByteReader& r, int depth) {
  if (depth > 256) throw DecodeError("expr: nesting too deep");
  Expr e;
  e.op = static_cast<Expr::Op>(r.u8());
  size_t n = arity(e.op);
  if (e.op == Expr::Op::constant) e.value = Word::from_bytes(r.raw(32));
  if (e.op == Expr::Op::arg) e.value = Word{r.u32()};
  for (size_t i = 0; i < n; ++i) e.args.push_back(decode_expr(r, depth + 1));
  return e;
}

size_t operand_count(Statement::Kind k) {
  switch (k) {
    case Statement::Kind::require:
    case Statement::Kind::pause_guard:
      return 1;
    case Statement::Kind::set:
    case Statement::Kind::pay:
      return 2;
  }
  throw DecodeError("statement: unknown kind");
}

void encode_statements(ByteWriter& w, const std::vector<Statement>& stmts) {
  w.u32(static_cast<uint32_t>(stmts.size()));
  for (const auto& s : stmts) {
    w.u8(static_cast<uint8_t>(s.kind));
    for (const auto& e : s.operands) encode_expr(w, e);
  }
}

std::vector<Statement> decode_statements(ByteReader& r) {
  std::vector<Statement> out;
  uint32_t n = r.u32();
  for (uint32_t i = 0; i < n; ++i) {
    Statement s;
    s.kind = static_cast<Statement::Kind>(r.u8());
    size_t ops = operand_count(s.kind);
    for (size_t j = 0; j < ops; ++j) s.operands.push_back(decode_expr(r, 0));
    out.push_back(std::move(s));
  }
  return out;
}
}  // namespace

Bytes encode_code(const ContractCode& code) {
  ByteWriter w;
  w.raw(code.admin.bytes);
  encode_statements(w, code.fallback);
  w.u32(static_cast<uint32_t>(code.functions.size()));
  for (const auto& [sel, body] : code.functions) {
    w.u32(sel);
    encode_statements(w, body);
  }
  return std::move(w).take();
}

ContractCode decode_code(BytesView encoded) {
  ByteReader r(encoded);
  ContractCode code;
  code.admin = Address::from_span(r.raw(20));
  code.fallback = decode_statements(r);
  uint32_t n = r.u32();
  for (uint32_t i = 0; i < n; ++i) {
    Selector sel = r.u32();
    if (code.functions.contains(sel)) throw DecodeError("code: duplicate selector");
    code.functions.emplace(sel, decode_statements(r));
  }
  r.expect_done();
  return code;
}

Hash32 code_hash(const ContractCode& code) {
  return sha256(encode_code(code));
}

// ---------------------------------------------------------------------------
// WorldState

const Account* WorldState::find(const Address& addr) const {
  auto it = accounts_.find(addr);
  return it == accounts_.end() ? nullptr : it->second.get();
}

u128 WorldState::balance(const Address& addr) const {
  auto* a = find(addr);
  return a ? a->balance : 0;
}

uint64_t WorldState::nonce(const Address& addr) const {
  auto* a = find(addr);
  return a ? a->nonce : 0;
}

Word WorldState::storage(const Address& addr, const Word& key) const {
  auto* a = find(addr);
  if (!a) return {};
  auto it = a->storage.find(key);
  return it == a->storage.end() ? Word{} : it->second;
}

const ContractCode* WorldState::code(const Address& addr) const {
  auto* a = find(addr);
  return a && a->code ? &*a->code : nullptr;
}

template <class F>
void WorldState::update(const Address& addr, F&& fn) {
  auto it = accounts_.find(addr);
  Account acc = it == accounts_.end() ? Account{} : *it->second;
  fn(acc);
  if (acc.empty()) {
    if (it != accounts_.end()) accounts_.erase(it);
  } else if (it != accounts_.end()) {
    it->second = std::make_shared<const Account>(std::move(acc));
  } else {
    accounts_.emplace(addr, std::make_shared<const Account>(std::move(acc)));
  }
}

void WorldState::set_balance(const Address& addr, u128 value) {
  update(addr, [&](Account& a) { a.balance = value; });
}

void WorldState::set_nonce(const Address& addr, uint64_t value) {
  update(addr, [&](Account& a) { a.nonce = value; });
}

void WorldState::set_storage(const Address& addr, const Word& key, const Word& value) {
  update(addr, [&](Account& a) {
    if (value.is_zero())
      a.storage.erase(key);
    else
      a.storage[key] = value;
  });
}

void WorldState::set_code(const Address& addr, std::optional<ContractCode> code) {
  update(addr, [&](Account& a) { a.code = std::move(code); });
}

void WorldState::put(const Address& addr, Account account) {
  for (auto it = account.storage.begin(); it != account.storage.end();) {
    if (it->second.is_zero())
      it = account.storage.erase(it);
    else
      ++it;
  }
  update(addr, [&](Account& a) { a = std::move(account); });
}

bool operator==(const WorldState& a, const WorldState& b) {
  return std::equal(a.accounts_.begin(), a.accounts_.end(), b.accounts_.begin(), b.accounts_.end(),
                    [](const auto& x, const auto& y) {
                      return x.first == y.first && (x.second == y.second || *x.second == *y.second);
                    });
}

bool intersects(const AccessSet& a, const AccessSet& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib)
      ++ia;
    else if (*ib < *ia)
      ++ib;
    else
      return true;
  }
  return false;
}

std::string_view to_string(ExecStatus s) {
  switch (s) {
    case ExecStatus::success:
      return "SUCCESS";
    case ExecStatus::revert:
      return "REVERT";
    case ExecStatus::precondition_failed:
      return "PRECONDITION_FAILED";
  }
  return "?";
}

std::string_view to_string(Precondition p) {
  switch (p) {
    case Precondition::nonce_mismatch:
      return "NONCE_MISMATCH";
    case Precondition::fee_below_base_fee:
      return "FEE_BELOW_BASE_FEE";
    case Precondition::insufficient_balance:
      return "INSUFFICIENT_BALANCE";
    case Precondition::malformed:
      return "MALFORMED";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Evaluation

Word evaluate(const Expr& e, const EvalEnv& env) {
  auto truth = [](const Word& w) { return Word{w.is_zero() ? 0u : 1u}; };
  switch (e.op) {
    case Expr::Op::constant:
      return e.value;
    case Expr::Op::sload: {
      Word key = evaluate(e.args[0], env);
      if (env.reads) env.reads->insert(AccessKey::storage(env.self, key));
      return env.state->storage(env.self, key);
    }
    case Expr::Op::balance: {
      Address a = to_address(evaluate(e.args[0], env));
      if (env.reads) env.reads->insert(AccessKey::balance_of(a));
      return Word{env.state->balance(a)};
    }
    case Expr::Op::caller:
      return to_word(env.caller);
    case Expr::Op::callvalue:
      return Word{env.callvalue};
    case Expr::Op::self:
      return to_word(env.self);
    case Expr::Op::arg: {
      size_t offset = 4 + 32 * static_cast<size_t>(e.value.low128());
      if (env.calldata.size() < 4 || offset >= env.calldata.size()) return {};
      size_t n = std::min<size_t>(32, env.calldata.size() - offset);
      // Short trailing words are zero-padded on the right.
      std::array<uint8_t, 32> buf{};
      std::copy_n(env.calldata.begin() + static_cast<ptrdiff_t>(offset), n, buf.begin());
      return Word::from_bytes(buf);
    }
    case Expr::Op::add:
      return evaluate(e.args[0], env) + evaluate(e.args[1], env);
    case Expr::Op::sub:
      return saturating_sub(evaluate(e.args[0], env), evaluate(e.args[1], env));
    case Expr::Op::mul:
      return evaluate(e.args[0], env) * evaluate(e.args[1], env);
    case Expr::Op::eq:
      return Word{evaluate(e.args[0], env) == evaluate(e.args[1], env) ? 1u : 0u};
    case Expr::Op::lt:
      return Word{evaluate(e.args[0], env) < evaluate(e.args[1], env) ? 1u : 0u};
    case Expr::Op::land: {
      // Both sides are always evaluated.
      Word a = truth(evaluate(e.args[0], env));
      Word b = truth(evaluate(e.args[1], env));
      return Word{(!a.is_zero() && !b.is_zero()) ? 1u : 0u};
    }
    case Expr::Op::lor: {
      Word a = truth(evaluate(e.args[0], env));
      Word b = truth(evaluate(e.args[1], env));
      return Word{(!a.is_zero() || !b.is_zero()) ? 1u : 0u};
    }
    case Expr::Op::lnot:
      return Word{evaluate(e.args[0], env).is_zero() ? 1u : 0u};
  }
  return {};
}

// ---------------------------------------------------------------------------
// Execution

namespace {

struct Journal {
  WorldState state;
  AccessSet writes;
  std::map<Address, i128> deltas;
};

class Execution {
 public:
  Execution(const WorldState& state, TxHash id, bool is_deposit, const Address& sender, u128 value) {
    j_.state = state;
    result_.tx_id = id;
    result_.is_deposit = is_deposit;
    result_.sender = sender;
    result_.value = value;
  }

  u128 read_balance(const Address& a) {
    result_.reads.insert(AccessKey::balance_of(a));
    return j_.state.balance(a);
  }

  uint64_t read_nonce(const Address& a) {
    result_.reads.insert(AccessKey::nonce_of(a));
    return j_.state.nonce(a);
  }

  const ContractCode* read_code(const Address& a) {
    result_.reads.insert(AccessKey::code_of(a));
    return j_.state.code(a);
  }

  void credit(const Address& a, u128 amount) {
    if (amount == 0) return;
    j_.state.set_balance(a, j_.state.balance(a) + amount);
    j_.writes.insert(AccessKey::balance_of(a));
    j_.deltas[a] += static_cast<i128>(amount);
  }

  // Requires a sufficient balance.
  void debit(const Address& a, u128 amount) {
    if (amount == 0) return;
    j_.state.set_balance(a, j_.state.balance(a) - amount);
    j_.writes.insert(AccessKey::balance_of(a));
    j_.deltas[a] -= static_cast<i128>(amount);
  }

  void bump_nonce(const Address& a) {
    j_.state.set_nonce(a, j_.state.nonce(a) + 1);
    j_.writes.insert(AccessKey::nonce_of(a));
  }

  void set_storage(const Address& a, const Word& k, const Word& v) {
    j_.state.set_storage(a, k, v);
    j_.writes.insert(AccessKey::storage(a, k));
  }

  void deploy(const Address& a, ContractCode code) {
    j_.state.set_code(a, std::move(code));
    j_.writes.insert(AccessKey::code_of(a));
  }

  Journal checkpoint() const { return j_; }
  void rollback(Journal j) { j_ = std::move(j); }

  Word eval(const Expr& e, const Address& self, const Address& caller, u128 callvalue, BytesView data) {
    EvalEnv env{&j_.state, self, caller, callvalue, data, &result_.reads};
    return evaluate(e, env);
  }

  // Returns false on revert. `gas` is charged one unit per statement.
  bool run(const std::vector<Statement>& body, const Address& self, const Address& caller, u128 callvalue,
           BytesView data, uint64_t gas_limit, uint64_t& gas) {
    for (const auto& s : body) {
      if (gas + 1 > gas_limit) {
        gas = gas_limit;
        return false;
      }
      ++gas;
      switch (s.kind) {
        case Statement::Kind::require:
          if (eval(s.operands[0], self, caller, callvalue, data).is_zero()) return false;
          break;
        case Statement::Kind::pause_guard: {
          Word key = eval(s.operands[0], self, caller, callvalue, data);
          result_.reads.insert(AccessKey::storage(self, key));
          if (!j_.state.storage(self, key).is_zero()) return false;
          break;
        }
        case Statement::Kind::set: {
          Word key = eval(s.operands[0], self, caller, callvalue, data);
          Word value = eval(s.operands[1], self, caller, callvalue, data);
          set_storage(self, key, value);
          break;
        }
        case Statement::Kind::pay: {
          Address to = to_address(eval(s.operands[0], self, caller, callvalue, data));
          Word amount = eval(s.operands[1], self, caller, callvalue, data);
          u128 available = read_balance(self);
          if (!amount.fits_u128() || amount.low128() > available) return false;
          debit(self, amount.low128());
          credit(to, amount.low128());
          break;
        }
      }
    }
    return true;
  }

  SimulationResult finish(ExecStatus status, uint64_t gas) && {
    result_.status = status;
    result_.gas_used = gas;
    result_.writes = std::move(j_.writes);
    for (auto& [a, d] : j_.deltas)
      if (d != 0) result_.balance_deltas.emplace(a, d);
    result_.post_state = std::move(j_.state);
    return std::move(result_);
  }

  SimulationResult fail(Precondition p) && {
    result_.status = ExecStatus::precondition_failed;
    result_.failure = p;
    result_.post_state = std::move(j_.state);
    return std::move(result_);
  }

 private:
  Journal j_;
  SimulationResult result_;
};

}  // namespace

SimulationResult execute_transaction(const WorldState& state, const SignedTransaction& tx,
                                     const BlockContext& ctx) {
  g_simulations.fetch_add(1, std::memory_order_relaxed);
  Execution ex(state, tx_hash(tx), false, tx.sender, tx.value);

  if (!tx.well_formed()) return std::move(ex).fail(Precondition::malformed);
  if (ex.read_nonce(tx.sender) != tx.nonce) return std::move(ex).fail(Precondition::nonce_mismatch);
  if (tx.max_fee < ctx.base_fee) return std::move(ex).fail(Precondition::fee_below_base_fee);

  const u128 max_gas_cost = static_cast<u128>(tx.gas_limit) * tx.max_fee;
  const u128 balance = ex.read_balance(tx.sender);
  if (balance < max_gas_cost || balance - max_gas_cost < tx.value)
    return std::move(ex).fail(Precondition::insufficient_balance);

  ex.bump_nonce(tx.sender);
  auto after_nonce = ex.checkpoint();

  uint64_t gas = base_tx_gas;
  bool ok = true;
  ex.debit(tx.sender, tx.value);
  if (tx.is_create()) {
    const Address target = create_address(tx.sender, tx.nonce);
    ex.credit(target, tx.value);
    if (gas + 1 > tx.gas_limit) {
      gas = tx.gas_limit;
      ok = false;
    } else {
      ++gas;
      if (ex.read_code(target) != nullptr) {
        ok = false;
      } else {
        try {
          ex.deploy(target, decode_code(tx.data));
        } catch (const DecodeError&) {
          ok = false;
        }
      }
    }
  } else {
    const Address& to = *tx.recipient;
    ex.credit(to, tx.value);
    if (const auto* code = ex.read_code(to))
      ok = ex.run(code->dispatch(tx.data), to, tx.sender, tx.value, tx.data, tx.gas_limit, gas);
  }
  if (!ok) ex.rollback(std::move(after_nonce));

  const uint64_t tip_per_gas = std::min(tx.priority_fee, tx.max_fee - ctx.base_fee);
  const u128 burned = static_cast<u128>(gas) * ctx.base_fee;
  const u128 tip = static_cast<u128>(gas) * tip_per_gas;
  ex.debit(tx.sender, burned + tip);
  ex.credit(ctx.fee_recipient, tip);
  return std::move(ex).finish(ok ? ExecStatus::success : ExecStatus::revert, gas);
}

SimulationResult execute_transaction(const WorldState& state, const DepositTransaction& tx,
                                     const BlockContext&) {
  g_simulations.fetch_add(1, std::memory_order_relaxed);
  Execution ex(state, tx_hash(tx), true, tx.sender, tx.value);

  ex.credit(tx.sender, tx.value);
  auto after_mint = ex.checkpoint();

  uint64_t gas = std::min(base_tx_gas, tx.gas_limit);
  bool ok = tx.gas_limit >= base_tx_gas;
  if (ok) {
    ex.debit(tx.sender, tx.value);
    ex.credit(tx.recipient, tx.value);
    if (const auto* code = ex.read_code(tx.recipient))
      ok = ex.run(code->dispatch(tx.data), tx.recipient, tx.sender, tx.value, tx.data, tx.gas_limit, gas);
  }
  if (!ok) ex.rollback(std::move(after_mint));
  return std::move(ex).finish(ok ? ExecStatus::success : ExecStatus::revert, gas);
}

SimulationResult execute_transaction(const WorldState& state, const Transaction& tx, const BlockContext& ctx) {
  return std::visit([&](const auto& t) { return execute_transaction(state, t, ctx); }, tx);
}

Address create_address(const Address& sender, uint64_t nonce) {
  ByteWriter w;
  w.raw(sender.bytes);
  w.u64(nonce);
  auto d = sha256(w.bytes());
  return Address::from_span(BytesView(d.bytes).subspan(12));
}

uint64_t simulation_count() {
  return g_simulations.load(std::memory_order_relaxed);
}

void apply_effects(WorldState& state, const SimulationResult& result) {
  const WorldState& post = result.post_state;
  for (const auto& key : result.writes) {
    switch (key.kind) {
      case AccessKey::Kind::balance:
        break;  // applied from deltas below
      case AccessKey::Kind::nonce:
        state.set_nonce(key.addr, post.nonce(key.addr));
        break;
      case AccessKey::Kind::storage:
        state.set_storage(key.addr, key.key, post.storage(key.addr, key.key));
        break;
      case AccessKey::Kind::code: {
        const auto* code = post.code(key.addr);
        state.set_code(key.addr, code ? std::optional<ContractCode>(*code) : std::nullopt);
        break;
      }
    }
  }
  for (const auto& [addr, delta] : result.balance_deltas)
    state.set_balance(addr, static_cast<u128>(static_cast<i128>(state.balance(addr)) + delta));
}

StateRoot state_root(const WorldState& state) {
  Sha256 root;
  for (const auto& [addr, acc] : state) {
    ByteWriter w;
    w.raw(addr.bytes);
    w.u128(acc->balance);
    w.u64(acc->nonce);
    w.raw(acc->code ? code_hash(*acc->code).bytes : Hash32{}.bytes);
    for (const auto& [k, v] : acc->storage) {
      w.raw(k.to_bytes());
      w.raw(v.to_bytes());
    }
    root.update(sha256(w.bytes()).bytes);
  }
  return StateRoot{root.finish().bytes};
}

InvalidBlock::InvalidBlock(size_t index, std::string reason)
    : std::runtime_error("invalid block: transaction " + std::to_string(index) + ": " + reason), index_(index) {}

WorldState apply_block(const WorldState& state, const Block& block, const Address& fee_recipient) {
  BlockContext ctx{block.base_fee, block.timestamp, fee_recipient};
  WorldState s = state;
  size_t index = 0;
  for (const auto& d : block.deposits) {
    s = execute_transaction(s, d, ctx).post_state;
    ++index;
  }
  for (const auto& tx : block.transactions) {
    auto r = execute_transaction(s, tx, ctx);
    if (!r.executed()) throw InvalidBlock(index, std::string(to_string(*r.failure)));
    s = std::move(r.post_state);
    ++index;
  }
  return s;
}

}  // namespace sls
