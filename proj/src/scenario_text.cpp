// slsim: rollup sequencer simulator with transaction quarantine
// Copyright 2026 The slsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include "sls/cli.hpp"

#include <sstream>

namespace sls {
namespace {

struct Node {
  bool is_list = false;
  std::string atom;
  std::vector<Node> items;
};

class LineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  std::vector<Node> all() {
    std::vector<Node> out;
    while (skip_space()) out.push_back(node());
    return out;
  }

 private:
  // Returns false at end of input or at a comment.
  bool skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return pos_ < s_.size() && s_[pos_] != '#';
  }

  Node node() {
    if (s_[pos_] == ')') throw LineError("unbalanced ')'");
    if (s_[pos_] != '(') return {false, word(), {}};
    ++pos_;
    Node list{true, {}, {}};
    for (;;) {
      if (!skip_space()) throw LineError("unbalanced '('");
      if (s_[pos_] == ')') {
        ++pos_;
        return list;
      }
      list.items.push_back(node());
    }
  }

  std::string word() {
    std::string out;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')') break;
      if (c == '"') {
        size_t end = s_.find('"', pos_ + 1);
        if (end == std::string_view::npos) throw LineError("unterminated string");
        out.append(s_.substr(pos_, end - pos_ + 1));
        pos_ = end + 1;
        continue;
      }
      out.push_back(c);
      ++pos_;
    }
    return out;
  }

  std::string_view s_;
  size_t pos_ = 0;
};

using Names = std::map<std::string, Address>;

Address resolve_address(std::string_view tok, const Names& names) {
  if (tok.starts_with("@")) {
    auto it = names.find(std::string(tok.substr(1)));
    if (it == names.end()) throw LineError("undeclared name '" + std::string(tok) + "'");
    return it->second;
  }
  if (tok.starts_with("0x") && tok.size() == 42) return Address::from_span(from_hex(tok));
  throw LineError("expected an address, got '" + std::string(tok) + "'");
}

Word literal(std::string_view tok, const Names& names) {
  if (tok.empty()) throw LineError("empty literal");
  if (tok.front() == '"') {
    if (tok.size() < 2 || tok.back() != '"') throw LineError("malformed string " + std::string(tok));
    auto text = tok.substr(1, tok.size() - 2);
    if (text.size() > 32) throw LineError("string literal longer than 32 bytes");
    std::array<uint8_t, 32> b{};
    std::copy(text.begin(), text.end(), b.begin());
    return Word::from_bytes(b);
  }
  if (tok.front() == '@' || (tok.starts_with("0x") && tok.size() == 42)) return to_word(resolve_address(tok, names));
  if (tok.starts_with("0x")) return Word::from_bytes(from_hex(tok));
  return Word::from_decimal(tok);
}

Expr to_expr(const Node& n, const Names& names) {
  if (!n.is_list) {
    if (n.atom == "caller") return Expr::caller();
    if (n.atom == "callvalue") return Expr::callvalue();
    if (n.atom == "self") return Expr::self();
    return Expr::constant(literal(n.atom, names));
  }
  if (n.items.empty() || n.items[0].is_list) throw LineError("expression must start with an operator");
  const std::string& op = n.items[0].atom;
  std::vector<Expr> a;
  for (size_t i = 1; i < n.items.size(); ++i) {
    if (op == "arg") break;
    a.push_back(to_expr(n.items[i], names));
  }
  auto want = [&](size_t k) {
    if (n.items.size() - 1 != k) throw LineError("'" + op + "' takes " + std::to_string(k) + " operand(s)");
  };
  using Op = Expr::Op;
  static const std::map<std::string, Op> binary = {{"add", Op::add}, {"sub", Op::sub}, {"mul", Op::mul},
                                                   {"eq", Op::eq},   {"lt", Op::lt},   {"and", Op::land},
                                                   {"or", Op::lor}};
  if (auto it = binary.find(op); it != binary.end()) {
    want(2);
    return Expr::binary(it->second, std::move(a[0]), std::move(a[1]));
  }
  if (op == "gt" || op == "ge" || op == "le" || op == "ne") {
    want(2);
    if (op == "gt") return Expr::binary(Op::lt, std::move(a[1]), std::move(a[0]));
    if (op == "ge") return Expr::unary(Op::lnot, Expr::binary(Op::lt, std::move(a[0]), std::move(a[1])));
    if (op == "le") return Expr::unary(Op::lnot, Expr::binary(Op::lt, std::move(a[1]), std::move(a[0])));
    return Expr::unary(Op::lnot, Expr::binary(Op::eq, std::move(a[0]), std::move(a[1])));
  }
  if (op == "not") {
    want(1);
    return Expr::unary(Op::lnot, std::move(a[0]));
  }
  if (op == "sload") {
    want(1);
    return Expr::sload(std::move(a[0]));
  }
  if (op == "balance") {
    want(1);
    return Expr::balance(std::move(a[0]));
  }
  if (op == "arg") {
    want(1);
    if (n.items[1].is_list) throw LineError("arg index must be a number");
    return Expr::arg(static_cast<uint32_t>(parse_u64(n.items[1].atom)));
  }
  if (op == "caller" || op == "callvalue" || op == "self") {
    want(0);
    return to_expr(n.items[0], names);
  }
  throw LineError("unknown operator '" + op + "'");
}

Statement to_statement(const Node& n, const Names& names) {
  if (!n.is_list || n.items.empty() || n.items[0].is_list) throw LineError("statement must be a parenthesized form");
  const std::string& kind = n.items[0].atom;
  std::vector<Expr> a;
  for (size_t i = 1; i < n.items.size(); ++i) a.push_back(to_expr(n.items[i], names));
  auto want = [&](size_t k) {
    if (a.size() != k) throw LineError("'" + kind + "' takes " + std::to_string(k) + " operand(s)");
  };
  if (kind == "require") {
    want(1);
    return Statement::require(std::move(a[0]));
  }
  if (kind == "set") {
    want(2);
    return Statement::set(std::move(a[0]), std::move(a[1]));
  }
  if (kind == "pay") {
    want(2);
    return Statement::pay(std::move(a[0]), std::move(a[1]));
  }
  if (kind == "pause_guard") {
    want(1);
    return Statement::pause_guard(std::move(a[0]));
  }
  throw LineError("unknown statement '" + kind + "'");
}

/// key=value fields plus positional atoms of one line.
class Fields {
 public:
  Fields(std::span<const Node> nodes, std::initializer_list<std::string_view> allowed) {
    for (const auto& n : nodes) {
      if (n.is_list) {
        lists_.push_back(n);
        continue;
      }
      auto eq = n.atom.find('=');
      if (eq == std::string::npos || n.atom.front() == '"') {
        positional_.push_back(n.atom);
        continue;
      }
      std::string key = n.atom.substr(0, eq);
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
        throw LineError("unknown field '" + key + "'");
      if (!kv_.emplace(key, n.atom.substr(eq + 1)).second) throw LineError("duplicate field '" + key + "'");
    }
  }

  bool has(const std::string& k) const { return kv_.contains(k); }
  const std::string& get(const std::string& k) const {
    auto it = kv_.find(k);
    if (it == kv_.end()) throw LineError("missing field '" + k + "'");
    return it->second;
  }
  std::optional<std::string> opt(const std::string& k) const {
    auto it = kv_.find(k);
    return it == kv_.end() ? std::nullopt : std::optional(it->second);
  }
  uint64_t u64(const std::string& k, uint64_t dflt) const { return has(k) ? parse_u64(get(k)) : dflt; }
  u128 u128v(const std::string& k, u128 dflt) const { return has(k) ? parse_u128(get(k)) : dflt; }

  const std::vector<std::string>& positional() const { return positional_; }
  const std::vector<Node>& lists() const { return lists_; }
  void no_extras() const {
    if (!positional_.empty()) throw LineError("unexpected token '" + positional_.front() + "'");
    if (!lists_.empty()) throw LineError("unexpected expression");
  }

 private:
  std::map<std::string, std::string> kv_;
  std::vector<std::string> positional_;
  std::vector<Node> lists_;
};

std::vector<std::string> split_commas(std::string_view s) {
  std::vector<std::string> out;
  if (s.empty()) return out;
  size_t start = 0;
  for (;;) {
    size_t c = s.find(',', start);
    out.emplace_back(s.substr(start, c - start));
    if (c == std::string_view::npos) break;
    start = c + 1;
  }
  return out;
}

bool parse_switch(const std::string& v) {
  if (v == "on") return true;
  if (v == "off") return false;
  throw LineError("expected on or off, got '" + v + "'");
}

class ScenarioParser {
 public:
  Scenario parse(std::string_view text) {
    std::vector<std::pair<size_t, std::vector<Node>>> lines;
    size_t lineno = 0;
    std::istringstream in{std::string(text)};
    for (std::string line; std::getline(in, line);) {
      ++lineno;
      try {
        auto nodes = Lexer(line).all();
        if (!nodes.empty()) lines.emplace_back(lineno, std::move(nodes));
      } catch (const LineError& e) {
        throw ScenarioError(lineno, e.what());
      }
    }

    // Declarations first.
    for (const auto& [no, nodes] : lines) guarded(no, [&] { declare(nodes); });
    for (const auto& [no, nodes] : lines) guarded(no, [&] { statement(no, nodes); });

    for (auto& [name, code] : contracts_) sc_.genesis.set_code(names_.at(name), code);
    for (const auto& [no, inv] : invariants_) {
      try {
        sc_.invariants.add(inv, sc_.genesis);
      } catch (const InvariantError& e) {
        throw ScenarioError(no, e.what());
      }
    }
    for (const auto& [name, addr] : names_) sc_.names.emplace(addr, name);
    if (!fee_recipient_named_) sc_.names.emplace(sc_.sequencer.fee_recipient, "fee_recipient");
    return std::move(sc_);
  }

 private:
  template <class F>
  void guarded(size_t line, F&& fn) {
    try {
      fn();
    } catch (const ScenarioError&) {
      throw;
    } catch (const std::exception& e) {
      throw ScenarioError(line, e.what());
    }
  }

  static const std::string& head(const std::vector<Node>& nodes) {
    if (nodes[0].is_list) throw LineError("line must start with a keyword");
    return nodes[0].atom;
  }

  std::string new_name(const Node& n) {
    if (n.is_list || !n.atom.starts_with("@") || n.atom.size() < 2) throw LineError("expected @name");
    std::string name = n.atom.substr(1);
    if (names_.contains(name)) throw LineError("name '@" + name + "' declared twice");
    return name;
  }

  void declare(const std::vector<Node>& nodes) {
    const std::string& kw = head(nodes);
    if (kw != "account" && kw != "contract") return;
    if (nodes.size() < 2) throw LineError(kw + ": missing @name");
    const std::string name = new_name(nodes[1]);
    const Address addr = address_from_name(name);
    names_[name] = addr;
    if (kw == "account") {
      Fields f(std::span<const Node>(nodes).subspan(2), {"balance", "nonce"});
      f.no_extras();
      sc_.genesis.set_balance(addr, f.u128v("balance", 0));
      sc_.genesis.set_nonce(addr, f.u64("nonce", 0));
    } else {
      Fields f(std::span<const Node>(nodes).subspan(2), {"admin", "balance"});
      f.no_extras();
      sc_.genesis.set_balance(addr, f.u128v("balance", 0));
      pending_admins_.emplace_back(name, f.get("admin"));
    }
  }

  void statement(size_t line, const std::vector<Node>& nodes) {
    if (!pending_admins_.empty()) {
      for (const auto& [name, admin] : pending_admins_) contracts_[name].admin = resolve_address(admin, names_);
      pending_admins_.clear();
    }
    const std::string& kw = head(nodes);
    auto rest = std::span<const Node>(nodes).subspan(1);
    if (kw == "account" || kw == "contract") return;
    if (kw == "config") return config(rest);
    if (kw == "template") return template_decl(rest);
    if (kw == "storage") return storage(rest);
    if (kw == "code") return code(rest);
    if (kw == "invariant") return invariant(line, rest);
    if (kw == "at") return event(line, rest);
    throw LineError("unknown keyword '" + kw + "'");
  }

  void config(std::span<const Node> rest) {
    Fields f(rest, {"block_time", "blocks_per_epoch", "base_fee", "detection_budget", "fee_recipient", "detection",
                    "workers", "quarantine_period", "operators", "max_queued", "max_pending", "replacement_bump",
                    "tx_lifetime", "escape_timeout", "blocks"});
    f.no_extras();
    auto& s = sc_.sequencer;
    s.block_time = f.u64("block_time", s.block_time);
    s.blocks_per_epoch = f.u64("blocks_per_epoch", s.blocks_per_epoch);
    s.base_fee = f.u64("base_fee", s.base_fee);
    s.detection_budget = f.u64("detection_budget", s.detection_budget);
    s.detection_workers = static_cast<unsigned>(f.u64("workers", s.detection_workers));
    if (auto v = f.opt("detection")) s.detection_enabled = parse_switch(*v);
    if (auto v = f.opt("fee_recipient")) {
      s.fee_recipient = resolve_address(*v, names_);
      fee_recipient_named_ = true;
    }
    auto& q = sc_.quarantine;
    q.time_criterion_period = f.u64("quarantine_period", q.time_criterion_period);
    if (auto v = f.opt("operators"))
      for (const auto& op : split_commas(*v)) q.operators.insert(resolve_address(op, names_));
    auto& p = sc_.pool;
    p.max_queued = f.u64("max_queued", p.max_queued);
    p.max_pending = f.u64("max_pending", p.max_pending);
    p.min_replacement_bump_percent = static_cast<unsigned>(f.u64("replacement_bump", p.min_replacement_bump_percent));
    p.tx_lifetime = f.u64("tx_lifetime", p.tx_lifetime);
    sc_.escape_timeout = f.u64("escape_timeout", sc_.escape_timeout);
    sc_.blocks = f.u64("blocks", sc_.blocks);
    if (s.block_time == 0) throw LineError("block_time must be positive");
    if (s.blocks_per_epoch == 0) throw LineError("blocks_per_epoch must be at least 1");
    if (q.time_criterion_period == 0) throw LineError("quarantine_period must be positive");
  }

  void template_decl(std::span<const Node> rest) {
    if (rest.empty() || rest[0].is_list || !rest[0].atom.starts_with("%")) throw LineError("expected %template");
    Fields f(rest.subspan(1), {"admin"});
    f.no_extras();
    if (templates_.contains(rest[0].atom)) throw LineError("template declared twice");
    templates_[rest[0].atom].admin = resolve_address(f.get("admin"), names_);
  }

  void storage(std::span<const Node> rest) {
    if (rest.size() != 3 || rest[0].is_list || rest[1].is_list || rest[2].is_list)
      throw LineError("storage: expected @contract KEY VALUE");
    sc_.genesis.set_storage(resolve_address(rest[0].atom, names_), literal(rest[1].atom, names_),
                            literal(rest[2].atom, names_));
  }

  ContractCode& code_target(const Node& n) {
    if (n.is_list) throw LineError("code: expected @contract or %template");
    if (n.atom.starts_with("%")) {
      auto it = templates_.find(n.atom);
      if (it == templates_.end()) throw LineError("undeclared template '" + n.atom + "'");
      return it->second;
    }
    if (!n.atom.starts_with("@") || !contracts_.contains(n.atom.substr(1)))
      throw LineError("code: '" + n.atom + "' is not a declared contract");
    return contracts_[n.atom.substr(1)];
  }

  void code(std::span<const Node> rest) {
    if (rest.size() < 2) throw LineError("code: expected target and entry point");
    ContractCode& target = code_target(rest[0]);
    size_t first = 2;
    std::vector<Statement>* body = nullptr;
    if (!rest[1].is_list && rest[1].atom == "fallback") {
      body = &target.fallback;
    } else if (!rest[1].is_list && rest[1].atom == "fn") {
      if (rest.size() < 3 || rest[2].is_list) throw LineError("code: fn needs a name");
      body = &target.functions[selector_of(rest[2].atom)];
      first = 3;
    } else {
      throw LineError("code: expected fallback or fn NAME");
    }
    for (size_t i = first; i < rest.size(); ++i) body->push_back(to_statement(rest[i], names_));
  }

  void invariant(size_t line, std::span<const Node> rest) {
    if (rest.size() < 4 || rest[0].is_list || rest[1].is_list)
      throw LineError("invariant: expected ID @contract by=@admin EXPR");
    Fields f(rest.subspan(2, rest.size() - 3), {"by"});
    f.no_extras();
    Invariant inv;
    inv.id = rest[0].atom;
    inv.contract = resolve_address(rest[1].atom, names_);
    inv.registered_by = resolve_address(f.get("by"), names_);
    inv.predicate = to_expr(rest.back(), names_);
    invariants_.emplace_back(line, std::move(inv));
  }

  Bytes calldata(const Fields& f) const {
    if (f.has("data") && f.has("call")) throw LineError("use either call= or data=");
    if (f.has("args") && !f.has("call")) throw LineError("args= requires call=");
    if (f.has("data")) return from_hex(f.get("data"));
    if (!f.has("call")) return {};
    std::vector<Word> args;
    for (const auto& a : split_commas(f.opt("args").value_or(""))) args.push_back(literal(a, names_));
    return encode_call(f.get("call"), args);
  }

  void event(size_t line, std::span<const Node> rest) {
    if (rest.size() < 2 || rest[0].is_list || rest[1].is_list) throw LineError("at: expected TIME EVENT");
    Event e;
    e.line = line;
    e.time = parse_u64(rest[0].atom);
    if (e.time < last_time_)
      throw LineError("timestamp " + rest[0].atom + " is earlier than the previous event at " +
                      std::to_string(last_time_));
    last_time_ = e.time;
    const std::string& kind = rest[1].atom;
    auto args = rest.subspan(2);

    if (kind == "submit") {
      Fields f(args, {"id", "from", "to", "create", "value", "call", "args", "data", "nonce", "max_fee", "prio", "gas"});
      f.no_extras();
      event::Submit s;
      s.label = f.get("id");
      SignedTransaction& tx = s.tx;
      tx.sender = resolve_address(f.get("from"), names_);
      if (f.has("to") == f.has("create")) throw LineError("submit: exactly one of to= or create= is required");
      const uint64_t auto_nonce = next_nonce_.contains(tx.sender) ? next_nonce_[tx.sender]
                                                                  : sc_.genesis.nonce(tx.sender);
      tx.nonce = f.u64("nonce", auto_nonce);
      next_nonce_[tx.sender] = std::max(auto_nonce, tx.nonce + 1);
      if (f.has("to")) {
        tx.recipient = resolve_address(f.get("to"), names_);
        tx.data = calldata(f);
      } else {
        auto it = templates_.find(f.get("create"));
        if (it == templates_.end()) throw LineError("undeclared template '" + f.get("create") + "'");
        if (f.has("call") || f.has("data")) throw LineError("create= carries its own data");
        tx.data = encode_code(it->second);
        sc_.names.emplace(create_address(tx.sender, tx.nonce), s.label);
      }
      tx.value = f.u128v("value", 0);
      tx.max_fee = f.u64("max_fee", 10);
      tx.priority_fee = f.u64("prio", 1);
      tx.gas_limit = f.u64("gas", 100);
      e.body = std::move(s);
    } else if (kind == "deposit") {
      Fields f(args, {"id", "from", "to", "value", "call", "args", "data", "gas"});
      f.no_extras();
      event::Deposit d;
      d.label = f.get("id");
      d.sender = resolve_address(f.get("from"), names_);
      d.recipient = resolve_address(f.get("to"), names_);
      d.value = f.u128v("value", 0);
      d.data = calldata(f);
      d.gas_limit = f.u64("gas", 100);
      e.body = std::move(d);
    } else if (kind == "approve") {
      Fields f(args, {"tx", "by"});
      f.no_extras();
      e.body = event::Approve{f.get("tx"), resolve_address(f.get("by"), names_)};
    } else if (kind == "stake") {
      Fields f(args, {"account", "amount"});
      f.no_extras();
      e.body = event::Stake{resolve_address(f.get("account"), names_), parse_u128(f.get("amount"))};
    } else if (kind == "economic_release") {
      Fields f(args, {"tx"});
      f.no_extras();
      e.body = event::EconomicRelease{f.get("tx")};
    } else if (kind == "failure_release") {
      Fields f(args, {"tx"});
      f.no_extras();
      e.body = event::FailureRelease{f.get("tx")};
    } else if (kind == "base_fee" || kind == "advance") {
      if (args.size() != 1 || args[0].is_list) throw LineError(kind + ": expected one number");
      const uint64_t v = parse_u64(args[0].atom);
      if (kind == "base_fee")
        e.body = event::SetBaseFee{v};
      else
        e.body = event::Advance{v};
    } else if (kind == "escape_withdraw") {
      Fields f(args, {"deposit"});
      f.no_extras();
      e.body = event::EscapeWithdraw{f.get("deposit")};
    } else {
      throw LineError("unknown event '" + kind + "'");
    }
    sc_.events.push_back(std::move(e));
  }

  Scenario sc_;
  Names names_;
  std::map<std::string, ContractCode> contracts_;
  std::map<std::string, ContractCode> templates_;
  std::vector<std::pair<std::string, std::string>> pending_admins_;
  std::vector<std::pair<size_t, Invariant>> invariants_;
  std::map<Address, uint64_t> next_nonce_;
  uint64_t last_time_ = 0;
  bool fee_recipient_named_ = false;
};

}  // namespace

Scenario parse_scenario(std::string_view text) {
  return ScenarioParser().parse(text);
}

Expr parse_expression(std::string_view text, const std::map<std::string, Address>& names) {
  auto nodes = Lexer(text).all();
  if (nodes.size() != 1) throw std::invalid_argument("expected exactly one expression");
  return to_expr(nodes[0], names);
}

}  // namespace sls
