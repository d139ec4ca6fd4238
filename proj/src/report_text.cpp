// slsim: rollup sequencer simulator with transaction quarantine
// Copyright 2026 The slsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include "sls/cli.hpp"

#include <sstream>

namespace sls {
namespace {

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

std::string value_of(const std::vector<std::string>& toks, std::string_view key) {
  for (const auto& t : toks)
    if (t.size() > key.size() && t.starts_with(key) && t[key.size()] == '=') return t.substr(key.size() + 1);
  return {};
}

std::string deposit_id(const DepositId& id) {
  return std::to_string(id.l1_block) + ":" + std::to_string(id.l1_index);
}

}  // namespace

std::string write_report(const RunReport& r) {
  auto name = [&](const Address& a) {
    auto it = r.names.find(a);
    return it == r.names.end() ? a.hex() : "@" + it->second;
  };
  auto label = [&](const TxHash& h) {
    auto it = r.labels.find(h);
    return it == r.labels.end() ? std::string("-") : it->second;
  };
  auto list = [](const auto& items, auto&& fmt) {
    std::string s;
    for (const auto& i : items) s += (s.empty() ? "" : ",") + fmt(i);
    return s.empty() ? std::string("-") : s;
  };

  std::ostringstream o;
  o << "slsim-report 1\n";
  o << "final_state_root " << r.final_state_root.hex() << "\n";
  const Counters& c = r.counters;
  o << "counters isolated_sims=" << c.isolated_sims << " contextual_sims=" << c.contextual_sims
    << " deposit_sims=" << c.deposit_sims << " maintenance_sims=" << c.maintenance_sims
    << " deferred_count=" << c.deferred_count << " failure_sims=" << c.failure_sims << "\n";

  o << "blocks " << r.blocks.size() << "\n";
  for (const auto& b : r.blocks) {
    o << "block " << b.number << " time=" << b.timestamp << " epoch=" << b.epoch << " base_fee=" << b.base_fee
      << " deposits=" << b.deposits.size() << " txs=" << b.transactions.size() << " root=" << b.state_root.hex()
      << " hash=" << block_hash(b).hex() << "\n";
    for (const auto& d : b.deposits) {
      const TxHash h = tx_hash(d);
      o << "  deposit " << h.hex() << " " << label(h) << " " << deposit_id(d.id()) << "\n";
    }
    for (const auto& tx : b.transactions) {
      const TxHash h = tx_hash(tx);
      o << "  tx " << h.hex() << " " << label(h) << " from=" << name(tx.sender) << " nonce=" << tx.nonce << "\n";
    }
  }

  o << "quarantine " << r.quarantine.size() << "\n";
  for (const auto& e : r.quarantine) {
    o << "entry " << e.serial << " " << e.hash.hex() << " label=" << label(e.hash)
      << " kind=" << (e.is_deposit ? "deposit" : "signed") << " state=" << to_string(e.state)
      << " at=" << e.quarantined_at << " block=" << e.quarantined_block
      << " damage=" << to_string(e.verdict.damage_estimate)
      << " violated=" << list(e.verdict.violated, [](const std::string& s) { return s; })
      << " victims=" << list(e.verdict.victims, name) << "\n";
    for (const auto& a : e.audit) {
      o << "  audit t=" << a.time << " block=" << a.block << " " << to_string(a.kind)
        << " actor=" << (a.actor ? name(*a.actor) : std::string("-"));
      if (!a.detail.empty()) o << " " << a.detail;
      o << "\n";
    }
  }

  o << "pool_drops " << r.pool_drops.size() << "\n";
  for (const auto& d : r.pool_drops)
    o << "dropped " << d.hash.hex() << " " << label(d.hash) << " block=" << d.block << " t=" << d.time << " "
      << d.reason << "\n";

  o << "escrow " << r.escrow.size() << "\n";
  for (const auto& [id, e] : r.escrow) {
    o << "deposit " << deposit_id(id) << " " << label(tx_hash(e.deposit)) << " " << to_string(e.status)
      << " value=" << to_string(e.deposit.value) << " refundable_at=" << e.refundable_at << "\n";
  }

  o << "events " << r.events.size() << "\n";
  for (const auto& ev : r.events) o << "event t=" << ev.time << " line=" << ev.line << " " << ev.text << "\n";
  return o.str();
}

std::vector<ReportEntry> read_report_quarantine(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != "slsim-report 1") throw std::runtime_error("not an slsim report");
  std::vector<ReportEntry> out;
  bool in_section = false;
  while (std::getline(in, line)) {
    if (line.starts_with("quarantine ")) {
      in_section = true;
      continue;
    }
    if (!in_section) continue;
    if (line.starts_with("entry ")) {
      auto toks = split(line);
      if (toks.size() < 3) throw std::runtime_error("malformed entry line: " + line);
      ReportEntry e;
      e.serial = parse_u64(toks[1]);
      e.hash = toks[2];
      e.label = value_of(toks, "label");
      e.state = value_of(toks, "state");
      e.header = line;
      out.push_back(std::move(e));
    } else if (line.starts_with("  audit ") && !out.empty()) {
      out.back().audit.push_back(line.substr(2));
    } else {
      break;
    }
  }
  if (!in_section) throw std::runtime_error("report has no quarantine section");
  return out;
}

std::string write_l1_history(const L1History& h) {
  std::ostringstream o;
  o << "slsim-l1 1\n";
  o << "rollup fee_recipient=" << h.genesis.fee_recipient.hex() << " blocks_per_epoch=" << h.genesis.blocks_per_epoch
    << "\n";
  for (const auto& [addr, acct] : h.genesis.state) {
    o << "account " << addr.hex() << " balance=" << to_string(acct->balance) << " nonce=" << acct->nonce
      << " code=" << (acct->code ? to_hex(encode_code(*acct->code)) : std::string("-")) << "\n";
    for (const auto& [k, v] : acct->storage) o << "slot " << addr.hex() << " " << k.hex() << " " << v.hex() << "\n";
  }
  for (const auto& b : h.blocks) {
    o << "l1block " << b.number << " " << b.timestamp << "\n";
    for (const auto& d : b.deposits) o << "deposit " << to_hex(canonical_encode(d)) << "\n";
    for (const auto& rec : b.inbox_posts) {
      std::string bitmap;
      for (const auto& w : rec.deposit_bitmap) bitmap += (bitmap.empty() ? "" : ",") + w.hex();
      o << "post epoch=" << rec.epoch << " l2_block=" << rec.l2_block << " timestamp=" << rec.timestamp
        << " base_fee=" << rec.base_fee << " head=" << (rec.epoch_head ? 1 : 0) << " deposits=" << rec.deposit_count
        << " bitmap=" << (bitmap.empty() ? "-" : bitmap) << " txs=" << rec.batch.size() << "\n";
      for (const auto& tx : rec.batch) o << "tx " << to_hex(canonical_encode(tx)) << "\n";
    }
  }
  o << "end\n";
  return o.str();
}

L1History read_l1_history(std::string_view text) {
  auto fail = [](size_t line, const std::string& why) -> DerivationError {
    return DerivationError(DerivationErrc::gap, 0, "history line " + std::to_string(line) + ": " + why);
  };
  std::istringstream in{std::string(text)};
  std::string line;
  size_t no = 0;
  L1History h;
  bool ended = false;
  size_t txs_expected = 0;

  auto need = [&](const std::vector<std::string>& toks, std::string_view key) {
    std::string v = value_of(toks, key);
    if (v.empty()) throw fail(no, "missing " + std::string(key));
    return v;
  };

  while (std::getline(in, line)) {
    ++no;
    if (ended) throw fail(no, "content after end");
    auto toks = split(line);
    if (toks.empty()) continue;
    const std::string& kw = toks[0];
    try {
      if (no == 1) {
        if (line != "slsim-l1 1") throw fail(no, "not an slsim L1 history");
        continue;
      }
      if (txs_expected > 0 && kw != "tx") throw fail(no, "batch shorter than announced");
      if (kw == "rollup") {
        h.genesis.fee_recipient = Address::from_hex_string(need(toks, "fee_recipient"));
        h.genesis.blocks_per_epoch = parse_u64(need(toks, "blocks_per_epoch"));
      } else if (kw == "account") {
        if (toks.size() != 5) throw fail(no, "malformed account");
        const Address a = Address::from_hex_string(toks[1]);
        Account acct;
        acct.balance = parse_u128(need(toks, "balance"));
        acct.nonce = parse_u64(need(toks, "nonce"));
        const std::string code = need(toks, "code");
        if (code != "-") acct.code = decode_code(from_hex(code));
        if (const Account* existing = h.genesis.state.find(a)) acct.storage = existing->storage;
        h.genesis.state.put(a, std::move(acct));
      } else if (kw == "slot") {
        if (toks.size() != 4) throw fail(no, "malformed slot");
        h.genesis.state.set_storage(Address::from_hex_string(toks[1]), Word::from_bytes(from_hex(toks[2])),
                                    Word::from_bytes(from_hex(toks[3])));
      } else if (kw == "l1block") {
        if (toks.size() != 3) throw fail(no, "malformed l1block");
        h.blocks.push_back({parse_u64(toks[1]), parse_u64(toks[2]), {}, {}});
      } else if (kw == "deposit") {
        if (h.blocks.empty() || toks.size() != 2) throw fail(no, "deposit outside a block");
        h.blocks.back().deposits.push_back(decode_deposit_transaction(from_hex(toks[1])));
      } else if (kw == "post") {
        if (h.blocks.empty()) throw fail(no, "post outside a block");
        L1Record rec;
        rec.epoch = parse_u64(need(toks, "epoch"));
        rec.l2_block = parse_u64(need(toks, "l2_block"));
        rec.timestamp = parse_u64(need(toks, "timestamp"));
        rec.base_fee = parse_u64(need(toks, "base_fee"));
        rec.epoch_head = need(toks, "head") == "1";
        rec.deposit_count = static_cast<uint32_t>(parse_u64(need(toks, "deposits")));
        const std::string bitmap = need(toks, "bitmap");
        if (bitmap != "-") {
          std::istringstream words(bitmap);
          for (std::string w; std::getline(words, w, ',');) rec.deposit_bitmap.push_back(Word::from_bytes(from_hex(w)));
        }
        txs_expected = parse_u64(need(toks, "txs"));
        h.blocks.back().inbox_posts.push_back(std::move(rec));
      } else if (kw == "tx") {
        if (txs_expected == 0 || toks.size() != 2) throw fail(no, "tx outside a batch");
        h.blocks.back().inbox_posts.back().batch.push_back(decode_signed_transaction(from_hex(toks[1])));
        --txs_expected;
      } else if (kw == "end") {
        ended = true;
      } else {
        throw fail(no, "unknown record '" + kw + "'");
      }
    } catch (const DecodeError& e) {
      throw fail(no, e.what());
    }
  }
  if (no == 0) throw fail(0, "empty file");
  if (!ended) throw fail(no, "truncated history (no end marker)");
  return h;
}

}  // namespace sls
