// slsim: rollup sequencer simulator with transaction quarantine
// Copyright 2026 The slsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include "sls/quarantine.hpp"

namespace sls {

std::string_view to_string(EntryState s) {
  switch (s) {
    case EntryState::active:
      return "ACTIVE";
    case EntryState::released:
      return "RELEASED";
    case EntryState::retired:
      return "RETIRED";
  }
  return "?";
}

std::string_view to_string(AuditKind k) {
  switch (k) {
    case AuditKind::admitted:
      return "ADMITTED";
    case AuditKind::approval:
      return "APPROVAL";
    case AuditKind::pending_approvals:
      return "PENDING_APPROVALS";
    case AuditKind::released_administrative:
      return "RELEASED_ADMINISTRATIVE";
    case AuditKind::released_time:
      return "RELEASED_TIME";
    case AuditKind::released_failure:
      return "RELEASED_FAILURE";
    case AuditKind::released_economic:
      return "RELEASED_ECONOMIC";
    case AuditKind::still_held:
      return "STILL_HELD";
    case AuditKind::insufficient_collateral:
      return "INSUFFICIENT_COLLATERAL";
    case AuditKind::retired_nonce:
      return "RETIRED_NONCE";
    case AuditKind::retired_mempool:
      return "RETIRED_MEMPOOL";
    case AuditKind::replaced:
      return "REPLACED";
    case AuditKind::release_denied:
      return "RELEASE_DENIED";
  }
  return "?";
}

std::string_view to_string(QuarantineErrc e) {
  switch (e) {
    case QuarantineErrc::already_quarantined:
      return "ALREADY_QUARANTINED";
    case QuarantineErrc::not_found:
      return "NOT_FOUND";
    case QuarantineErrc::not_authorized:
      return "NOT_AUTHORIZED";
    case QuarantineErrc::deposit_not_releasable:
      return "DEPOSIT_NOT_RELEASABLE";
  }
  return "?";
}

QuarantineError::QuarantineError(QuarantineErrc code)
    : std::runtime_error(std::string("quarantine: ") + std::string(to_string(code))), code_(code) {}

u128 CollateralLedger::available(const Address& account) const {
  auto it = stakes_.find(account);
  return it == stakes_.end() ? 0 : it->second;
}

u128 CollateralLedger::locked(const TxHash& hash) const {
  auto it = locks_.find(hash);
  return it == locks_.end() ? 0 : it->second.second;
}

void CollateralLedger::lock(const TxHash& hash, const Address& account, u128 amount) {
  auto& stake = stakes_[account];
  if (stake < amount) throw std::logic_error("collateral: lock exceeds stake");
  stake -= amount;
  locks_[hash] = {account, locks_[hash].second + amount};
}

u128 CollateralLedger::refund(const TxHash& hash) {
  auto it = locks_.find(hash);
  if (it == locks_.end()) return 0;
  auto [account, amount] = it->second;
  stakes_[account] += amount;
  locks_.erase(it);
  return amount;
}

const QuarantineEntry& Quarantine::admit(const Transaction& tx, const Verdict& verdict, uint64_t now,
                                         uint64_t block_no) {
  const TxHash hash = tx_hash(tx);
  if (active_.contains(hash)) throw QuarantineError(QuarantineErrc::already_quarantined);
  QuarantineEntry e;
  e.serial = entries_.size();
  e.tx = tx;
  e.hash = hash;
  e.verdict = verdict;
  e.quarantined_at = now;
  e.quarantined_block = block_no;
  e.is_deposit = std::holds_alternative<DepositTransaction>(tx);
  e.audit.push_back({now, block_no, AuditKind::admitted, std::nullopt, {}});
  active_.emplace(hash, entries_.size());
  entries_.push_back(std::move(e));
  return entries_.back();
}

MaintenanceReport Quarantine::per_block_maintenance(const WorldState& chain_state, uint64_t now,
                                                    uint64_t block_no) {
  MaintenanceReport report;
  std::vector<size_t> indices;
  for (const auto& [_, idx] : active_) indices.push_back(idx);
  std::sort(indices.begin(), indices.end());

  for (size_t idx : indices) {
    QuarantineEntry& e = entries_[idx];
    if (e.is_deposit) continue;
    const auto& tx = std::get<SignedTransaction>(e.tx);
    if (chain_state.nonce(tx.sender) > tx.nonce) {
      retire(e, AuditKind::retired_nonce, now, block_no, {});
      report.retired.push_back(e.hash);
    } else if (now >= e.quarantined_at + config_.time_criterion_period) {
      release(e, AuditKind::released_time, now, block_no, std::nullopt);
      report.time_released.push_back(e.hash);
    }
  }
  return report;
}

ReleaseOutcome Quarantine::request_failure_release(const TxHash& hash, const WorldState& tip,
                                                   const BlockContext& ctx, uint64_t now, uint64_t block_no) {
  QuarantineEntry& e = releasable_or_throw(hash, now, block_no);
  const auto sim = execute_transaction(tip, e.tx, ctx);
  const bool fails = sim.status == ExecStatus::revert ||
                     (sim.status == ExecStatus::precondition_failed &&
                      sim.failure == Precondition::insufficient_balance);
  std::string detail(to_string(sim.status));
  if (sim.failure) detail += ":" + std::string(to_string(*sim.failure));
  if (fails) {
    release(e, AuditKind::released_failure, now, block_no, std::nullopt, detail);
    return ReleaseOutcome::released;
  }
  e.audit.push_back({now, block_no, AuditKind::still_held, std::nullopt, detail});
  return ReleaseOutcome::still_held;
}

ApprovalOutcome Quarantine::approve_release(const TxHash& hash, const Address& approver, const WorldState& state,
                                            uint64_t now, uint64_t block_no) {
  QuarantineEntry& e = releasable_or_throw(hash, now, block_no);
  if (config_.operators.contains(approver)) {
    e.approvals.insert(approver);
    release(e, AuditKind::released_administrative, now, block_no, approver, "operator");
    return {true, {}};
  }

  auto admin_of = [&](const Address& victim) -> std::optional<Address> {
    const ContractCode* code = state.code(victim);
    return code ? std::optional(code->admin) : std::nullopt;
  };
  bool authorized = false;
  for (const auto& v : e.verdict.victims)
    if (admin_of(v) == approver) authorized = true;
  if (!authorized) throw QuarantineError(QuarantineErrc::not_authorized);

  e.approvals.insert(approver);
  e.audit.push_back({now, block_no, AuditKind::approval, approver, {}});

  ApprovalOutcome out;
  for (const auto& v : e.verdict.victims) {
    auto admin = admin_of(v);
    if (!admin || !e.approvals.contains(*admin)) out.missing.push_back(v);
  }
  if (out.missing.empty()) {
    release(e, AuditKind::released_administrative, now, block_no, approver, "victim admins");
    out.released = true;
  } else {
    std::string detail;
    for (const auto& m : out.missing) detail += (detail.empty() ? "" : ",") + m.hex();
    e.audit.push_back({now, block_no, AuditKind::pending_approvals, std::nullopt, detail});
  }
  return out;
}

EconomicOutcome Quarantine::try_economic_release(const TxHash& hash, CollateralLedger& ledger, uint64_t now,
                                                 uint64_t block_no) {
  QuarantineEntry& e = releasable_or_throw(hash, now, block_no);
  const auto& sender = std::get<SignedTransaction>(e.tx).sender;
  const u128 damage = e.verdict.damage_estimate;
  const u128 stake = ledger.available(sender);
  if (stake > damage) {
    ledger.lock(hash, sender, damage);
    release(e, AuditKind::released_economic, now, block_no, sender, "locked=" + to_string(damage));
    return {true, damage};
  }
  e.audit.push_back({now, block_no, AuditKind::insufficient_collateral, sender,
                     "stake=" + to_string(stake) + " needed>" + to_string(damage)});
  return {false, damage};
}

void Quarantine::on_mempool_retired(const TxHash& hash, std::string_view reason, uint64_t now, uint64_t block_no) {
  auto it = active_.find(hash);
  if (it == active_.end()) return;
  retire(entries_[it->second], AuditKind::retired_mempool, now, block_no, std::string(reason));
}

ReplacementDirective Quarantine::on_replacement(const TxHash& old_hash, const SignedTransaction& new_tx,
                                                uint64_t now, uint64_t block_no) {
  if (auto it = active_.find(old_hash); it != active_.end())
    entries_[it->second].audit.push_back({now, block_no, AuditKind::replaced, new_tx.sender, tx_hash(new_tx).hex()});
  return {!is_released_duplicate(new_tx)};
}

bool Quarantine::is_released_duplicate(const SignedTransaction& tx) const {
  return registry_.contains(duplicate_key(tx));
}

const QuarantineEntry* Quarantine::active_entry(const TxHash& hash) const {
  auto it = active_.find(hash);
  return it == active_.end() ? nullptr : &entries_[it->second];
}

QuarantineEntry& Quarantine::active_or_throw(const TxHash& hash) {
  auto it = active_.find(hash);
  if (it == active_.end()) throw QuarantineError(QuarantineErrc::not_found);
  return entries_[it->second];
}

QuarantineEntry& Quarantine::releasable_or_throw(const TxHash& hash, uint64_t now, uint64_t block_no) {
  QuarantineEntry& e = active_or_throw(hash);
  if (e.is_deposit) {
    e.audit.push_back({now, block_no, AuditKind::release_denied, std::nullopt, "deposit"});
    throw QuarantineError(QuarantineErrc::deposit_not_releasable);
  }
  return e;
}

void Quarantine::release(QuarantineEntry& e, AuditKind kind, uint64_t now, uint64_t block_no,
                         std::optional<Address> actor, std::string detail) {
  e.state = EntryState::released;
  e.audit.push_back({now, block_no, kind, actor, std::move(detail)});
  registry_.note(duplicate_key(std::get<SignedTransaction>(e.tx)));
  active_.erase(e.hash);
}

void Quarantine::retire(QuarantineEntry& e, AuditKind kind, uint64_t now, uint64_t block_no, std::string detail) {
  e.state = EntryState::retired;
  e.audit.push_back({now, block_no, kind, std::nullopt, std::move(detail)});
  active_.erase(e.hash);
}

}  // namespace sls
