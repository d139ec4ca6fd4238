// slsim: rollup sequencer simulator with transaction quarantine
// Copyright 2026 The slsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include "sls/mempool.hpp"

#include <queue>
#include <tuple>

namespace sls {

std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::nonce_too_low:
      return "NONCE_TOO_LOW";
    case RejectReason::insufficient_balance:
      return "INSUFFICIENT_BALANCE";
    case RejectReason::underpriced_replacement:
      return "UNDERPRICED_REPLACEMENT";
    case RejectReason::pool_full:
      return "POOL_FULL";
    case RejectReason::already_known:
      return "ALREADY_KNOWN";
    case RejectReason::malformed:
      return "MALFORMED";
  }
  return "?";
}

std::string_view to_string(RetireReason r) {
  switch (r) {
    case RetireReason::nonce_too_low:
      return "NONCE_TOO_LOW";
    case RetireReason::lifetime_exceeded:
      return "LIFETIME_EXCEEDED";
    case RetireReason::insufficient_balance:
      return "INSUFFICIENT_BALANCE";
  }
  return "?";
}

namespace {
bool affordable(const SignedTransaction& tx, const WorldState& state) {
  u128 balance = state.balance(tx.sender);
  u128 max_gas = static_cast<u128>(tx.gas_limit) * tx.max_fee;
  return balance >= max_gas && balance - max_gas >= tx.value;
}
}  // namespace

SubmitResult Mempool::submit(const SignedTransaction& tx, uint64_t now, const WorldState& state) {
  if (!tx.well_formed()) return Rejected{RejectReason::malformed};
  const TxHash hash = tx_hash(tx);
  if (entries_.contains(hash)) return Rejected{RejectReason::already_known};
  if (tx.nonce < state.nonce(tx.sender)) return Rejected{RejectReason::nonce_too_low};
  if (!affordable(tx, state)) return Rejected{RejectReason::insufficient_balance};

  auto& nonces = by_sender_[tx.sender];
  if (auto it = nonces.find(tx.nonce); it != nonces.end()) {
    const TxHash old = it->second;
    const PoolEntry& prev = entries_.at(old);
    const u128 required = static_cast<u128>(prev.tx.max_fee) * (100 + config_.min_replacement_bump_percent);
    if (static_cast<u128>(tx.max_fee) * 100 < required) return Rejected{RejectReason::underpriced_replacement};
    const PoolStatus status = prev.status;
    entries_.erase(old);
    it->second = hash;
    entries_.emplace(hash, PoolEntry{tx, hash, now, status});
    return Replaced{old, status};
  }

  nonces.emplace(tx.nonce, hash);
  entries_.emplace(hash, PoolEntry{tx, hash, now, PoolStatus::queued});
  refresh(tx.sender, state);

  if (count(PoolStatus::pending) > config_.max_pending) {
    erase(hash);
    refresh(tx.sender, state);
    return Rejected{RejectReason::pool_full};
  }

  std::vector<TxHash> evicted;
  while (count(PoolStatus::queued) > config_.max_queued) {
    // Evict the cheapest queued entry; among equals the most recent goes first.
    const PoolEntry* victim = nullptr;
    for (const auto& [h, e] : entries_) {
      if (e.status != PoolStatus::queued) continue;
      if (!victim || std::tuple(e.tx.max_fee, victim->received_at, victim->hash) <
                         std::tuple(victim->tx.max_fee, e.received_at, e.hash))
        victim = &e;
    }
    const TxHash victim_hash = victim->hash;
    const Address victim_sender = victim->tx.sender;
    erase(victim_hash);
    refresh(victim_sender, state);
    if (victim_hash == hash) return Rejected{RejectReason::pool_full};
    evicted.push_back(victim_hash);
  }
  return Accepted{entries_.at(hash).status, std::move(evicted)};
}

std::vector<SignedTransaction> Mempool::pending_candidates(
    uint64_t base_fee, const WorldState& state, const std::function<bool(const TxHash&)>& excluded) const {
  struct Head {
    uint64_t tip;
    uint64_t received_at;
    TxHash hash;
    const Address* sender;
    uint64_t nonce;
  };
  // Best effective tip, then earliest arrival, then smallest hash.
  auto worse = [](const Head& a, const Head& b) {
    if (a.tip != b.tip) return a.tip < b.tip;
    if (a.received_at != b.received_at) return a.received_at > b.received_at;
    return a.hash > b.hash;
  };
  std::priority_queue<Head, std::vector<Head>, decltype(worse)> heads(worse);

  auto eligible = [&](const PoolEntry& e) {
    return e.status == PoolStatus::pending && e.tx.max_fee >= base_fee && !(excluded && excluded(e.hash));
  };
  auto head_of = [&](const Address& sender, uint64_t nonce) -> std::optional<Head> {
    auto sit = by_sender_.find(sender);
    if (sit == by_sender_.end()) return std::nullopt;
    auto nit = sit->second.find(nonce);
    if (nit == sit->second.end()) return std::nullopt;
    const PoolEntry& e = entries_.at(nit->second);
    if (!eligible(e)) return std::nullopt;
    return Head{std::min(e.tx.priority_fee, e.tx.max_fee - base_fee), e.received_at, e.hash, &sit->first, nonce};
  };

  for (const auto& [sender, nonces] : by_sender_)
    if (auto h = head_of(sender, state.nonce(sender))) heads.push(*h);

  std::vector<SignedTransaction> out;
  while (!heads.empty()) {
    Head h = heads.top();
    heads.pop();
    out.push_back(entries_.at(h.hash).tx);
    if (auto next = head_of(*h.sender, h.nonce + 1)) heads.push(*next);
  }
  return out;
}

std::vector<Retirement> Mempool::retire(uint64_t now, const WorldState& state) {
  std::vector<Retirement> out;
  for (const auto& [hash, e] : entries_) {
    if (e.tx.nonce < state.nonce(e.tx.sender))
      out.push_back({hash, RetireReason::nonce_too_low});
    else if (e.status == PoolStatus::queued && e.received_at + config_.tx_lifetime < now)
      out.push_back({hash, RetireReason::lifetime_exceeded});
    else if (!affordable(e.tx, state))
      out.push_back({hash, RetireReason::insufficient_balance});
  }
  std::set<Address> touched;
  for (const auto& r : out) {
    touched.insert(entries_.at(r.hash).tx.sender);
    erase(r.hash);
  }
  for (const auto& [sender, _] : by_sender_) touched.insert(sender);
  for (const auto& s : touched) refresh(s, state);
  return out;
}

bool Mempool::remove(const TxHash& hash, const WorldState& state) {
  auto it = entries_.find(hash);
  if (it == entries_.end()) return false;
  const Address sender = it->second.tx.sender;
  erase(hash);
  refresh(sender, state);
  return true;
}

const PoolEntry* Mempool::find(const TxHash& hash) const {
  auto it = entries_.find(hash);
  return it == entries_.end() ? nullptr : &it->second;
}

size_t Mempool::count(PoolStatus status) const {
  size_t n = 0;
  for (const auto& [_, e] : entries_) n += e.status == status;
  return n;
}

std::vector<PoolEntry> Mempool::entries() const {
  std::vector<PoolEntry> out;
  for (const auto& [_, nonces] : by_sender_)
    for (const auto& [_, h] : nonces) out.push_back(entries_.at(h));
  return out;
}

void Mempool::refresh(const Address& sender, const WorldState& state) {
  auto sit = by_sender_.find(sender);
  if (sit == by_sender_.end()) return;
  uint64_t expected = state.nonce(sender);
  for (const auto& [nonce, hash] : sit->second) {
    auto& e = entries_.at(hash);
    if (nonce == expected) {
      e.status = PoolStatus::pending;
      ++expected;
    } else {
      e.status = PoolStatus::queued;
    }
  }
}

void Mempool::erase(const TxHash& hash) {
  auto it = entries_.find(hash);
  if (it == entries_.end()) return;
  auto sit = by_sender_.find(it->second.tx.sender);
  sit->second.erase(it->second.tx.nonce);
  if (sit->second.empty()) by_sender_.erase(sit);
  entries_.erase(it);
}

}  // namespace sls
