// slsim: rollup sequencer simulator with transaction quarantine
// Copyright 2026 The slsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include "sls/l1da.hpp"

namespace sls {

std::vector<Word> encode_bitmap(const std::vector<bool>& flags) {
  std::vector<Word> words((flags.size() + 255) / 256);
  for (size_t i = 0; i < flags.size(); ++i)
    if (flags[i]) words[i / 256].set_bit(i % 256);
  return words;
}

std::vector<bool> decode_bitmap(std::span<const Word> words, size_t count) {
  if (count > words.size() * 256) throw L1Error(L1Errc::bitmap_too_short);
  std::vector<bool> flags(count);
  for (size_t i = 0; i < count; ++i) flags[i] = words[i / 256].bit(i % 256);
  return flags;
}

std::string_view to_string(L1Errc e) {
  switch (e) {
    case L1Errc::bitmap_too_short:
      return "BITMAP_TOO_SHORT";
    case L1Errc::bitmap_mismatch:
      return "BITMAP_MISMATCH";
    case L1Errc::epoch_not_sealed:
      return "EPOCH_NOT_SEALED";
    case L1Errc::not_found:
      return "NOT_FOUND";
  }
  return "?";
}

L1Error::L1Error(L1Errc code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + (detail.empty() ? "" : ": " + detail)), code_(code) {}

std::string_view to_string(EscrowStatus s) {
  switch (s) {
    case EscrowStatus::pending:
      return "PENDING";
    case EscrowStatus::accepted:
      return "ACCEPTED";
    case EscrowStatus::refused:
      return "REFUSED";
    case EscrowStatus::refunded:
      return "REFUNDED";
  }
  return "?";
}

std::string_view to_string(EscapeOutcome o) {
  switch (o) {
    case EscapeOutcome::refunded:
      return "REFUNDED";
    case EscapeOutcome::already_accepted:
      return "NOT_ELIGIBLE(ALREADY_ACCEPTED)";
    case EscapeOutcome::too_early:
      return "NOT_ELIGIBLE(TOO_EARLY)";
    case EscapeOutcome::already_refunded:
      return "NOT_ELIGIBLE(ALREADY_REFUNDED)";
  }
  return "?";
}

DepositTransaction L1Chain::submit_deposit(const Address& sender, const Address& recipient, u128 value, Bytes data,
                                           uint64_t gas_limit, uint64_t now) {
  DepositTransaction d;
  d.l1_block = sealed_.size();
  d.l1_index = static_cast<uint32_t>(open_.deposits.size());
  d.sender = sender;
  d.recipient = recipient;
  d.value = value;
  d.data = std::move(data);
  d.gas_limit = gas_limit;
  open_.deposits.push_back(d);
  escrow_[d.id()] = {d, EscrowStatus::pending, now, now + escape_timeout_};
  return d;
}

const L1Block& L1Chain::seal_block(uint64_t timestamp) {
  open_.number = sealed_.size();
  open_.timestamp = timestamp;
  sealed_.push_back(std::move(open_));
  open_ = {};
  open_.number = sealed_.size();
  return sealed_.back();
}

void L1Chain::post_batch(L1Record record) {
  if (record.epoch >= sealed_.size())
    throw L1Error(L1Errc::epoch_not_sealed, "epoch " + std::to_string(record.epoch));
  if (record.epoch_head) {
    const auto& deposits = sealed_[record.epoch].deposits;
    const size_t n = deposits.size();
    const bool shape_ok = record.deposit_count == n && record.deposit_bitmap.size() == (n + 255) / 256 &&
                          encode_bitmap(decode_bitmap(record.deposit_bitmap, n)) == record.deposit_bitmap;
    if (!shape_ok) throw L1Error(L1Errc::bitmap_mismatch, "epoch " + std::to_string(record.epoch));
    const auto flags = decode_bitmap(record.deposit_bitmap, n);
    for (size_t i = 0; i < n; ++i) {
      auto& entry = escrow_.at(deposits[i].id());
      if (entry.status == EscrowStatus::refunded) {
        if (flags[i]) throw L1Error(L1Errc::bitmap_mismatch, "refunded deposit marked accepted");
        continue;
      }
      entry.status = flags[i] ? EscrowStatus::accepted : EscrowStatus::refused;
    }
  } else if (record.deposit_count != 0 || !record.deposit_bitmap.empty()) {
    throw L1Error(L1Errc::bitmap_mismatch, "bitmap on a non-head record");
  }
  open_.inbox_posts.push_back(std::move(record));
}

EscapeResult L1Chain::escape_withdraw(const DepositId& id, uint64_t now) {
  auto it = escrow_.find(id);
  if (it == escrow_.end()) throw L1Error(L1Errc::not_found);
  EscrowEntry& e = it->second;
  switch (e.status) {
    case EscrowStatus::accepted:
      return {EscapeOutcome::already_accepted, 0};
    case EscrowStatus::refunded:
      return {EscapeOutcome::already_refunded, 0};
    case EscrowStatus::pending:
      if (now < e.refundable_at) return {EscapeOutcome::too_early, 0};
      break;
    case EscrowStatus::refused:
      break;
  }
  e.status = EscrowStatus::refunded;
  return {EscapeOutcome::refunded, e.deposit.value};
}

std::vector<L1Block> L1Chain::history() const {
  std::vector<L1Block> out = sealed_;
  if (!open_.deposits.empty() || !open_.inbox_posts.empty()) out.push_back(open_);
  return out;
}

const EscrowEntry& L1Chain::escrow(const DepositId& id) const {
  auto it = escrow_.find(id);
  if (it == escrow_.end()) throw L1Error(L1Errc::not_found);
  return it->second;
}

u128 L1Chain::escrowed_value() const {
  u128 total = 0;
  for (const auto& [_, e] : escrow_)
    if (e.status == EscrowStatus::pending || e.status == EscrowStatus::refused) total += e.deposit.value;
  return total;
}

std::optional<std::string> check_conservation(const L1Chain& l1, const std::set<DepositId>& minted_on_l2) {
  auto name = [](const DepositId& id) { return std::to_string(id.l1_block) + ":" + std::to_string(id.l1_index); };
  for (const auto& id : minted_on_l2)
    if (!l1.escrows().contains(id)) return "deposit " + name(id) + " minted without an escrow entry";
  for (const auto& [id, e] : l1.escrows()) {
    const bool minted = minted_on_l2.contains(id);
    if (minted != (e.status == EscrowStatus::accepted))
      return "deposit " + name(id) + " is " + std::string(to_string(e.status)) +
             (minted ? " but minted on L2" : " but not minted on L2");
  }
  return std::nullopt;
}

}  // namespace sls
