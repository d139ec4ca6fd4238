// slsim: rollup sequencer simulator with transaction quarantine
// Copyright 2026 The slsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include "sls/sequencer.hpp"

namespace sls {

ScenarioError::ScenarioError(size_t line, const std::string& reason)
    : std::runtime_error("SCENARIO_ERROR(line " + std::to_string(line) + "): " + reason), line_(line), reason_(reason) {}

Sequencer::Sequencer(SequencerConfig config, QuarantineConfig qconfig, PoolConfig pconfig, uint64_t escape_timeout,
                     WorldState genesis, InvariantSet invariants)
    : config_(std::move(config)),
      base_fee_(config_.base_fee),
      genesis_(genesis),
      state_(std::move(genesis)),
      invariants_(std::move(invariants)),
      pool_(pconfig),
      quarantine_(std::move(qconfig)),
      l1_(escape_timeout) {
  if (config_.blocks_per_epoch == 0) throw std::invalid_argument("blocks_per_epoch must be at least 1");
  if (config_.block_time == 0) throw std::invalid_argument("block_time must be positive");
}

SubmitResult Sequencer::submit(const SignedTransaction& tx, uint64_t now) {
  SubmitResult result = pool_.submit(tx, now, state_);
  if (auto* r = std::get_if<Replaced>(&result)) {
    ledger_.refund(r->old);
    if (quarantine_.is_active(r->old)) quarantine_.on_replacement(r->old, tx, now, next_block());
  } else if (auto* a = std::get_if<Accepted>(&result)) {
    for (const auto& h : a->evicted) {
      drops_.push_back({next_block(), now, h, "EVICTED"});
      ledger_.refund(h);
      quarantine_.on_mempool_retired(h, "EVICTED", now, next_block());
    }
  }
  return result;
}

DepositTransaction Sequencer::deposit(const event::Deposit& d, uint64_t now) {
  return l1_.submit_deposit(d.sender, d.recipient, d.value, d.data, d.gas_limit, now);
}

ApprovalOutcome Sequencer::approve(const TxHash& hash, const Address& approver, uint64_t now) {
  return quarantine_.approve_release(hash, approver, state_, now, next_block());
}

EconomicOutcome Sequencer::economic_release(const TxHash& hash, uint64_t now) {
  return quarantine_.try_economic_release(hash, ledger_, now, next_block());
}

ReleaseOutcome Sequencer::failure_release(const TxHash& hash, uint64_t now) {
  if (const auto* e = quarantine_.active_entry(hash); e && !e->is_deposit) ++counters_.failure_sims;
  const BlockContext ctx{base_fee_, now, config_.fee_recipient};
  return quarantine_.request_failure_release(hash, state_, ctx, now, next_block());
}

void Sequencer::drop_from_pool(const TxHash& hash) {
  pool_.remove(hash, state_);
  ledger_.refund(hash);
}

const Block& Sequencer::build_block(uint64_t timestamp) {
  const uint64_t n = next_block();
  Block block;
  block.number = n;
  if (n > 0) block.parent_hash = block_hash(blocks_.back());
  block.timestamp = timestamp;
  block.base_fee = base_fee_;
  block.epoch = n / config_.blocks_per_epoch;
  const BlockContext ctx{base_fee_, timestamp, config_.fee_recipient};
  const bool head = n % config_.blocks_per_epoch == 0;
  const bool detecting = detection_active();

  WorldState work = state_;
  std::vector<bool> accepted;
  if (head) {
    for (const auto& d : l1_.seal_block(timestamp).deposits) {
      if (l1_.escrow(d.id()).status == EscrowStatus::refunded) {
        accepted.push_back(false);
        continue;
      }
      SimulationResult sim = execute_transaction(work, d, ctx);
      if (detecting) {
        ++counters_.deposit_sims;
        Verdict verdict = detector_.assess(sim, work, invariants_).verdict;
        if (verdict.malicious) {
          quarantine_.admit(d, verdict, timestamp, n);
          accepted.push_back(false);
          continue;
        }
      }
      work = std::move(sim.post_state);
      block.deposits.push_back(d);
      accepted.push_back(true);
    }
  }

  auto quarantined = [this](const TxHash& h) { return quarantine_.is_active(h); };
  std::vector<SignedTransaction> candidates = pool_.pending_candidates(base_fee_, work, quarantined);
  std::vector<SignedTransaction> benign;
  if (detecting) {
    CandidateSet set;
    for (auto& c : candidates) {
      const bool cleared = quarantine_.is_released_duplicate(c);
      set.txs.push_back({std::move(c), cleared});
    }
    set.tip_state = work;
    set.context = ctx;
    set.budget = config_.detection_budget;
    DetectionOutcome out = hybrid_detect(set, invariants_, detector_, config_.detection_workers);
    counters_.isolated_sims += out.stats.isolated_sims;
    counters_.contextual_sims += out.stats.contextual_sims;
    counters_.deferred_count += out.deferred.size();
    for (const auto& m : out.malicious) quarantine_.admit(m.tx, m.verdict, timestamp, n);
    for (auto& t : out.benign) benign.push_back(std::get<SignedTransaction>(std::move(t)));
  } else {
    benign = std::move(candidates);
  }

  for (auto& tx : benign) {
    SimulationResult sim = execute_transaction(work, tx, ctx);
    if (!sim.executed()) continue;
    work = std::move(sim.post_state);
    block.transactions.push_back(std::move(tx));
  }

  block.state_root = state_root(work);
  state_ = std::move(work);
  for (const auto& d : block.deposits) minted_.insert(d.id());
  for (const auto& tx : block.transactions) drop_from_pool(tx_hash(tx));

  const uint64_t sims_before = simulation_count();
  quarantine_.per_block_maintenance(state_, timestamp, n);
  counters_.maintenance_sims += simulation_count() - sims_before;

  for (const auto& r : pool_.retire(timestamp, state_)) {
    drops_.push_back({n, timestamp, r.hash, std::string(to_string(r.reason))});
    quarantine_.on_mempool_retired(r.hash, to_string(r.reason), timestamp, n);
    ledger_.refund(r.hash);
  }

  L1Record record;
  record.epoch = block.epoch;
  record.l2_block = n;
  record.timestamp = timestamp;
  record.base_fee = block.base_fee;
  record.epoch_head = head;
  record.batch = block.transactions;
  if (head) {
    record.deposit_count = static_cast<uint32_t>(accepted.size());
    record.deposit_bitmap = encode_bitmap(accepted);
  }
  l1_.post_batch(std::move(record));

  if (auto violation = check_conservation(l1_, minted_)) throw std::logic_error("conservation: " + *violation);

  blocks_.push_back(std::move(block));
  return blocks_.back();
}

void Sequencer::finish(uint64_t timestamp) {
  if (!l1_.open_block().deposits.empty() || !l1_.open_block().inbox_posts.empty()) l1_.seal_block(timestamp);
}

L1History Sequencer::history() const {
  return {{config_.fee_recipient, config_.blocks_per_epoch, genesis_}, l1_.history()};
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

RunReport run(const Scenario& scenario, const RunOptions& options) {
  SequencerConfig config = scenario.sequencer;
  if (options.workers) config.detection_workers = *options.workers;
  Sequencer seq(config, scenario.quarantine, scenario.pool, scenario.escape_timeout, scenario.genesis,
                scenario.invariants);

  RunReport report;
  report.names = scenario.names;
  std::map<std::string, TxHash> tx_labels;
  std::map<std::string, DepositTransaction> deposit_labels;

  auto name = [&](const Address& a) {
    auto it = scenario.names.find(a);
    return it == scenario.names.end() ? a.hex() : "@" + it->second;
  };
  auto hash_of = [&](const Event& e, const std::string& label) {
    auto it = tx_labels.find(label);
    if (it == tx_labels.end()) throw ScenarioError(e.line, "unknown transaction label '" + label + "'");
    return it->second;
  };

  uint64_t clock = 0;

  auto apply = [&](const Event& e) {
    std::string text = std::visit(
        overloaded{
            [&](const event::Submit& s) {
              const TxHash h = tx_hash(s.tx);
              tx_labels[s.label] = h;
              report.labels[h] = s.label;
              std::string out = "submit " + s.label + " " + h.hex() + " ";
              const SubmitResult r = seq.submit(s.tx, e.time);
              auto status = [](PoolStatus st) { return st == PoolStatus::pending ? "PENDING" : "QUEUED"; };
              if (auto* a = std::get_if<Accepted>(&r)) {
                out += std::string("ACCEPTED ") + status(a->status);
                for (const auto& ev : a->evicted) out += " evicted=" + ev.hex();
              } else if (auto* rp = std::get_if<Replaced>(&r)) {
                out += std::string("REPLACED ") + status(rp->status) + " old=" + rp->old.hex();
              } else {
                out += "REJECTED " + std::string(to_string(std::get<Rejected>(r).reason));
              }
              return out;
            },
            [&](const event::Deposit& d) {
              const DepositTransaction dep = seq.deposit(d, e.time);
              const TxHash h = tx_hash(dep);
              deposit_labels[d.label] = dep;
              tx_labels[d.label] = h;
              report.labels[h] = d.label;
              return "deposit " + d.label + " " + std::to_string(dep.l1_block) + ":" + std::to_string(dep.l1_index) +
                     " " + h.hex();
            },
            [&](const event::Approve& a) {
              std::string out = "approve " + a.tx + " by " + name(a.approver) + " ";
              try {
                const ApprovalOutcome r = seq.approve(hash_of(e, a.tx), a.approver, e.time);
                if (r.released) return out + "RELEASED";
                out += "PENDING_APPROVALS missing=";
                for (size_t i = 0; i < r.missing.size(); ++i) out += (i ? "," : "") + name(r.missing[i]);
                return out;
              } catch (const QuarantineError& err) {
                return out + std::string(to_string(err.code()));
              }
            },
            [&](const event::Stake& s) {
              seq.stake(s.account, s.amount);
              return "stake " + name(s.account) + " " + to_string(s.amount);
            },
            [&](const event::EconomicRelease& r) {
              std::string out = "economic_release " + r.tx + " ";
              try {
                const EconomicOutcome o = seq.economic_release(hash_of(e, r.tx), e.time);
                return out + (o.released ? "RELEASED locked=" : "INSUFFICIENT_COLLATERAL needed>") +
                       to_string(o.needed);
              } catch (const QuarantineError& err) {
                return out + std::string(to_string(err.code()));
              }
            },
            [&](const event::FailureRelease& r) {
              std::string out = "failure_release " + r.tx + " ";
              try {
                return out + (seq.failure_release(hash_of(e, r.tx), e.time) == ReleaseOutcome::released
                                  ? "RELEASED"
                                  : "STILL_HELD");
              } catch (const QuarantineError& err) {
                return out + std::string(to_string(err.code()));
              }
            },
            [&](const event::SetBaseFee& b) {
              seq.set_base_fee(b.base_fee);
              return "base_fee " + std::to_string(b.base_fee);
            },
            [&](const event::Advance& a) {
              clock += a.seconds;
              return "advance " + std::to_string(a.seconds) + " clock=" + std::to_string(clock);
            },
            [&](const event::EscapeWithdraw& w) {
              auto it = deposit_labels.find(w.deposit);
              if (it == deposit_labels.end())
                throw ScenarioError(e.line, "unknown deposit label '" + w.deposit + "'");
              const EscapeResult r = seq.escape_withdraw(it->second.id(), e.time);
              std::string out = "escape_withdraw " + w.deposit + " " + std::string(to_string(r.outcome));
              if (r.outcome == EscapeOutcome::refunded) out += " value=" + to_string(r.value);
              return out;
            },
        },
        e.body);
    report.events.push_back({e.time, e.line, std::move(text)});
  };

  const auto& events = scenario.events;
  for (size_t i = 1; i < events.size(); ++i)
    if (events[i].time < events[i - 1].time)
      throw ScenarioError(events[i].line, "timestamp " + std::to_string(events[i].time) + " is earlier than " +
                                              std::to_string(events[i - 1].time));

  size_t next = 0;
  for (uint64_t k = 0; k < scenario.blocks; ++k) {
    while (next < events.size() && events[next].time <= clock + config.block_time) apply(events[next++]);
    clock += config.block_time;
    seq.build_block(clock);
    if (seq.counters().maintenance_sims != 0)
      throw std::logic_error("per-block maintenance performed a simulation");
    if (options.after_block) options.after_block(seq);
  }
  if (next < events.size())
    throw ScenarioError(events[next].line, "event at " + std::to_string(events[next].time) +
                                               " falls after the final block");
  seq.finish(clock);

  report.blocks.assign(seq.blocks().begin(), seq.blocks().end());
  report.quarantine.assign(seq.quarantine().entries().begin(), seq.quarantine().entries().end());
  report.counters = seq.counters();
  report.pool_drops.assign(seq.pool_drops().begin(), seq.pool_drops().end());
  report.escrow = seq.l1().escrows();
  report.final_state_root = state_root(seq.tip_state());
  report.l1 = seq.history();
  return report;
}

}  // namespace sls
