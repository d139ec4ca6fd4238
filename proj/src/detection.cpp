// slsim: rollup sequencer simulator with transaction quarantine
// Copyright 2026 The slsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include "sls/detection.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace sls {

void InvariantSet::add(Invariant inv, const WorldState& state) {
  const ContractCode* code = state.code(inv.contract);
  if (code == nullptr) throw InvariantError("invariant " + inv.id + ": target is not a contract");
  if (code->admin != inv.registered_by)
    throw InvariantError("invariant " + inv.id + ": only the contract admin may register invariants");
  for (const auto& existing : invariants_)
    if (existing.id == inv.id) throw InvariantError("invariant " + inv.id + ": duplicate id");
  invariants_.push_back(std::move(inv));
}

bool InvariantSet::covers(const Address& contract) const {
  return std::any_of(invariants_.begin(), invariants_.end(),
                     [&](const Invariant& i) { return i.contract == contract; });
}

Assessment InvariantDetector::assess(const SimulationResult& sim, const WorldState& pre_state,
                                     const InvariantSet& invariants) const {
  Assessment out;
  if (sim.status != ExecStatus::success) return out;

  std::set<Address> touched;
  for (const auto& key : sim.writes) touched.insert(key.addr);

  std::set<Address> victims;
  for (const auto& inv : invariants.all()) {
    if (!touched.contains(inv.contract)) continue;
    out.observed.insert(AccessKey::balance_of(inv.contract));
    EvalEnv env{&sim.post_state, inv.contract, sim.sender, sim.value, {}, &out.observed};
    if (evaluate(inv.predicate, env).is_zero()) {
      out.verdict.violated.push_back(inv.id);
      victims.insert(inv.contract);
    }
  }
  for (const auto& v : victims) {
    u128 before = pre_state.balance(v);
    u128 after = sim.post_state.balance(v);
    if (before > after) out.verdict.damage_estimate += before - after;
  }
  out.verdict.victims.assign(victims.begin(), victims.end());
  out.verdict.malicious = !out.verdict.violated.empty();
  return out;
}

Verdict detect(const Detector& detector, const SimulationResult& sim, const WorldState& pre_state,
               const InvariantSet& invariants) {
  return detector.assess(sim, pre_state, invariants).verdict;
}

std::vector<DependencyEdge> dependency_edges(std::span<const AccessSet> writes, std::span<const AccessSet> reads) {
  std::vector<DependencyEdge> edges;
  const size_t n = std::min(writes.size(), reads.size());
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (intersects(writes[i], reads[j])) edges.emplace_back(i, j);
  return edges;
}

std::vector<DependencyEdge> dependency_edges(std::span<const SimulationResult> results) {
  std::vector<AccessSet> writes;
  std::vector<AccessSet> reads;
  for (const auto& r : results) {
    writes.push_back(r.writes);
    reads.push_back(r.reads);
  }
  return dependency_edges(writes, reads);
}

namespace {

template <class F>
void parallel_for(size_t n, unsigned workers, F&& fn) {
  if (workers <= 1 || n <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
  };
  std::vector<std::jthread> pool;
  const unsigned count = static_cast<unsigned>(std::min<size_t>(workers, n));
  for (unsigned w = 1; w < count; ++w) pool.emplace_back(work);
  work();
}

}  // namespace

DetectionOutcome hybrid_detect(const CandidateSet& set, const InvariantSet& invariants, const Detector& detector,
                               unsigned workers) {
  const size_t n = set.txs.size();
  DetectionOutcome out;

  // Isolated simulation and detection at the tip.
  std::vector<SimulationResult> isolated(n);
  std::vector<Assessment> assessed(n);
  parallel_for(n, workers, [&](size_t i) {
    isolated[i] = execute_transaction(set.tip_state, set.txs[i].tx, set.context);
    if (isolated[i].executed() && !set.txs[i].cleared)
      assessed[i] = detector.assess(isolated[i], set.tip_state, invariants);
  });
  out.stats.isolated_sims = n;

  // Dependency analysis.
  std::vector<AccessSet> writes(n);
  std::vector<AccessSet> reads(n);
  for (size_t i = 0; i < n; ++i) {
    writes[i] = isolated[i].writes;
    reads[i] = isolated[i].reads;
    reads[i].insert(assessed[i].observed.begin(), assessed[i].observed.end());
  }
  std::vector<bool> has_incoming(n, false);
  for (const auto& [from, to] : dependency_edges(writes, reads)) has_incoming[to] = true;

  // In-order pass: parallel verdicts for independent candidates, contextual
  // re-simulation for dependent ones.
  WorldState context = set.tip_state;
  AccessSet context_writes;
  size_t budget_left = set.budget.value_or(std::numeric_limits<size_t>::max());

  for (size_t j = 0; j < n; ++j) {
    const Candidate& cand = set.txs[j];
    const bool dependent = has_incoming[j] || intersects(reads[j], context_writes);

    if (!dependent) {
      if (!isolated[j].executed()) {
        out.deferred.push_back(cand.tx);
        continue;
      }
      ++out.stats.parallel_verdicts;
      if (assessed[j].verdict.malicious) {
        out.malicious.push_back({cand.tx, assessed[j].verdict, std::move(isolated[j])});
      } else {
        apply_effects(context, isolated[j]);
        out.benign.push_back(cand.tx);
      }
      continue;
    }

    if (budget_left == 0) {
      out.deferred.push_back(cand.tx);
      continue;
    }
    --budget_left;
    ++out.stats.contextual_sims;
    SimulationResult sim = execute_transaction(context, cand.tx, set.context);
    if (!sim.executed()) {
      out.deferred.push_back(cand.tx);
      continue;
    }
    ++out.stats.sequential_verdicts;
    Verdict verdict = cand.cleared ? Verdict{} : detector.assess(sim, context, invariants).verdict;
    if (verdict.malicious) {
      out.malicious.push_back({cand.tx, std::move(verdict), std::move(sim)});
    } else {
      context_writes.insert(sim.writes.begin(), sim.writes.end());
      context = std::move(sim.post_state);
      out.benign.push_back(cand.tx);
    }
  }
  return out;
}

}  // namespace sls
