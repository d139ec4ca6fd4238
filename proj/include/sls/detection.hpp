// slsim: rollup sequencer simulator with transaction quarantine
// Copyright 2026 The slsim Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "sls/vm.hpp"

namespace sls {

/// A predicate a contract admin expects to hold after every transaction that
/// touches the contract. SELF is bound to the contract, CALLER and CALLVALUE
/// to the transaction under test.
struct Invariant {
  std::string id;
  Address contract;
  Expr predicate;
  Address registered_by;
};

class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvariantSet {
 public:
  /// Throws InvariantError unless `inv.registered_by` administers the contract in `state`.
  void add(Invariant inv, const WorldState& state);

  std::span<const Invariant> all() const { return invariants_; }
  bool empty() const { return invariants_.empty(); }
  bool covers(const Address& contract) const;

 private:
  std::vector<Invariant> invariants_;
};

struct Verdict {
  bool malicious = false;
  std::vector<std::string> violated;  // invariant ids
  std::vector<Address> victims;       // sorted, unique
  u128 damage_estimate = 0;           // sum over victims of balance lost

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

/// A verdict plus every state location the detector looked at while forming it.
struct Assessment {
  Verdict verdict;
  AccessSet observed;
};

class Detector {
 public:
  virtual ~Detector() = default;
  virtual Assessment assess(const SimulationResult& sim, const WorldState& pre_state,
                            const InvariantSet& invariants) const = 0;
};

/// Flags a transaction when any invariant of a contract it wrote to fails on
/// the post-state. Reverted and unexecuted simulations are benign.
class InvariantDetector final : public Detector {
 public:
  Assessment assess(const SimulationResult& sim, const WorldState& pre_state,
                    const InvariantSet& invariants) const override;
};

Verdict detect(const Detector& detector, const SimulationResult& sim, const WorldState& pre_state,
               const InvariantSet& invariants);

using DependencyEdge = std::pair<size_t, size_t>;

/// Edges (i, j), i < j, with writes[i] ∩ reads[j] non-empty, in lexicographic order.
std::vector<DependencyEdge> dependency_edges(std::span<const AccessSet> writes, std::span<const AccessSet> reads);
std::vector<DependencyEdge> dependency_edges(std::span<const SimulationResult> results);

struct Candidate {
  Transaction tx;
  bool cleared = false;  // skip the detector (released duplicate); still simulated
};

struct CandidateSet {
  std::vector<Candidate> txs;  // intended inclusion order
  WorldState tip_state;
  BlockContext context;
  std::optional<size_t> budget;  // sequential simulations allowed; nullopt = unlimited
};

struct FlaggedTransaction {
  Transaction tx;
  Verdict verdict;
  SimulationResult sim;
};

struct DetectionStats {
  size_t isolated_sims = 0;
  size_t contextual_sims = 0;
  size_t parallel_verdicts = 0;
  size_t sequential_verdicts = 0;
};

struct DetectionOutcome {
  std::vector<Transaction> benign;  // candidate order preserved
  std::vector<FlaggedTransaction> malicious;
  std::vector<Transaction> deferred;
  DetectionStats stats;
};

/// Hybrid parallel-sequential detection.
///
/// Every candidate is simulated on the tip state (concurrently across
/// `workers`). A candidate is dependent when an earlier candidate's writes
/// meet its reads, where reads include the locations the detector observed.
/// Independent candidates take the verdict of their isolated simulation.
/// Dependent candidates are re-simulated in order on the tip state plus the
/// effects of the benign candidates before them, one unit of budget each;
/// once the budget is spent the remaining dependent candidates are deferred.
/// Candidates that cannot execute are deferred as well. Any write made by a
/// contextual simulation also makes later readers of that location dependent.
///
/// The outcome does not depend on `workers`.
DetectionOutcome hybrid_detect(const CandidateSet& set, const InvariantSet& invariants, const Detector& detector,
                               unsigned workers = 1);

}  // namespace sls
