// slsim: rollup sequencer simulator with transaction quarantine
// Copyright 2026 The slsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include "../support/fixtures.hpp"

#include <chrono>
#include <iostream>
#include <sstream>

using namespace sls;
using namespace sls::testing;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream why;

  template <class T>
  Check& fail(const T& msg) {
    if (ok) why << msg;
    ok = false;
    return *this;
  }
  void expect(bool cond, const std::string& msg) {
    if (!cond) fail(msg);
  }
};

int failures = 0;

void report(int n, const std::string& name, const std::function<std::string(Check&)>& body) {
  Check c;
  std::string detail;
  const auto start = std::chrono::steady_clock::now();
  try {
    detail = body(c);
  } catch (const std::exception& e) {
    c.fail(std::string("exception: ") + e.what());
  }
  const auto ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  if (!c.ok) ++failures;
  std::cout << (c.ok ? "PASS" : "FAIL") << " criterion " << n << ": " << name << " ("
            << (c.ok ? detail : c.why.str()) << ", " << ms << " ms)" << std::endl;
}

std::string scenario_name(const std::filesystem::path& p) {
  return p.stem().string();
}

std::vector<std::string> audit_of(const RunReport& r, const std::string& label) {
  const std::string text = write_report(r);
  for (const auto& e : read_report_quarantine(text))
    if (e.label == label) return e.audit;
  return {};
}

bool included(const RunReport& r, const std::string& label, uint64_t* block = nullptr) {
  for (const auto& b : r.blocks)
    for (const auto& tx : b.transactions) {
      auto it = r.labels.find(tx_hash(tx));
      if (it != r.labels.end() && it->second == label) {
        if (block) *block = b.number;
        return true;
      }
    }
  return false;
}

std::string join(const std::vector<std::string>& lines) {
  std::string s;
  for (const auto& l : lines) s += l + " | ";
  return s;
}

std::string pause_exploit(Check& c) {
  PauseFixture f;
  InvariantDetector detector;

  auto a = hybrid_detect(f.candidates({f.drain}), f.invariants, detector);
  c.expect(a.benign.size() == 1 && a.malicious.empty() && a.deferred.empty(), "(a) B alone is not benign");
  c.expect(!a.benign.empty() && tx_hash(a.benign[0]) == tx_hash(f.drain), "(a) benign tx is not B");

  auto b = hybrid_detect(f.candidates({f.unpause, f.drain}), f.invariants, detector);
  c.expect(b.benign.size() == 1 && tx_hash(b.benign[0]) == tx_hash(f.unpause), "(b) A is not the only benign tx");
  c.expect(b.malicious.size() == 1, "(b) expected exactly one malicious tx");
  if (b.malicious.size() == 1) {
    const auto& m = b.malicious[0];
    c.expect(tx_hash(m.tx) == tx_hash(f.drain), "(b) flagged tx is not B");
    c.expect(m.verdict.victims == std::vector<Address>{f.contract}, "(b) victims != {P}");
    c.expect(m.verdict.damage_estimate == PauseFixture::contract_balance, "(b) damage != P balance");
    c.expect(m.verdict.violated == std::vector<std::string>{"solvent"}, "(b) violated != {solvent}");
  }

  // Same fixture through the sequencer: B quarantined, A included.
  RunReport r = run(load_scenario(scenario_dir() / "pause_exploit.slsim"));
  c.expect(r.quarantine.size() == 1 && r.labels.at(r.quarantine[0].hash) == "B", "scenario: B not quarantined");
  c.expect(included(r, "A") && !included(r, "B"), "scenario: inclusion mismatch");
  return "(a) B benign; (b) A benign, B malicious victims={P} damage=1000";
}

std::string oracle_equivalence(Check& c) {
  std::mt19937_64 rng(20260101);
  InvariantDetector detector;
  const size_t cases = 2000;
  size_t with_malicious = 0, with_contextual = 0, with_deferred = 0;
  for (size_t i = 0; i < cases && c.ok; ++i) {
    GeneratedCase g = generate_case(rng);
    g.set.budget.reset();
    const OracleOutcome expected = sequential_oracle(g.set, g.invariants, detector);
    for (unsigned workers : {1u, 4u}) {
      DetectionOutcome got = hybrid_detect(g.set, g.invariants, detector, workers);
      if (!(summarize(got) == expected)) {
        c.fail("mismatch on case " + std::to_string(i) + " workers=" + std::to_string(workers));
        break;
      }
      if (workers == 1) {
        with_contextual += got.stats.contextual_sims > 0;
        with_malicious += !got.malicious.empty();
        with_deferred += !got.deferred.empty();
      }
    }
  }
  c.expect(with_malicious > cases / 10 && with_contextual > cases / 10, "generator too weak");
  return std::to_string(cases) + " sets, 0 mismatches; " + std::to_string(with_malicious) + " with malicious, " +
         std::to_string(with_contextual) + " with contextual re-simulation, " + std::to_string(with_deferred) +
         " with deferred";
}

std::string derivation_round_trip(Check& c) {
  const auto files = corpus();
  c.expect(files.size() >= 20, "corpus has fewer than 20 scenarios");
  for (const auto& p : files) {
    RunReport r = run(load_scenario(p));
    DerivedChain d = derive(read_l1_history(write_l1_history(r.l1)));
    if (d.blocks != r.blocks) c.fail(scenario_name(p) + ": block sequence differs");
    if (d.final_root != r.final_state_root) c.fail(scenario_name(p) + ": final root differs");
    if (d.blocks.size() != r.blocks.size()) c.fail(scenario_name(p) + ": block count differs");
    for (size_t i = 0; i < d.blocks.size() && i < r.blocks.size(); ++i)
      if (encode_block(d.blocks[i]) != encode_block(r.blocks[i])) c.fail(scenario_name(p) + ": block bytes differ");
  }
  return std::to_string(files.size()) + " scenarios derived byte-identically";
}

Scenario dos_scenario(bool with_malicious) {
  Scenario s;
  s.blocks = 100;
  s.quarantine.time_criterion_period = 1'000'000;
  s.pool.max_pending = 4096;
  s.sequencer.detection_budget = 16;

  const Address admin = address_from_name("admin");
  const Address vault = address_from_name("vault");
  s.genesis.set_balance(admin, 1'000'000);
  ContractCode code;
  code.admin = admin;
  code.fallback = {Statement::set(Expr::caller(), Expr::constant(Word{1}))};
  s.genesis.set_code(vault, code);
  s.invariants.add({"untouched", vault, Expr::binary(Expr::Op::eq, Expr::sload(Expr::caller()), Expr::constant(Word{0})),
                    admin},
                   s.genesis);

  std::vector<Address> attackers;
  for (int i = 0; i < 1000; ++i) {
    attackers.push_back(address_from_name("attacker" + std::to_string(i)));
    s.genesis.set_balance(attackers.back(), 10'000);
  }
  const std::array<Address, 3> users{address_from_name("u0"), address_from_name("u1"), address_from_name("u2")};
  for (const auto& u : users) s.genesis.set_balance(u, 1'000'000);

  if (with_malicious)
    for (size_t i = 0; i < attackers.size(); ++i) {
      SignedTransaction tx = transfer(attackers[i], 0, vault, 0, 10, 1 + i % 7);
      s.events.push_back({0, 0, event::Submit{"m" + std::to_string(i), tx}});
    }
  for (uint64_t k = 0; k < 100; ++k) {
    const Address& from = users[k % 3];
    const Address& to = users[(k + 1) % 3];
    SignedTransaction tx = transfer(from, k / 3, to, 1 + k, 10, 2);
    s.events.push_back({2 * k + 1, 0, event::Submit{"b" + std::to_string(k), tx}});
  }
  return s;
}

std::string dos_property(Check& c) {
  size_t min_active = SIZE_MAX;
  RunOptions opts;
  opts.after_block = [&](const Sequencer& seq) { min_active = std::min(min_active, seq.quarantine().active_count()); };
  RunReport with = run(dos_scenario(true), opts);
  RunReport without = run(dos_scenario(false));

  c.expect(with.counters.maintenance_sims == 0, "maintenance_sims != 0");
  c.expect(with.quarantine.size() == 1000, "expected 1000 quarantine entries");
  c.expect(min_active == 1000, "quarantine did not hold 1000 entries across every block");
  c.expect(with.blocks.size() == 100 && without.blocks.size() == 100, "expected 100 blocks");
  size_t benign = 0;
  for (size_t i = 0; i < with.blocks.size() && i < without.blocks.size(); ++i) {
    if (encode_block(with.blocks[i]) != encode_block(without.blocks[i]))
      c.fail("block " + std::to_string(i) + " differs");
    benign += with.blocks[i].transactions.size();
  }
  c.expect(benign == 100, "not every benign tx was included");
  return "1000 held for 100 blocks, maintenance_sims=0, " + std::to_string(benign) +
         " benign txs in byte-identical blocks";
}

std::string quarantine_criteria(Check& c) {
  auto expect_trail = [&](const std::string& scenario, const std::string& label,
                          const std::vector<std::string>& expected) {
    RunReport r = run(load_scenario(scenario_dir() / (scenario + ".slsim")));
    const auto got = audit_of(r, label);
    if (got != expected) c.fail(scenario + ": audit trail was " + join(got));
    return r;
  };

  // Nonce retirement: the replacement B2 is included and B retires.
  {
    RunReport r = expect_trail("nonce_retirement", "B",
                               {"audit t=2 block=0 ADMITTED actor=-",
                                "audit t=3 block=1 REPLACED actor=@attacker "
                                "357d0afbb3945f0bd284f1371f7cfd3d8760743ad761d1bac4048bcfad6d6955",
                                "audit t=4 block=1 RETIRED_NONCE actor=-"});
    uint64_t at = 0;
    c.expect(included(r, "B2", &at) && at == 1, "nonce_retirement: B2 not included in block 1");
  }
  // Time release at exactly admission + period (2 + 100), then inclusion.
  {
    RunReport r = expect_trail("time_release", "B",
                               {"audit t=2 block=0 ADMITTED actor=-", "audit t=102 block=2 RELEASED_TIME actor=-"});
    uint64_t at = 0;
    c.expect(included(r, "B", &at) && at == 3, "time_release: B not included in block 3");
    c.expect(r.blocks.size() > 1 && r.blocks[1].timestamp == 100, "time_release: block 1 should be at t=100");
  }
  // Failure release: still succeeds while unpaused, reverts after the re-pause.
  {
    RunReport r = expect_trail("failure_release", "B",
                               {"audit t=2 block=0 ADMITTED actor=-", "audit t=3 block=1 STILL_HELD actor=- SUCCESS",
                                "audit t=5 block=2 RELEASED_FAILURE actor=- REVERT"});
    c.expect(included(r, "R"), "failure_release: re-pause not included");
  }
  // Administrative: every victim admin must approve.
  expect_trail("admin_victims_release", "B",
               {"audit t=2 block=0 ADMITTED actor=-", "audit t=3 block=1 APPROVAL actor=@admin",
                "audit t=3 block=1 PENDING_APPROVALS actor=- 1a000945432e83e1551e6f721ee9c00b8cc33260",
                "audit t=5 block=2 APPROVAL actor=@qadmin",
                "audit t=5 block=2 RELEASED_ADMINISTRATIVE actor=@qadmin victim admins"});
  // Administrative: an operator overrides, a non-admin is refused.
  {
    RunReport r = expect_trail("admin_operator_release", "B",
                               {"audit t=2 block=0 ADMITTED actor=-",
                                "audit t=3 block=1 RELEASED_ADMINISTRATIVE actor=@ops operator"});
    bool refused = false;
    for (const auto& e : r.events) refused |= e.text == "approve B by @attacker NOT_AUTHORIZED";
    c.expect(refused, "admin_operator_release: non-admin approval not refused");
  }
  // Economic: stake == damage holds, damage + 1 releases.
  expect_trail("economic_release", "B",
               {"audit t=2 block=0 ADMITTED actor=-",
                "audit t=3 block=1 INSUFFICIENT_COLLATERAL actor=@attacker stake=0 needed>1000",
                "audit t=3 block=1 INSUFFICIENT_COLLATERAL actor=@attacker stake=1000 needed>1000",
                "audit t=5 block=2 RELEASED_ECONOMIC actor=@attacker locked=1000"});
  return "nonce, time, failure, administrative (unanimity, operator), economic (1000 held, 1001 released)";
}

std::string deposit_permanence(Check& c) {
  size_t refused = 0, accepted = 0, blocks_checked = 0, scenarios = 0;
  for (const auto& p : corpus()) {
    RunOptions opts;
    opts.after_block = [&](const Sequencer& seq) {
      ++blocks_checked;
      if (auto err = check_conservation(seq.l1(), seq.minted())) c.fail(scenario_name(p) + ": " + *err);
    };
    RunReport r = run(load_scenario(p), opts);
    ++scenarios;
    std::map<DepositId, int> on_l2;
    for (const auto& b : r.blocks)
      for (const auto& d : b.deposits) ++on_l2[d.id()];
    for (const auto& [id, e] : r.escrow) {
      if (e.status == EscrowStatus::accepted) {
        ++accepted;
        if (on_l2[id] != 1) c.fail(scenario_name(p) + ": accepted deposit not minted exactly once");
      } else {
        refused += e.status == EscrowStatus::refused || e.status == EscrowStatus::refunded;
        if (on_l2[id] != 0) c.fail(scenario_name(p) + ": refused deposit appears on L2");
      }
    }
  }

  // Escape hatch on a refused deposit: paid once, never again.
  RunReport r = run(load_scenario(scenario_dir() / "refused_deposit.slsim"));
  std::vector<std::string> escapes;
  bool accepted_stays = false;
  for (const auto& e : r.events) {
    if (e.text.starts_with("escape_withdraw d1 ")) escapes.push_back(e.text);
    accepted_stays |= e.text == "escape_withdraw d0 NOT_ELIGIBLE(ALREADY_ACCEPTED)";
  }
  c.expect(accepted_stays, "refused_deposit: accepted deposit d0 escaped");
  c.expect(escapes == std::vector<std::string>{"escape_withdraw d1 REFUNDED value=25",
                                               "escape_withdraw d1 NOT_ELIGIBLE(ALREADY_REFUNDED)"},
           "refused_deposit: escape trail was " + join(escapes));
  bool quarantined_deposit = false;
  for (const auto& e : r.quarantine) quarantined_deposit |= e.is_deposit && e.state == EntryState::active;
  c.expect(quarantined_deposit, "refused_deposit: deposit entry not held");
  c.expect(refused > 0 && accepted > 0, "corpus lacks refused or accepted deposits");
  return std::to_string(refused) + " refused and " + std::to_string(accepted) + " accepted deposits over " +
         std::to_string(scenarios) + " scenarios; conservation held at " + std::to_string(blocks_checked) +
         " blocks; one refund";
}

std::string bitmap_codec(Check& c) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 10000 && c.ok; ++i) {
    std::vector<bool> flags(rng() % 1025);
    const unsigned density = rng() % 101;
    for (size_t k = 0; k < flags.size(); ++k) flags[k] = rng() % 100 < density;
    const auto words = encode_bitmap(flags);
    const auto ref = reference_bitmap(flags);
    if (words.size() != ref.size()) c.fail("word count differs at vector " + std::to_string(i));
    for (size_t w = 0; w < words.size() && w < ref.size(); ++w)
      if (words[w].to_bytes() != ref[w]) c.fail("word bytes differ at vector " + std::to_string(i));
    if (decode_bitmap(words, flags.size()) != flags) c.fail("round trip failed at vector " + std::to_string(i));
  }
  const auto five = encode_bitmap({true, false, true});
  c.expect(five.size() == 1 && five[0] == Word{5}, "[1,0,1] is not the word 5");
  c.expect(encode_bitmap(std::vector<bool>(257, true)).size() == 2, "257 flags do not take 2 words");
  return "10000 random vectors up to 1024 flags; [1,0,1] = 5; 257 flags = 2 words";
}

std::string duplicate_pass_through(Check& c) {
  RunReport r = run(load_scenario(scenario_dir() / "duplicate_passthrough.slsim"));
  c.expect(r.quarantine.size() == 1, "resubmission created a new quarantine entry");
  const auto trail = audit_of(r, "B");
  c.expect(trail == std::vector<std::string>{"audit t=2 block=0 ADMITTED actor=-",
                                             "audit t=3 block=1 RELEASED_ADMINISTRATIVE actor=@ops operator"},
           "audit trail was " + join(trail));
  uint64_t at = 0;
  c.expect(included(r, "B2", &at), "resubmitted B2 not included");
  c.expect(!included(r, "B"), "underpriced original was included");
  for (const auto& b : r.blocks)
    if (b.number == at) c.expect(b.base_fee == 20, "B2 not included under the raised base fee");
  return "released B resubmitted as B2 (max_fee 30) included in block " + std::to_string(at) + ", 0 new entries";
}

std::string determinism(Check& c) {
  size_t n = 0;
  for (const auto& p : corpus()) {
    const Scenario s = load_scenario(p);
    std::string reference;
    for (unsigned workers : {1u, 2u, 8u}) {
      RunReport r = run(s, {workers, nullptr});
      const std::string text = write_report(r) + write_l1_history(r.l1);
      if (workers == 1) reference = text;
      else if (text != reference) c.fail(scenario_name(p) + ": report differs with " + std::to_string(workers) + " workers");
    }
    ++n;
  }
  return std::to_string(n) + " scenarios, reports identical for 1, 2 and 8 workers";
}

}  // namespace

int main() {
  report(1, "pause exploit reproduction", pause_exploit);
  report(2, "hybrid detection matches sequential oracle", oracle_equivalence);
  report(3, "derivation round trip", derivation_round_trip);
  report(4, "quarantine maintenance never simulates", dos_property);
  report(5, "quarantine criteria audit trails", quarantine_criteria);
  report(6, "deposit permanence and escape hatch", deposit_permanence);
  report(7, "bitmap codec", bitmap_codec);
  report(8, "duplicate pass-through", duplicate_pass_through);
  report(9, "determinism under parallel detection", determinism);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
