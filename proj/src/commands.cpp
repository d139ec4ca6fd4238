// slsim: rollup sequencer simulator with transaction quarantine
// Copyright 2026 The slsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include "sls/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace sls {
namespace {

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  return static_cast<bool>(out);
}

}  // namespace

int cmd_run(const std::string& scenario_path, const std::string& report_path, const std::string& l1_out_path,
            std::optional<unsigned> workers, std::ostream& out, std::ostream& err) {
  auto text = read_file(scenario_path);
  if (!text) {
    err << "error: cannot read scenario " << scenario_path << "\n";
    return exit_code::scenario_error;
  }
  RunReport report;
  try {
    report = run(parse_scenario(*text), {workers, nullptr});
  } catch (const ScenarioError& e) {
    err << scenario_path << ":" << e.line() << ": error: " << e.reason() << "\n";
    return exit_code::scenario_error;
  }
  if (!write_file(report_path, write_report(report)) || !write_file(l1_out_path, write_l1_history(report.l1))) {
    err << "error: cannot write outputs\n";
    return exit_code::failure;
  }
  size_t txs = 0;
  for (const auto& b : report.blocks) txs += b.transactions.size();
  out << "blocks " << report.blocks.size() << " txs " << txs << " quarantined " << report.quarantine.size() << "\n";
  out << "final_state_root " << report.final_state_root.hex() << "\n";
  return exit_code::ok;
}

int cmd_derive(const std::string& l1_path, const std::optional<std::string>& expected_root, std::ostream& out,
               std::ostream& err) {
  auto text = read_file(l1_path);
  if (!text) {
    err << "error: cannot read " << l1_path << "\n";
    return exit_code::derivation_gap;
  }
  DerivedChain chain;
  try {
    chain = derive(read_l1_history(*text));
  } catch (const DerivationError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::derivation_gap;
  }
  out << "blocks " << chain.blocks.size() << "\n";
  out << "final_state_root " << chain.final_root.hex() << "\n";
  if (expected_root && *expected_root != chain.final_root.hex()) {
    err << "root mismatch: expected " << *expected_root << "\n";
    return exit_code::root_mismatch;
  }
  return exit_code::ok;
}

int cmd_quarantine(const std::string& report_path, const std::string& subcommand, const std::optional<std::string>& key,
                   std::ostream& out, std::ostream& err) {
  auto text = read_file(report_path);
  if (!text) {
    err << "error: cannot read report " << report_path << "\n";
    return exit_code::scenario_error;
  }
  std::vector<ReportEntry> entries;
  try {
    entries = read_report_quarantine(*text);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::scenario_error;
  }
  if (subcommand == "list") {
    for (const auto& e : entries) out << e.serial << " " << e.hash << " " << e.label << " " << e.state << "\n";
    return exit_code::ok;
  }
  if (subcommand == "show" && key) {
    for (const auto& e : entries) {
      if (e.hash != *key && e.label != *key && std::to_string(e.serial) != *key) continue;
      out << e.header << "\n";
      for (const auto& a : e.audit) out << "  " << a << "\n";
      return exit_code::ok;
    }
    err << "error: no quarantine entry " << *key << "\n";
    return exit_code::not_found;
  }
  err << "error: expected 'list' or 'show <hash>'\n";
  return exit_code::scenario_error;
}

}  // namespace sls
