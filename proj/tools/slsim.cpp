// slsim: rollup sequencer simulator with transaction quarantine
// Copyright 2026 The slsim Authors.
// SPDX-License-Identifier: Apache-2.0

#include "sls/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"slsim: rollup sequencer simulator with transaction quarantine"};
  app.require_subcommand(1);

  std::string scenario, report, l1_out;
  std::optional<unsigned> workers;
  uint64_t seed = 0;
  auto* run = app.add_subcommand("run", "execute a scenario, write the report and the L1 history");
  run->add_option("--scenario", scenario, "scenario file")->required();
  run->add_option("--report", report, "report output path")->required();
  run->add_option("--l1-out", l1_out, "L1 history output path")->required();
  run->add_option("--workers", workers, "detection worker threads");
  run->add_option("--seed", seed, "accepted for compatibility; the pipeline uses no randomness");

  std::string l1_in;
  std::optional<std::string> expect_root;
  auto* derive = app.add_subcommand("derive", "rebuild the L2 chain from an L1 history");
  derive->add_option("--l1", l1_in, "L1 history file")->required();
  derive->add_option("--expect-root", expect_root, "expected final state root (hex)");

  std::string report_in, sub;
  std::optional<std::string> key;
  auto* quarantine = app.add_subcommand("quarantine", "inspect the quarantine audit trail of a report");
  quarantine->add_option("report", report_in, "report file")->required();
  quarantine->add_option("command", sub, "list | show")->required()->check(CLI::IsMember({"list", "show"}));
  quarantine->add_option("key", key, "entry hash, label or serial");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : sls::exit_code::scenario_error;
  }

  try {
    if (*run) return sls::cmd_run(scenario, report, l1_out, workers, std::cout, std::cerr);
    if (*derive) return sls::cmd_derive(l1_in, expect_root, std::cout, std::cerr);
    return sls::cmd_quarantine(report_in, sub, key, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << "\n";
    return sls::exit_code::failure;
  }
}
