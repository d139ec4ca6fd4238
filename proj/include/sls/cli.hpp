// slsim: rollup sequencer simulator with transaction quarantine
// Copyright 2026 The slsim Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "sls/derivation.hpp"
#include "sls/sequencer.hpp"

#include <iosfwd>

namespace sls {

/// Parses the line-oriented scenario language. Throws ScenarioError.
Scenario parse_scenario(std::string_view text);

/// Parses one expression such as `(eq (sload "paused") 0)`. Names resolve
/// through `names` (name without the leading @).
Expr parse_expression(std::string_view text, const std::map<std::string, Address>& names = {});

std::string write_report(const RunReport& report);

/// One quarantine entry as recorded in a report file.
struct ReportEntry {
  uint64_t serial = 0;
  std::string hash;
  std::string label;
  std::string state;
  std::string header;              // the full entry line
  std::vector<std::string> audit;  // audit lines, in order
};

/// Extracts the quarantine section of a report. Throws std::runtime_error on
/// a file that is not a report.
std::vector<ReportEntry> read_report_quarantine(std::string_view text);

std::string write_l1_history(const L1History& history);

/// Throws DerivationError(gap) when the file is truncated or malformed.
L1History read_l1_history(std::string_view text);

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int scenario_error = 2;
inline constexpr int root_mismatch = 3;
inline constexpr int derivation_gap = 4;
inline constexpr int not_found = 5;
}  // namespace exit_code

int cmd_run(const std::string& scenario_path, const std::string& report_path, const std::string& l1_out_path,
            std::optional<unsigned> workers, std::ostream& out, std::ostream& err);
int cmd_derive(const std::string& l1_path, const std::optional<std::string>& expected_root, std::ostream& out,
               std::ostream& err);
/// `subcommand` is "list" or "show"; `key` selects an entry by hash, label or serial.
int cmd_quarantine(const std::string& report_path, const std::string& subcommand, const std::optional<std::string>& key,
                   std::ostream& out, std::ostream& err);

}  // namespace sls
