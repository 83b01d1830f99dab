#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fgapprox/egroup.hpp"
#include "fgapprox/invmon.hpp"

namespace fgapprox {

enum ExitCode : int { exit_verified = 0, exit_check_failed = 1, exit_truncated = 2, exit_input_error = 3 };

enum class ReportFormat { text, json };

struct RunConfig {
  std::string command;
  std::filesystem::path input;
  std::size_t max_level = 0;
  Budget budget;
  std::size_t cycle_len = 2;
  std::size_t samples = 500;
  std::uint64_t seed = 0x5eed;
  bool lean = false;
  std::optional<std::filesystem::path> out;
  ReportFormat format = ReportFormat::text;
  // fcover
  std::optional<std::uint32_t> cyclic;
  std::vector<std::string> generators;  // for a group given as a table: element names or indices
  std::size_t max_q_order = 12;
  // diagnose-ce
  std::size_t level = 2;
  // check-monoid
  bool wagner_preston = false;
};

struct CommandResult {
  int exit_code = exit_verified;
  std::string report;   // JSON, schema "fgapprox-report" version 1
  std::string summary;  // human-readable
};

CommandResult cmd_tower(const RunConfig& config);
CommandResult cmd_fcover(const RunConfig& config);
CommandResult cmd_check_monoid(const RunConfig& config);
CommandResult cmd_diagnose_ce(const RunConfig& config);
// Dispatch on config.command; input errors become exit code 3 with the message in the report.
CommandResult run_command(const RunConfig& config);

// Q for fcover: --cyclic n, an egroup JSON file, or a monoid table that is a group.
std::shared_ptr<EGroup> load_q(const RunConfig& config);
// Regular representation of a group table, one letter per chosen generator (greedy when none are named).
std::shared_ptr<EGroup> group_from_table(const MonoidTable& table, const std::vector<std::string>& generators);

// Default element budget, overridable through FGAPPROX_BUDGET_ELEMENTS.
std::size_t default_element_budget();

}  // namespace fgapprox
