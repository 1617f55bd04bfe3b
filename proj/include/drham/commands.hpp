#pragma once

// The three CLI commands as library calls: each renders its document into `out` and
// returns the process exit status.

#include <string>

#include "drham/report.hpp"

namespace drham {

constexpr int kExitOk = 0;
constexpr int kExitFailedChecks = 1;
constexpr int kExitError = 3;

/// Descriptor checks (check_names) plus the seeded suites `lemma_s2` and
/// `singular_subgroup`, which only run when named.
const std::vector<std::string>& selectable_checks();

/// Instances per seeded suite run from the command line.
constexpr int kSuiteInstances = 50;

int cmd_check(const RunConfig& config, std::string& out);
int cmd_export(const RunConfig& config, const std::string& object, std::string& out);
int cmd_describe(const RunConfig& config, std::string& out);

} // namespace drham
