#pragma once

// Rendering of check reports, descriptor summaries and exported objects as text,
// JSON ("drham-report/1", "drham-export/1", "drham-describe/1") or LaTeX.

#include <cstdint>
#include <exception>
#include <set>
#include <string>
#include <vector>

#include "drham/cohft.hpp"
#include "drham/hierarchy.hpp"
#include "drham/verdict.hpp"

namespace drham {

enum class OutputFormat { text, json, latex };

OutputFormat parse_format(const std::string& name);

struct RunConfig {
    std::string cohft = "trivial_kdv";
    int genus_cap = 1;
    int u0_cap = 6;
    int d_max = 2;
    std::set<std::string> checks{"all"};
    OutputFormat output = OutputFormat::text;
    std::uint64_t seed = 1;

    TruncationPolicy policy() const { return {genus_cap, u0_cap}; }
};

std::string render_check(const RunConfig& config, const std::string& descriptor, const std::vector<Verdict>& verdicts);
std::string render_error(const RunConfig& config, const std::string& command, const std::exception& error);
std::string render_describe(const RunConfig& config, const CohFTDescriptor& d);

/// Objects: gbar, kdr, kdr_alt, k2_genus0, descriptor, hamiltonian(a,d) with 1-based a.
/// Throws ParseError for anything else.
std::string render_export(const RunConfig& config, const HierarchyBundle& bundle, const std::string& object);

/// Escapes a plain string for use inside \texttt{...}.
std::string latex_escape(const std::string& s);

} // namespace drham
