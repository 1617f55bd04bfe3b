#pragma once

#include <string>
#include <vector>

namespace drham {

/// Outcome of one identity check. Failures carry the lowest failing eps order, the
/// place where it failed (matrix entry, index pair, ...) and a witness expression.
struct Verdict {
    std::string check;
    std::string descriptor;
    std::string subject;
    bool ok = true;
    int epsilon_order = -1;
    std::string entry;
    std::string witness;
};

inline bool all_ok(const std::vector<Verdict>& verdicts)
{
    for (const auto& v : verdicts)
        if (!v.ok) return false;
    return true;
}

} // namespace drham
