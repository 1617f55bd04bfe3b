#pragma once

// CohFT descriptors: metric, unit, homogeneity data, the genus-0 potential and tables
// of intersection coefficients, loaded from JSON documents or taken from the builtins,
// and the assembly of the DR Hamiltonians g_{a,d} from them.

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "drham/number.hpp"
#include "drham/ring.hpp"
#include "drham/varcalc.hpp"

namespace drham {

/// Key of one table entry. Points are (alpha_i, b_i) pairs, kept sorted so that the
/// key is invariant under permutation. Field indices are 0-based here and 1-based in files.
struct TableKey {
    int genus = 0;
    int alpha = 0;
    int d = 0;
    std::vector<std::pair<int, int>> points;

    auto operator<=>(const TableKey&) const = default;
};

struct IntersectionTable {
    int genus_max = 0; ///< highest genus with entries supplied
    int d_max = 0;     ///< highest psi power covered at positive genus
    std::map<TableKey, Rational> entries;
};

struct CohFTDescriptor {
    std::string name;
    int n = 1;
    RationalMatrix eta;
    RationalMatrix eta_inv;
    std::vector<Rational> unit;
    HomogeneityData hom;
    std::string f0_text;
    IntersectionTable tables;
    std::map<std::string, std::string> metadata;
    bool require_unit_first = true;

    /// A_{ab} = c_{0,3}(e_a, e_b, r)
    RationalMatrix a_lower;
    /// A^b_a stored at (b, a)
    RationalMatrix a_upper;

    /// The genus-0 potential under a truncation policy (u0 cap applies).
    DiffPoly f0(TruncationPolicy policy) const;
};

/// Parses and validates a descriptor document. `origin` names the source in messages.
CohFTDescriptor load_descriptor(std::string_view text, const std::string& origin = "<text>");
CohFTDescriptor load_descriptor_file(const std::string& path);
/// Builtin name, then a file path, then a file under each DRHAM_COHFT_PATH entry
/// (with or without a `.json` suffix).
CohFTDescriptor resolve_descriptor(const std::string& spec);
CohFTDescriptor builtin_descriptor(const std::string& name);
std::vector<std::string> builtin_names();

/// Canonical JSON text; load_descriptor(to_json(d)) reproduces d.
std::string to_json(const CohFTDescriptor& d);

/// Checks every invariant and fills eta_inv, a_lower, a_upper. Throws ValidationError.
void validate(CohFTDescriptor& d);

/// c^m_{ab}(u) = eta^{mn} d^3 F0 / du^n du^a du^b, indexed [m][a * n + b].
std::vector<std::vector<DiffPoly>> structure_constants(const CohFTDescriptor& d, TruncationPolicy policy);

/// Genus-0 densities theta_{a,d}(u_0) for d >= -1 from theta_{a,-1} = eta_{an} u^n and
/// d_b d_c theta_{a,d+1} = c^m_{bc} d_m theta_{a,d}; throws IntegrabilityFailure.
DiffPoly genus0_density(const CohFTDescriptor& d, int alpha, int deg, TruncationPolicy policy);

/// The density of g_{a,d} assembled from the tables (genus 0 from F0). d = -1 gives
/// eta_{an} u^n. Throws TableGap when the truncation needs data the tables lack.
DiffPoly g_density(const CohFTDescriptor& d, int alpha, int deg, TruncationPolicy policy);
LocalFunctional build_g(const CohFTDescriptor& d, int alpha, int deg, TruncationPolicy policy);

} // namespace drham
