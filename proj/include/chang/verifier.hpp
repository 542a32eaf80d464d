#pragma once

#include "chang/complex.hpp"
#include "chang/graded.hpp"
#include "chang/steenrod.hpp"

#include <map>
#include <string>
#include <vector>

namespace chang {

bool graded_iso(const GradedGroup& a, const GradedGroup& b);

// Degree-wise dimensions and ranks of Sq^1, Sq^2, Sq^4, Sq^1Sq^2, Sq^2Sq^1, Sq^2Sq^2, keyed "Sq2Sq1@7".
std::map<std::string, int> sq_invariants(const SqModule& m);

enum class IsoSearch { Found, NotFound, Skipped };
const char* to_string(IsoSearch s);

struct SqComparison {
    bool invariants_equal = false;
    IsoSearch search = IsoSearch::Skipped;
    // Isomorphic only when invariants match and the search found a witness.
    bool isomorphic() const { return invariants_equal && search == IsoSearch::Found; }
};

// Searches degree-wise invertible maps commuting with Sq^1, Sq^2, Sq^4 when the total
// search space sum(dim^2) is at most search_budget_bits; otherwise reports Skipped.
SqComparison sq_module_compare(const SqModule& a, const SqModule& b, int search_budget_bits = 24);

struct ObstructionReport {
    int bottom = 0;
    int top = 0;
    // The splitting criterion for a wedge of two Moore spaces needs one class at each end,
    // Sq^4 between them, and the Sq^2 pattern in the degrees top-2 and bottom+2.
    bool applicable = false;
    bool ends_linked_by_sq4 = false;
    bool two_classes_hit_top = false;
    bool sq2_from_bottom_splits = false;
    bool criterion_holds() const { return applicable && ends_linked_by_sq4 && two_classes_hit_top && sq2_from_bottom_splits; }
    // Sq^2 : H^{bottom+1} -> H^{bottom+3} is an isomorphism.
    bool middle_sq2_iso = false;
    // Degrees d for which a 2-primary Moore summand with cells d, d+1 is impossible.
    std::vector<int> excluded_moore;
    std::vector<std::string> notes;
};

ObstructionReport moore_split_obstruction(const SqModule& m, int bottom, int top);

struct VerificationReport {
    bool homology_match = false;
    bool mod2_match = false;
    bool sq_invariants_match = false;
    IsoSearch sq_iso = IsoSearch::Skipped;
    std::vector<std::string> obstruction_notes;
    bool ok() const { return homology_match && mod2_match && sq_invariants_match && sq_iso != IsoSearch::NotFound; }
};

// Checks W against the smash X ^ Y through homology, mod-2 cohomology and Sq invariants.
VerificationReport check_decomposition(const Wedge& x, const Wedge& y, const Wedge& w);

}  // namespace chang
