#pragma once

#include "chang/complex.hpp"

#include <map>
#include <string>
#include <vector>

namespace chang {

// One decision taken while splitting a smash product.
struct Branch {
    std::string rule;
    Elementary left;
    Elementary right;
};

struct SmashResult {
    Wedge wedge;
    std::vector<Branch> branches;
};

// Homotopy type of a ^ b. The second member is the rule that decided the pair.
// Every answer is checked against Künneth before it is returned.
std::pair<Wedge, std::string> decompose_pair(const Elementary& a, const Elementary& b);
std::pair<Wedge, std::vector<Branch>> decompose_pair_traced(const Elementary& a, const Elementary& b);

// Distributes over wedge summands. Atoms may only be smashed with spheres or points;
// anything else raises UnclassifiedPair.
SmashResult smash_decompose(const Wedge& x, const Wedge& y);

bool is_indecomposable_pair(const Elementary& a, const Elementary& b);

// Every rule id the table can emit.
const std::vector<std::string>& rule_ids();

// Sphere, Moore and Chang pieces at base dimension with exponents 1..max_exponent;
// Moore spaces for each listed prime.
std::vector<Elementary> base_pieces(int max_exponent = 3, const std::vector<int>& primes = {2, 3, 5});

// How often each rule id fires over all ordered pairs of the given pieces and the point
// (ids that never fire are present with count 0).
std::map<std::string, int> branch_coverage(const std::vector<Elementary>& pieces);

}  // namespace chang
