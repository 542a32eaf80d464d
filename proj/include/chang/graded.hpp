#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace chang {

// A finitely generated abelian group as a sorted list of cyclic orders.
// 0 stands for Z; finite orders are prime powers, so the list is the primary decomposition.
using CyclicList = std::vector<std::int64_t>;

// Splits Z/n into prime-power factors; n = 0 yields Z, n = 1 yields nothing.
CyclicList primary_parts(std::int64_t n);
CyclicList normalize(CyclicList g);
// Group order, 0 when infinite.
std::int64_t group_order(const CyclicList& g);
std::string group_to_string(const CyclicList& g);

struct GradedGroup {
    std::map<int, CyclicList> degrees;

    void add(int degree, std::int64_t cyclic_order);
    GradedGroup shifted(int by) const;
    GradedGroup& operator+=(const GradedGroup& other);
    bool operator==(const GradedGroup& other) const = default;
};

std::string to_string(const GradedGroup& g);

// Integral Künneth for smash products of finite complexes.
GradedGroup kunneth(const GradedGroup& a, const GradedGroup& b);

}  // namespace chang
