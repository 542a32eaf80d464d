#include "chang/graded.hpp"

#include <algorithm>
#include <numeric>

namespace chang {

CyclicList primary_parts(std::int64_t n) {
    if (n < 0) n = -n;
    if (n == 0) return {0};
    CyclicList out;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        std::int64_t q = 1;
        while (n % p == 0) {
            n /= p;
            q *= p;
        }
        if (q > 1) out.push_back(q);
    }
    if (n > 1) out.push_back(n);
    return out;
}

CyclicList normalize(CyclicList g) {
    CyclicList out;
    for (auto n : g)
        for (auto q : primary_parts(n)) out.push_back(q);
    std::sort(out.begin(), out.end());
    return out;
}

std::int64_t group_order(const CyclicList& g) {
    std::int64_t n = 1;
    for (auto c : g) {
        if (c == 0) return 0;
        n *= c;
    }
    return n;
}

std::string group_to_string(const CyclicList& g) {
    if (g.empty()) return "0";
    std::string out;
    for (auto c : g) {
        if (!out.empty()) out += " + ";
        out += c == 0 ? "Z" : "Z/" + std::to_string(c);
    }
    return out;
}

void GradedGroup::add(int degree, std::int64_t cyclic_order) {
    auto parts = primary_parts(cyclic_order);
    if (parts.empty()) return;
    auto& slot = degrees[degree];
    slot.insert(slot.end(), parts.begin(), parts.end());
    std::sort(slot.begin(), slot.end());
}

GradedGroup GradedGroup::shifted(int by) const {
    GradedGroup out;
    for (const auto& [d, g] : degrees) out.degrees[d + by] = g;
    return out;
}

GradedGroup& GradedGroup::operator+=(const GradedGroup& other) {
    for (const auto& [d, g] : other.degrees)
        for (auto c : g) add(d, c);
    return *this;
}

std::string to_string(const GradedGroup& g) {
    std::string out;
    for (const auto& [d, grp] : g.degrees) {
        if (!out.empty()) out += ", ";
        out += "H" + std::to_string(d) + " = " + group_to_string(grp);
    }
    return out.empty() ? "0" : out;
}

namespace {

std::int64_t tensor(std::int64_t a, std::int64_t b) {
    if (a == 0) return b;
    if (b == 0) return a;
    return std::gcd(a, b);
}

std::int64_t tor(std::int64_t a, std::int64_t b) {
    if (a == 0 || b == 0) return 1;
    return std::gcd(a, b);
}

}  // namespace

GradedGroup kunneth(const GradedGroup& a, const GradedGroup& b) {
    GradedGroup out;
    for (const auto& [i, gi] : a.degrees)
        for (const auto& [j, gj] : b.degrees)
            for (auto x : gi)
                for (auto y : gj) {
                    out.add(i + j, tensor(x, y));
                    out.add(i + j + 1, tor(x, y));
                }
    return out;
}

}  // namespace chang
