#pragma once
// Random generators shared by the unit and acceptance tests.

#include "chang/complex.hpp"
#include "chang/graded.hpp"
#include "chang/smash.hpp"

#include <random>
#include <string>
#include <vector>

namespace testing_support {

using namespace chang;

inline int pick(std::mt19937& g, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g); }

// An elementary piece whose cells lie in [b, b+2].
inline Elementary random_elementary(std::mt19937& g, int b) {
    const int primes[] = {2, 3, 5};
    switch (pick(g, 0, 5)) {
        case 0: return sphere(b + pick(g, 0, 2));
        case 1: return moore(primes[pick(g, 0, 2)], pick(g, 1, 3), b + pick(g, 0, 1));
        case 2: return ceta(b + 2);
        case 3: return ctop(b + 2, pick(g, 1, 3));
        case 4: return cbot(pick(g, 1, 3), b + 2);
        default: return cfull(pick(g, 1, 3), b + 2, pick(g, 1, 3));
    }
}

// Every indecomposable atom met while smashing the base pieces.
inline std::vector<SmashAtom> sample_atoms() {
    std::vector<SmashAtom> out;
    auto pieces = base_pieces(2);
    for (const auto& a : pieces)
        for (const auto& b : pieces) {
            Wedge w = decompose_pair(a, b).first;
            for (const auto& s : w.parts())
                if (std::holds_alternative<SmashAtom>(s)) out.push_back(std::get<SmashAtom>(s));
        }
    return out;
}

// A wedge that fits a duality window: elementaries in [b, b+2], plus atoms starting at b.
inline Wedge random_wedge(std::mt19937& g, const std::vector<SmashAtom>& atoms) {
    Wedge w;
    int b = pick(g, 3, 12);
    if (!atoms.empty() && pick(g, 0, 3) == 0) {
        SmashAtom a = atoms[static_cast<std::size_t>(pick(g, 0, static_cast<int>(atoms.size()) - 1))];
        a.shift = 0;  // atoms cannot go below their base dimension
        b = bottom_cell(a) + pick(g, 0, 6);
        w += suspend(Wedge(a), b - bottom_cell(a));
    }
    for (int n = pick(g, 1, 3); n > 0; --n) w += Wedge(random_elementary(g, b));
    return w;
}

// Random text in the expression grammar, with spacing and spelling variants.
inline std::string random_expression(std::mt19937& g, int depth) {
    auto sp = [&] { return pick(g, 0, 2) == 0 ? std::string(" ") : std::string(); };
    if (depth <= 0 || pick(g, 0, 2) == 0) {
        int n = pick(g, 3, 9);
        switch (pick(g, 0, 7)) {
            case 0: return "S(" + sp() + std::to_string(n) + sp() + ")";
            case 1: {
                int p = pick(g, 0, 1) ? 2 : 3;
                int r = pick(g, 1, 3);
                if (pick(g, 0, 1)) {
                    int q = 1;
                    for (int i = 0; i < r; ++i) q *= p;
                    return "M(" + std::to_string(q) + "," + sp() + std::to_string(n) + ")";
                }
                return "M(" + std::to_string(p) + "^" + std::to_string(r) + "," + std::to_string(n) + ")";
            }
            case 2: return "Ceta(" + std::to_string(n + 2) + ")";
            case 3: return "Ctop(" + std::to_string(n + 2) + "," + std::to_string(pick(g, 1, 3)) + ")";
            case 4: return "Cbot(" + std::to_string(pick(g, 1, 3)) + "," + sp() + std::to_string(n + 2) + ")";
            case 5:
                return "C(" + std::to_string(pick(g, 1, 3)) + "," + std::to_string(n + 2) + "," +
                       std::to_string(pick(g, 1, 3)) + ")";
            case 6: return pick(g, 0, 1) ? "*" : "pt";
            default: return "S(" + std::to_string(n) + ")";
        }
    }
    std::string a = random_expression(g, depth - 1);
    switch (pick(g, 0, 4)) {
        case 0: return a + sp() + (pick(g, 0, 1) ? "+" : " v ") + sp() + random_expression(g, depth - 1);
        case 1: return "(" + a + ")" + sp() + "^" + sp() + "(" + random_expression(g, depth - 1) + ")";
        case 2: return "susp(" + std::to_string(pick(g, 0, 3)) + "," + a + ")";
        case 3: return pick(g, 0, 1) ? "D(" + a + ")" : "D(" + a + "," + std::to_string(pick(g, 10, 20)) + ")";
        default: return "(" + sp() + a + sp() + ")";
    }
}

// A wedge of spheres and Moore spaces with the given integral homology.
inline Wedge homology_mimic(const GradedGroup& h) {
    Wedge w;
    for (const auto& [d, grp] : h.degrees)
        for (auto o : grp) {
            if (o == 0) {
                w += Wedge(sphere(d));
                continue;
            }
            int p = 2;
            while (o % p != 0) ++p;
            int e = 0;
            for (auto t = o; t > 1; t /= p) ++e;
            w += Wedge(moore(p, e, d));
        }
    return w;
}

}  // namespace testing_support
