#include "chang/verifier.hpp"

#include "chang/invariants.hpp"
#include "chang/smash.hpp"

#include <set>

namespace chang {

bool graded_iso(const GradedGroup& a, const GradedGroup& b) {
    auto strip = [](const GradedGroup& g) {
        std::map<int, CyclicList> out;
        for (const auto& [d, grp] : g.degrees) {
            auto n = normalize(grp);
            if (!n.empty()) out[d] = n;
        }
        return out;
    };
    return strip(a) == strip(b);
}

namespace {

std::set<int> degrees_of(const SqModule& m) {
    std::set<int> out;
    for (const auto& [d, names] : m.basis)
        if (!names.empty()) out.insert(d);
    return out;
}

const std::vector<std::pair<std::string, std::vector<int>>>& composites() {
    static const std::vector<std::pair<std::string, std::vector<int>>> list = {
        {"Sq1", {1}}, {"Sq2", {2}}, {"Sq4", {4}}, {"Sq1Sq2", {1, 2}}, {"Sq2Sq1", {2, 1}}, {"Sq2Sq2", {2, 2}}};
    return list;
}

// Column vector as a bitmask over the basis of its degree.
using Vec = unsigned;

Vec apply(const F2Matrix& m, Vec v) {
    Vec out = 0;
    for (int i = 0; i < m.rows(); ++i) {
        bool bit = false;
        for (int j = 0; j < m.cols(); ++j)
            if (m.get(i, j) && ((v >> j) & 1u)) bit = !bit;
        if (bit) out |= 1u << i;
    }
    return out;
}

std::vector<F2Matrix> invertible_matrices(int n) {
    std::vector<F2Matrix> out;
    const unsigned long long total = 1ull << (n * n);
    for (unsigned long long mask = 0; mask < total; ++mask) {
        F2Matrix m(n, n);
        for (int i = 0; i < n * n; ++i)
            if ((mask >> i) & 1ull) m.set(i / n, i % n, true);
        if (m.rank() == n) out.push_back(m);
    }
    return out;
}

struct IsoSearcher {
    const SqModule& a;
    const SqModule& b;
    std::vector<int> degrees;
    std::map<int, std::vector<F2Matrix>> candidates;
    std::map<int, F2Matrix> chosen;

    bool consistent(int d) const {
        for (int k : {1, 2, 4}) {
            // Constraint ending in d.
            if (chosen.count(d - k)) {
                if (!(chosen.at(d) * a.op(k, d - k) == b.op(k, d - k) * chosen.at(d - k))) return false;
            }
        }
        return true;
    }

    bool search(std::size_t i) {
        if (i == degrees.size()) return true;
        const int d = degrees[i];
        for (const auto& m : candidates[d]) {
            chosen[d] = m;
            if (consistent(d) && search(i + 1)) return true;
        }
        chosen.erase(d);
        return false;
    }
};

}  // namespace

const char* to_string(IsoSearch s) {
    switch (s) {
        case IsoSearch::Found: return "found";
        case IsoSearch::NotFound: return "none";
        case IsoSearch::Skipped: return "skipped";
    }
    return "?";
}

std::map<std::string, int> sq_invariants(const SqModule& m) {
    std::map<std::string, int> out;
    for (int d : degrees_of(m)) {
        out["dim@" + std::to_string(d)] = m.dim(d);
        for (const auto& [name, ops] : composites()) {
            int r = m.composite(ops, d).rank();
            if (r) out[name + "@" + std::to_string(d)] = r;
        }
    }
    return out;
}

SqComparison sq_module_compare(const SqModule& a, const SqModule& b, int search_budget_bits) {
    SqComparison out;
    out.invariants_equal = sq_invariants(a) == sq_invariants(b);
    if (!out.invariants_equal) {
        out.search = IsoSearch::NotFound;
        return out;
    }
    int bits = 0;
    for (int d : degrees_of(a)) bits += a.dim(d) * a.dim(d);
    if (bits > search_budget_bits) {
        out.search = IsoSearch::Skipped;
        return out;
    }
    IsoSearcher s{a, b, {}, {}, {}};
    for (int d : degrees_of(a)) {
        s.degrees.push_back(d);
        s.candidates[d] = invertible_matrices(a.dim(d));
    }
    out.search = s.search(0) ? IsoSearch::Found : IsoSearch::NotFound;
    return out;
}

ObstructionReport moore_split_obstruction(const SqModule& m, int bottom, int top) {
    ObstructionReport rep;
    rep.bottom = bottom;
    rep.top = top;

    // Moore summand with classes in d, d+1: its bottom class dies under Sq^2, its top class is missed by Sq^2.
    for (int d = bottom; d < top; ++d) {
        if (m.dim(d) == 0 || m.dim(d + 1) == 0) continue;
        bool injective = m.op(2, d).rank() == m.dim(d);
        bool surjective = m.op(2, d - 1).rank() == m.dim(d + 1);
        if (injective || surjective) {
            rep.excluded_moore.push_back(d);
            rep.notes.push_back("no Moore summand on cells " + std::to_string(d) + "," + std::to_string(d + 1) +
                                (injective ? ": Sq2 is injective on H^" + std::to_string(d)
                                           : ": Sq2 is onto H^" + std::to_string(d + 1)));
        }
    }

    const int mid = bottom + 1;
    F2Matrix sq2mid = m.op(2, mid);
    rep.middle_sq2_iso = m.dim(mid) == m.dim(mid + 2) && sq2mid.rank() == m.dim(mid);
    rep.notes.push_back(std::string("Sq2: H^") + std::to_string(mid) + " -> H^" + std::to_string(mid + 2) +
                        (rep.middle_sq2_iso ? " is an isomorphism" : " is not an isomorphism"));

    rep.applicable = top - bottom == 4;
    if (!rep.applicable) return rep;
    rep.ends_linked_by_sq4 = m.dim(bottom) == 1 && m.dim(top) == 1 && !m.op(4, bottom).is_zero();
    if (!rep.ends_linked_by_sq4 || m.dim(top - 2) > 16) return rep;

    const int n8 = m.dim(top - 2);
    F2Matrix sq2top = m.op(2, top - 2);
    std::vector<Vec> hit_top, killed;
    for (Vec v = 1; v < (1u << n8); ++v) {
        Vec img = apply(sq2top, v);
        if (img == 1u) hit_top.push_back(v);
        if (img == 0u) killed.push_back(v);
    }
    killed.push_back(0);
    rep.two_classes_hit_top = hit_top.size() >= 2;
    Vec image_of_bottom = apply(m.op(2, bottom), 1u);
    if (image_of_bottom != 0)
        for (std::size_t i = 0; i < hit_top.size() && !rep.sq2_from_bottom_splits; ++i)
            for (std::size_t j = i + 1; j < hit_top.size() && !rep.sq2_from_bottom_splits; ++j)
                for (Vec k : killed)
                    if ((hit_top[i] ^ hit_top[j] ^ k) == image_of_bottom) {
                        rep.sq2_from_bottom_splits = true;
                        break;
                    }
    rep.notes.push_back(rep.criterion_holds() ? "Sq pattern allows a splitting into two Moore spaces"
                                              : "Sq pattern rules out the two-Moore-space splitting criterion");
    return rep;
}

VerificationReport check_decomposition(const Wedge& x, const Wedge& y, const Wedge& w) {
    VerificationReport rep;
    rep.homology_match = graded_iso(integral_homology(w), kunneth(integral_homology(x), integral_homology(y)));
    SqModule expected = cartan(mod2_cohomology(x), mod2_cohomology(y));
    SqModule actual = mod2_cohomology(w);
    rep.mod2_match = expected.poincare() == actual.poincare();
    SqComparison cmp = sq_module_compare(expected, actual);
    rep.sq_invariants_match = cmp.invariants_equal;
    rep.sq_iso = cmp.search;
    auto p = expected.poincare();
    if (!p.empty()) {
        ObstructionReport ob = moore_split_obstruction(expected, p.begin()->first, p.rbegin()->first);
        rep.obstruction_notes = ob.notes;
    }
    return rep;
}

}  // namespace chang
