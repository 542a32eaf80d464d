#include "chang/smash.hpp"

#include "chang/errors.hpp"
#include "chang/invariants.hpp"

#include <algorithm>

namespace chang {
namespace {

using Trail = std::vector<Branch>;

const Elementary& first_of_kind(const Elementary& a, const Elementary& b) { return a.kind <= b.kind ? a : b; }
const Elementary& second_of_kind(const Elementary& a, const Elementary& b) { return a.kind <= b.kind ? b : a; }

Wedge atom(const Elementary& a, const Elementary& b) { return Wedge(make_atom_unchecked(a, b)); }

Wedge mo(const Elementary& m, int n) { return Wedge(moore(m.p, m.r, n)); }

void note(Trail& t, const std::string& rule, const Elementary& a, const Elementary& b) { t.push_back({rule, a, b}); }

Wedge decide(const Elementary& a, const Elementary& b, Trail& t, int depth);

// C_u ^ C_r^{s}
Wedge bot_full(const Elementary& bot, const Elementary& full, Trail& t) {
    const int u = bot.r, r = full.r, s = full.s;
    if (u >= r && u >= s) {
        note(t, "cbot-cfull/u>=r,s", bot, full);
        return Wedge(cfull(r, 9, s)) + atom(ceta(5), full);
    }
    if (u == s && s < r) {
        note(t, "cbot-cfull/u=s<r", bot, full);
        return Wedge(cfull(s, 9, r)) + atom(ceta(5), cfull(s, 5, s));
    }
    note(t, "cbot-cfull/atom", bot, full);
    return atom(bot, full);
}

// C^{u} ^ C_r^{s} is the dual of C_u ^ C_s^{r}; the rule names follow the direct conditions.
Wedge top_full(const Elementary& top, const Elementary& full, Trail& t) {
    const int u = top.s, r = full.r, s = full.s;
    Trail scratch;
    Wedge w = dual(bot_full(cbot(u, 5), cfull(s, 5, r), scratch), 16);
    if (u >= r && u >= s) note(t, "ctop-cfull/u>=r,s", top, full);
    else if (u == r && r < s) note(t, "ctop-cfull/u=r<s", top, full);
    else note(t, "ctop-cfull/atom", top, full);
    return w;
}

// a = C_r^{s}, b = C_{r'}^{s'} with s the largest of the four exponents.
Wedge full_full_smax(const Elementary& a, const Elementary& b, Trail& t, int depth) {
    const int r = a.r, s = a.s, rp = b.r, sp = b.s;
    if (s > rp && s > sp) {
        note(t, "cfull-cfull/s-strict-max", a, b);
        return Wedge(cfull(rp, 9, sp)) + decide(cbot(r, 5), b, t, depth + 1);
    }
    if (s == rp && rp > sp && sp > r) {
        note(t, "cfull-cfull/s=r'>s'>r", a, b);
        return Wedge(cfull(r, 9, s)) + atom(ctop(5, sp), a);
    }
    if (s == sp && sp > rp && rp > r) {
        note(t, "cfull-cfull/s=s'>r'>r", a, b);
        return Wedge(cfull(r, 9, s)) + atom(cbot(rp, 5), a);
    }
    if (s == sp && sp == rp && rp > r) {
        note(t, "cfull-cfull/s=s'=r'>r", a, b);
        return Wedge(cfull(r, 9, s)) + Wedge(cfull(r, 9, s)) + atom(ceta(5), a);
    }
    if (r >= rp && r >= sp) {
        note(t, "cfull-cfull/r>=r',s'", a, b);
        return Wedge(cfull(rp, 9, sp)) + Wedge(cfull(rp, 9, sp)) + atom(ceta(5), b);
    }
    if (s == rp && rp > sp && sp == r) {
        note(t, "cfull-cfull/s=r'>s'=r", a, b);
        return Wedge(cfull(rp, 9, sp)) + Wedge(cfull(sp, 9, rp)) + atom(ceta(5), cfull(r, 5, r));
    }
    note(t, "cfull-cfull/remaining", a, b);
    return Wedge(cfull(rp, 9, sp)) + decide(cbot(r, 5), b, t, depth + 1);
}

Wedge full_full(const Elementary& a, const Elementary& b, Trail& t, int depth) {
    const int m = std::max({a.r, a.s, b.r, b.s});
    if (a.s == m) return full_full_smax(a, b, t, depth);
    if (b.s == m) {
        note(t, "cfull-cfull/orient-swap", a, b);
        return full_full_smax(b, a, t, depth);
    }
    // The largest exponent sits at the bottom: pass to duals, where it moves to the top.
    note(t, "cfull-cfull/orient-dual", a, b);
    Elementary da = cfull(a.s, 5, a.r), db = cfull(b.s, 5, b.r);
    Wedge w = da.s == m ? full_full_smax(da, db, t, depth) : full_full_smax(db, da, t, depth);
    return dual(w, 16);
}

// Both arguments are at base dimension and are neither spheres nor points.
Wedge decide(const Elementary& x, const Elementary& y, Trail& t, int depth) {
    if (depth > 3) throw std::logic_error("smash decision recursion did not terminate");
    const Elementary& a = first_of_kind(x, y);
    const Elementary& b = second_of_kind(x, y);

    if (a.kind == Kind::Moore && b.kind == Kind::Moore) {
        if (a.p != b.p) {
            note(t, "moore-moore/coprime", a, b);
            return Wedge();
        }
        const int m = std::min(a.r, b.r);
        if (a.p == 2 && a.r == 1 && b.r == 1) {
            note(t, "moore-moore/mod2-exponents-one", a, b);
            return Wedge(cfull(1, 8, 1));
        }
        note(t, "moore-moore/same-prime", a, b);
        return Wedge(moore(a.p, m, 6)) + Wedge(moore(a.p, m, 7));
    }

    if (a.kind == Kind::Moore && a.p != 2) {
        switch (b.kind) {
            case Kind::ChangEta: note(t, "odd-moore/ceta", a, b); return mo(a, 6) + mo(a, 8);
            case Kind::ChangTop: note(t, "odd-moore/ctop", a, b); return mo(a, 6);
            case Kind::ChangBot: note(t, "odd-moore/cbot", a, b); return mo(a, 8);
            case Kind::ChangFull: note(t, "odd-moore/cfull", a, b); return Wedge();
            default: break;
        }
    }

    if (a.kind == Kind::Moore) {
        const int u = a.r;
        switch (b.kind) {
            case Kind::ChangEta: note(t, "atom/moore-ceta", a, b); return atom(a, b);
            case Kind::ChangBot:
                if (u > b.r) {
                    note(t, "moore-cbot/u>r", a, b);
                    return atom(a, b);
                }
                note(t, "moore-cbot/u<=r", a, b);
                return atom(a, ceta(5)) + mo(a, 7);
            case Kind::ChangTop:
                if (u > b.s) {
                    note(t, "moore-ctop/u>s", a, b);
                    return atom(a, b);
                }
                note(t, "moore-ctop/u<=s", a, b);
                return atom(a, ceta(5)) + mo(a, 7);
            case Kind::ChangFull: {
                const int r = b.r, s = b.s;
                if (u > r && u > s) {
                    note(t, "moore-cfull/u>r,s", a, b);
                    return Wedge(cfull(r, 8, s)) + Wedge(cfull(r, 9, s));
                }
                if (r < u && u <= s) {
                    note(t, "moore-cfull/r<u<=s", a, b);
                    return atom(a, cbot(r, 5)) + mo(a, 7);
                }
                if (s < u && u <= r) {
                    note(t, "moore-cfull/s<u<=r", a, b);
                    return atom(a, ctop(5, s)) + mo(a, 7);
                }
                note(t, "moore-cfull/u<=r,s", a, b);
                return atom(a, ceta(5)) + mo(a, 7) + mo(a, 7);
            }
            default: break;
        }
    }

    if (a.kind == Kind::ChangEta) {
        note(t, b.kind == Kind::ChangEta ? "atom/ceta-ceta" : "atom/ceta-chang", a, b);
        return atom(a, b);
    }
    if (a.kind == Kind::ChangTop && b.kind == Kind::ChangTop) {
        note(t, "atom/ctop-ctop", a, b);
        return atom(a, b);
    }
    if (a.kind == Kind::ChangTop && b.kind == Kind::ChangBot) {
        note(t, "atom/cbot-ctop", a, b);
        return atom(a, b);
    }
    if (a.kind == Kind::ChangBot && b.kind == Kind::ChangBot) {
        note(t, "atom/cbot-cbot", a, b);
        return atom(a, b);
    }
    if (a.kind == Kind::ChangTop && b.kind == Kind::ChangFull) return top_full(a, b, t);
    if (a.kind == Kind::ChangBot && b.kind == Kind::ChangFull) return bot_full(a, b, t);
    if (a.kind == Kind::ChangFull && b.kind == Kind::ChangFull) return full_full(x, y, t, depth);

    throw UnclassifiedPair("no rule for " + to_string(x) + " ^ " + to_string(y));
}

}  // namespace

std::pair<Wedge, std::vector<Branch>> decompose_pair_traced(const Elementary& a, const Elementary& b) {
    validate(a);
    validate(b);
    Trail trail;
    Wedge w;
    if (a.kind == Kind::Point || b.kind == Kind::Point) {
        note(trail, "point", a, b);
    } else if (a.kind == Kind::Sphere || b.kind == Kind::Sphere) {
        const Elementary& sph = a.kind == Kind::Sphere ? a : b;
        const Elementary& other = a.kind == Kind::Sphere ? b : a;
        note(trail, "sphere-suspension", a, b);
        w = suspend(Wedge(other), sph.dim);
    } else {
        auto [ba, sa] = to_base(a);
        auto [bb, sb] = to_base(b);
        w = suspend(decide(ba, bb, trail, 0), sa + sb);
    }
    GradedGroup expected = kunneth(integral_homology(a), integral_homology(b));
    if (integral_homology(w) != expected)
        throw VerificationFailure("rule " + trail.front().rule + " gives " + to_string(w) + " for " + to_string(a) +
                                  " ^ " + to_string(b) + ", whose homology should be " + to_string(expected));
    return {w, trail};
}

std::pair<Wedge, std::string> decompose_pair(const Elementary& a, const Elementary& b) {
    auto [w, trail] = decompose_pair_traced(a, b);
    for (const auto& br : trail)
        if (br.rule.find("/orient-") == std::string::npos) return {w, br.rule};
    return {w, trail.front().rule};
}

SmashResult smash_decompose(const Wedge& x, const Wedge& y) {
    SmashResult out;
    for (const auto& p : x.parts())
        for (const auto& q : y.parts()) {
            const auto* ep = std::get_if<Elementary>(&p);
            const auto* eq = std::get_if<Elementary>(&q);
            if (ep && eq) {
                auto [w, trail] = decompose_pair_traced(*ep, *eq);
                out.wedge += w;
                out.branches.insert(out.branches.end(), trail.begin(), trail.end());
                continue;
            }
            const Elementary* other = ep ? ep : eq;
            const SmashAtom* at = ep ? std::get_if<SmashAtom>(&q) : std::get_if<SmashAtom>(&p);
            if (other && other->kind == Kind::Sphere) {
                out.wedge += suspend(Wedge(*at), other->dim);
                out.branches.push_back({"sphere-suspension", *other, *other});
                continue;
            }
            throw UnclassifiedPair("no rule for the smash of " + to_string(p) + " with " + to_string(q));
        }
    return out;
}

bool is_indecomposable_pair(const Elementary& a, const Elementary& b) { return classified_atom_pair(a, b); }

bool classified_atom_pair(const Elementary& x, const Elementary& y) {
    if (x.kind == Kind::Point || y.kind == Kind::Point || x.kind == Kind::Sphere || y.kind == Kind::Sphere) return false;
    const Elementary& a = first_of_kind(x, y);
    const Elementary& b = second_of_kind(x, y);
    if (a.kind == Kind::Moore) {
        if (a.p != 2) return false;
        switch (b.kind) {
            case Kind::Moore: return b.p == 2 && a.r == 1 && b.r == 1;
            case Kind::ChangEta: return true;
            case Kind::ChangBot: return a.r > b.r;
            case Kind::ChangTop: return a.r > b.s;
            default: return false;
        }
    }
    if (a.kind == Kind::ChangEta) return true;
    if (b.kind != Kind::ChangFull) return true;
    if (a.kind == Kind::ChangBot) {
        const int u = a.r, r = b.r, s = b.s;
        return !(u >= r && u >= s) && !(u == s && s < r);
    }
    if (a.kind == Kind::ChangTop) {
        const int u = a.s, r = b.r, s = b.s;
        return !(u >= r && u >= s) && !(u == r && r < s);
    }
    return false;
}

const std::vector<std::string>& rule_ids() {
    static const std::vector<std::string> ids = {
        "point",
        "sphere-suspension",
        "moore-moore/coprime",
        "moore-moore/same-prime",
        "moore-moore/mod2-exponents-one",
        "odd-moore/ceta",
        "odd-moore/ctop",
        "odd-moore/cbot",
        "odd-moore/cfull",
        "atom/moore-ceta",
        "atom/ceta-ceta",
        "atom/ceta-chang",
        "atom/ctop-ctop",
        "atom/cbot-ctop",
        "atom/cbot-cbot",
        "moore-cbot/u>r",
        "moore-cbot/u<=r",
        "moore-ctop/u>s",
        "moore-ctop/u<=s",
        "moore-cfull/u>r,s",
        "moore-cfull/r<u<=s",
        "moore-cfull/s<u<=r",
        "moore-cfull/u<=r,s",
        "cbot-cfull/u>=r,s",
        "cbot-cfull/u=s<r",
        "cbot-cfull/atom",
        "ctop-cfull/u>=r,s",
        "ctop-cfull/u=r<s",
        "ctop-cfull/atom",
        "cfull-cfull/orient-swap",
        "cfull-cfull/orient-dual",
        "cfull-cfull/s-strict-max",
        "cfull-cfull/s=r'>s'>r",
        "cfull-cfull/s=s'>r'>r",
        "cfull-cfull/s=s'=r'>r",
        "cfull-cfull/r>=r',s'",
        "cfull-cfull/s=r'>s'=r",
        "cfull-cfull/remaining",
    };
    return ids;
}

std::vector<Elementary> base_pieces(int max_exponent, const std::vector<int>& primes) {
    std::vector<Elementary> out{sphere(3), ceta(5)};
    for (int p : primes)
        for (int r = 1; r <= max_exponent; ++r) out.push_back(moore(p, r, 3));
    for (int a = 1; a <= max_exponent; ++a) {
        out.push_back(ctop(5, a));
        out.push_back(cbot(a, 5));
        for (int b = 1; b <= max_exponent; ++b) out.push_back(cfull(a, 5, b));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::map<std::string, int> branch_coverage(const std::vector<Elementary>& pieces) {
    std::map<std::string, int> hits;
    for (const auto& id : rule_ids()) hits[id] = 0;
    auto all = pieces;
    all.push_back(point());
    for (const auto& a : all)
        for (const auto& b : all)
            for (const auto& br : decompose_pair_traced(a, b).second) ++hits[br.rule];
    return hits;
}

}  // namespace chang
