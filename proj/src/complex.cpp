#include "chang/complex.hpp"

#include "chang/errors.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace chang {

const char* kind_name(Kind k) {
    switch (k) {
        case Kind::Sphere: return "Sphere";
        case Kind::Moore: return "Moore";
        case Kind::ChangEta: return "ChangEta";
        case Kind::ChangTop: return "ChangTop";
        case Kind::ChangBot: return "ChangBot";
        case Kind::ChangFull: return "ChangFull";
        case Kind::Point: return "Point";
    }
    return "?";
}

Elementary sphere(int n) {
    Elementary e{Kind::Sphere, n, 0, 0, 0};
    validate(e);
    return e;
}
Elementary moore(int p, int r, int n) {
    Elementary e{Kind::Moore, n, r, 0, p};
    validate(e);
    return e;
}
Elementary ceta(int k) {
    Elementary e{Kind::ChangEta, k, 0, 0, 2};
    validate(e);
    return e;
}
Elementary ctop(int k, int s) {
    Elementary e{Kind::ChangTop, k, 0, s, 2};
    validate(e);
    return e;
}
Elementary cbot(int r, int k) {
    Elementary e{Kind::ChangBot, k, r, 0, 2};
    validate(e);
    return e;
}
Elementary cfull(int r, int k, int s) {
    Elementary e{Kind::ChangFull, k, r, s, 2};
    validate(e);
    return e;
}
Elementary point() { return Elementary{}; }

namespace {

bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

[[noreturn]] void bad(const Elementary& e, const std::string& why) {
    throw std::invalid_argument(std::string(kind_name(e.kind)) + " with dim " + std::to_string(e.dim) + ": " + why);
}

}  // namespace

void validate(const Elementary& e) {
    switch (e.kind) {
        case Kind::Point:
            if (e.dim || e.r || e.s || e.p) bad(e, "point carries no parameters");
            return;
        case Kind::Sphere:
            if (e.dim < 3) bad(e, "spheres need n >= 3");
            if (e.r || e.s || e.p) bad(e, "spheres carry no torsion");
            return;
        case Kind::Moore:
            if (e.dim < 3) bad(e, "Moore spaces need n >= 3");
            if (!is_prime(e.p)) bad(e, "p must be prime");
            if (e.r < 1) bad(e, "exponent must be >= 1");
            if (e.s) bad(e, "Moore spaces have one exponent");
            return;
        default: break;
    }
    if (e.dim < 5) bad(e, "Chang complexes need k >= 5");
    if (e.p != 2) bad(e, "Chang complexes are 2-local");
    bool want_r = e.kind == Kind::ChangBot || e.kind == Kind::ChangFull;
    bool want_s = e.kind == Kind::ChangTop || e.kind == Kind::ChangFull;
    if (want_r ? e.r < 1 : e.r != 0) bad(e, "bad lower exponent");
    if (want_s ? e.s < 1 : e.s != 0) bad(e, "bad upper exponent");
}

bool is_chang(const Elementary& e) {
    return e.kind == Kind::ChangEta || e.kind == Kind::ChangTop || e.kind == Kind::ChangBot ||
           e.kind == Kind::ChangFull;
}

int bottom_cell(const Elementary& e) {
    if (e.kind == Kind::Point) throw std::invalid_argument("the point has no cells");
    return is_chang(e) ? e.dim - 2 : e.dim;
}

int top_cell(const Elementary& e) {
    switch (e.kind) {
        case Kind::Sphere: return e.dim;
        case Kind::Moore: return e.dim + 1;
        case Kind::Point: throw std::invalid_argument("the point has no cells");
        default: return e.dim;
    }
}

std::vector<int> cells(const Elementary& e) {
    const int n = e.dim;
    switch (e.kind) {
        case Kind::Point: return {};
        case Kind::Sphere: return {n};
        case Kind::Moore: return {n, n + 1};
        case Kind::ChangEta: return {n - 2, n};
        case Kind::ChangTop:
        case Kind::ChangBot: return {n - 2, n - 1, n};
        case Kind::ChangFull: return {n - 2, n - 1, n - 1, n};
    }
    return {};
}

int base_dim(Kind k) {
    switch (k) {
        case Kind::Sphere:
        case Kind::Moore: return 3;
        case Kind::Point: return 0;
        default: return 5;
    }
}

std::pair<Elementary, int> to_base(const Elementary& e) {
    if (e.kind == Kind::Point) return {e, 0};
    Elementary b = e;
    b.dim = base_dim(e.kind);
    return {b, e.dim - b.dim};
}

Elementary suspend(const Elementary& e, int m) {
    if (e.kind == Kind::Point) return e;
    Elementary out = e;
    out.dim += m;
    validate(out);
    return out;
}

SmashAtom make_atom_unchecked(const Elementary& a, const Elementary& b, int extra_shift) {
    auto [ba, sa] = to_base(a);
    auto [bb, sb] = to_base(b);
    SmashAtom out;
    out.left = std::min(ba, bb);
    out.right = std::max(ba, bb);
    out.shift = sa + sb + extra_shift;
    if (out.shift < 0) throw std::invalid_argument("atom below its base dimension");
    return out;
}

SmashAtom make_atom(const Elementary& a, const Elementary& b, int extra_shift) {
    validate(a);
    validate(b);
    if (!classified_atom_pair(a, b))
        throw std::invalid_argument("not an indecomposable pair: " + to_string(a) + " ^ " + to_string(b));
    return make_atom_unchecked(a, b, extra_shift);
}

int bottom_cell(const SmashAtom& a) { return bottom_cell(a.left) + bottom_cell(a.right) + a.shift; }
int top_cell(const SmashAtom& a) { return top_cell(a.left) + top_cell(a.right) + a.shift; }

int bottom_cell(const Summand& x) {
    return std::visit([](const auto& v) { return bottom_cell(v); }, x);
}
int top_cell(const Summand& x) {
    return std::visit([](const auto& v) { return top_cell(v); }, x);
}

namespace {

bool is_mod2_moore_one(const Elementary& e) { return e.kind == Kind::Moore && e.p == 2 && e.r == 1; }

// The only atom whose product is itself elementary: M_2 ^ M_2 = C^{k,1}_1.
Summand rewrite(const Summand& x) {
    if (const auto* a = std::get_if<SmashAtom>(&x)) {
        if (is_mod2_moore_one(a->left) && is_mod2_moore_one(a->right))
            return cfull(1, a->left.dim + a->right.dim + 2 + a->shift, 1);
    }
    return x;
}

bool is_point(const Summand& x) {
    const auto* e = std::get_if<Elementary>(&x);
    return e && e->kind == Kind::Point;
}

}  // namespace

Wedge::Wedge(std::vector<Summand> parts) {
    for (auto& p : parts) {
        if (is_point(p)) continue;
        parts_.push_back(rewrite(p));
    }
    std::sort(parts_.begin(), parts_.end());
}

Wedge::Wedge(const Elementary& e) : Wedge(std::vector<Summand>{e}) {}
Wedge::Wedge(const SmashAtom& a) : Wedge(std::vector<Summand>{a}) {}

Wedge Wedge::operator+(const Wedge& other) const {
    std::vector<Summand> all = parts_;
    all.insert(all.end(), other.parts_.begin(), other.parts_.end());
    return Wedge(all);
}

Wedge& Wedge::operator+=(const Wedge& other) { return *this = *this + other; }

Wedge canonicalize(const Wedge& x) { return Wedge(x.parts()); }

Wedge suspend(const Wedge& x, int m) {
    std::vector<Summand> out;
    for (const auto& p : x.parts()) {
        if (const auto* e = std::get_if<Elementary>(&p)) {
            out.push_back(suspend(*e, m));
        } else {
            SmashAtom a = std::get<SmashAtom>(p);
            a.shift += m;
            if (a.shift < 0) throw std::invalid_argument("desuspension below the atom's base dimension");
            out.push_back(a);
        }
    }
    return Wedge(out);
}

Elementary dual(const Elementary& e, int d) {
    Elementary out = e;
    const int n = e.dim;
    switch (e.kind) {
        case Kind::Point: return e;
        case Kind::Sphere: out.dim = d - n; break;
        case Kind::Moore: out.dim = d - n - 1; break;
        case Kind::ChangEta: out.dim = d - n + 2; break;
        case Kind::ChangFull:
            out.dim = d - n + 2;
            std::swap(out.r, out.s);
            break;
        case Kind::ChangBot:
            out.kind = Kind::ChangTop;
            out.dim = d - n + 2;
            out.s = e.r;
            out.r = 0;
            break;
        case Kind::ChangTop:
            out.kind = Kind::ChangBot;
            out.dim = d - n + 2;
            out.r = e.s;
            out.s = 0;
            break;
    }
    try {
        validate(out);
    } catch (const std::invalid_argument& ex) {
        throw WindowError("dual of " + to_string(e) + " in window " + std::to_string(d) +
                          " leaves the stable range: " + ex.what());
    }
    return out;
}

SmashAtom dual(const SmashAtom& a, int d) {
    // Σ^t(L ^ R) in window d dualises to D_8 L ^ D_{d-t-8} R, and D_{8+e} R = Σ^e D_8 R.
    Elementary l = dual(a.left, 8);
    Elementary r = dual(a.right, 8);
    int extra = d - a.shift - 16;
    auto [bl, sl] = to_base(l);
    auto [br, sr] = to_base(r);
    int shift = sl + sr + extra;
    if (shift < 0)
        throw WindowError("dual of " + to_string(a) + " in window " + std::to_string(d) +
                          " falls below the atom's base dimension");
    return make_atom_unchecked(bl, br, shift);
}

Wedge dual(const Wedge& x, int d) {
    std::vector<Summand> out;
    for (const auto& p : x.parts())
        out.push_back(std::visit([d](const auto& v) -> Summand { return dual(v, d); }, p));
    return Wedge(out);
}

int infer_window(const Wedge& x) {
    if (x.empty()) return 0;
    bool atoms = false;
    int lo = bottom_cell(x.parts().front());
    int hi = top_cell(x.parts().front());
    const Summand* lo_part = &x.parts().front();
    const Summand* hi_part = lo_part;
    for (const auto& p : x.parts()) {
        atoms = atoms || std::holds_alternative<SmashAtom>(p);
        if (bottom_cell(p) < lo) {
            lo = bottom_cell(p);
            lo_part = &p;
        }
        if (top_cell(p) > hi) {
            hi = top_cell(p);
            hi_part = &p;
        }
    }
    const int width = atoms ? 4 : 2;
    if (hi - lo > width)
        throw WindowError("no duality window of width " + std::to_string(width) + " holds both " +
                          to_string(*lo_part) + " and " + to_string(*hi_part));
    return lo + hi;
}

Wedge dual(const Wedge& x) { return dual(x, infer_window(x)); }

std::vector<std::pair<int, int>> cells_of(const Summand& x) {
    std::map<int, int> census;
    if (const auto* e = std::get_if<Elementary>(&x)) {
        for (int c : cells(*e)) ++census[c];
    } else {
        const auto& a = std::get<SmashAtom>(x);
        for (int c1 : cells(a.left))
            for (int c2 : cells(a.right)) ++census[c1 + c2 + a.shift];
    }
    return {census.begin(), census.end()};
}

std::vector<std::pair<int, int>> cells_of(const Wedge& x) {
    std::map<int, int> census;
    for (const auto& p : x.parts())
        for (auto [c, n] : cells_of(p)) census[c] += n;
    return {census.begin(), census.end()};
}

std::string to_string(const Elementary& e) {
    auto n = std::to_string(e.dim);
    switch (e.kind) {
        case Kind::Point: return "*";
        case Kind::Sphere: return "S(" + n + ")";
        case Kind::Moore: return "M(" + std::to_string(e.p) + "^" + std::to_string(e.r) + "," + n + ")";
        case Kind::ChangEta: return "Ceta(" + n + ")";
        case Kind::ChangTop: return "Ctop(" + n + "," + std::to_string(e.s) + ")";
        case Kind::ChangBot: return "Cbot(" + std::to_string(e.r) + "," + n + ")";
        case Kind::ChangFull: return "C(" + std::to_string(e.r) + "," + n + "," + std::to_string(e.s) + ")";
    }
    return "?";
}

std::string to_string(const SmashAtom& a) {
    std::string body = to_string(a.left) + "^" + to_string(a.right);
    if (a.shift == 0) return body;
    return "susp(" + std::to_string(a.shift) + "," + body + ")";
}

std::string to_string(const Summand& x) {
    return std::visit([](const auto& v) { return to_string(v); }, x);
}

std::string to_string(const Wedge& x) {
    if (x.empty()) return "*";
    std::string out;
    for (const auto& p : x.parts()) {
        if (!out.empty()) out += " v ";
        out += to_string(p);
    }
    return out;
}

}  // namespace chang
