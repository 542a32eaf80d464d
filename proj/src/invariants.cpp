#include "chang/invariants.hpp"

namespace chang {

GradedGroup integral_homology(const Elementary& e) {
    GradedGroup h;
    const int n = e.dim;
    auto two = [](int k) { return std::int64_t{1} << k; };
    switch (e.kind) {
        case Kind::Point: break;
        case Kind::Sphere: h.add(n, 0); break;
        case Kind::Moore: {
            std::int64_t q = 1;
            for (int i = 0; i < e.r; ++i) q *= e.p;
            h.add(n, q);
            break;
        }
        case Kind::ChangEta:
            h.add(n - 2, 0);
            h.add(n, 0);
            break;
        case Kind::ChangTop:
            h.add(n - 2, 0);
            h.add(n - 1, two(e.s));
            break;
        case Kind::ChangBot:
            h.add(n - 2, two(e.r));
            h.add(n, 0);
            break;
        case Kind::ChangFull:
            h.add(n - 2, two(e.r));
            h.add(n - 1, two(e.s));
            break;
    }
    return h;
}

GradedGroup integral_homology(const SmashAtom& a) {
    return kunneth(integral_homology(a.left), integral_homology(a.right)).shifted(a.shift);
}

GradedGroup integral_homology(const Wedge& x) {
    GradedGroup h;
    for (const auto& p : x.parts())
        h += std::visit([](const auto& v) { return integral_homology(v); }, p);
    return h;
}

namespace {

F2Matrix scalar(bool v) {
    F2Matrix m(1, 1);
    m.set(0, 0, v);
    return m;
}

}  // namespace

SqModule mod2_cohomology(const Elementary& e, const std::string& letter, const std::string& suffix) {
    SqModule m;
    const int n = e.dim;
    auto name = [&](int d, bool bar = false) {
        return (bar ? letter + "\xCC\x84" : letter) + std::to_string(d) + suffix;
    };
    switch (e.kind) {
        case Kind::Point: break;
        case Kind::Sphere: m.basis[n] = {name(n)}; break;
        case Kind::Moore:
            if (e.p != 2) break;
            m.basis[n] = {name(n)};
            m.basis[n + 1] = {name(n + 1)};
            if (e.r == 1) m.set_op(1, n, scalar(true));
            break;
        case Kind::ChangEta:
            m.basis[n - 2] = {name(n - 2)};
            m.basis[n] = {name(n)};
            m.set_op(2, n - 2, scalar(true));
            break;
        case Kind::ChangTop:
            m.basis[n - 2] = {name(n - 2)};
            m.basis[n - 1] = {name(n - 1)};
            m.basis[n] = {name(n)};
            m.set_op(2, n - 2, scalar(true));
            if (e.s == 1) m.set_op(1, n - 1, scalar(true));
            break;
        case Kind::ChangBot:
            m.basis[n - 2] = {name(n - 2)};
            m.basis[n - 1] = {name(n - 1)};
            m.basis[n] = {name(n)};
            m.set_op(2, n - 2, scalar(true));
            if (e.r == 1) m.set_op(1, n - 2, scalar(true));
            break;
        case Kind::ChangFull: {
            // v_{n-1} is hit from below when r = 1; its partner v̄_{n-1} hits the top class when s = 1.
            m.basis[n - 2] = {name(n - 2)};
            m.basis[n - 1] = {name(n - 1), name(n - 1, true)};
            m.basis[n] = {name(n)};
            m.set_op(2, n - 2, scalar(true));
            if (e.r == 1) {
                F2Matrix up(2, 1);
                up.set(0, 0, true);
                m.set_op(1, n - 2, up);
            }
            if (e.s == 1) {
                F2Matrix top(1, 2);
                top.set(0, 1, true);
                m.set_op(1, n - 1, top);
            }
            break;
        }
    }
    return m;
}

SqModule mod2_cohomology(const SmashAtom& a) {
    return cartan(mod2_cohomology(a.left, "u"), mod2_cohomology(a.right, "v")).shifted(a.shift);
}

SqModule mod2_cohomology(const Wedge& x) {
    SqModule out;
    int index = 0;
    for (const auto& p : x.parts()) {
        SqModule piece = std::visit([](const auto& v) { return mod2_cohomology(v); }, p);
        out = direct_sum(out, piece.relabeled(std::to_string(index++) + ":", ""));
    }
    return out;
}

std::map<int, int> poincare_series(const Wedge& x) { return mod2_cohomology(x).poincare(); }

}  // namespace chang
