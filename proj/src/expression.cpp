#include "chang/expression.hpp"

#include "chang/errors.hpp"

#include <cctype>
#include <stdexcept>

namespace chang {
namespace {

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    Expr parse_all() {
        Expr e = wedge();
        skip();
        if (i_ < s_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    const std::string& s_;
    std::size_t i_ = 0;

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, i_); }

    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool eat(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }
    std::string ident() {
        skip();
        std::size_t b = i_;
        while (i_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[i_]))) ++i_;
        return s_.substr(b, i_ - b);
    }
    bool peek_wedge_v() {
        skip();
        if (i_ < s_.size() && s_[i_] == 'v' && (i_ + 1 >= s_.size() || !std::isalnum(static_cast<unsigned char>(s_[i_ + 1])))) {
            ++i_;
            return true;
        }
        return false;
    }
    int integer() {
        skip();
        bool neg = false;
        if (i_ < s_.size() && s_[i_] == '-') {
            neg = true;
            ++i_;
        }
        if (i_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[i_]))) fail("expected an integer");
        long v = 0;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
            v = v * 10 + (s_[i_++] - '0');
            if (v > 1000000) fail("integer too large");
        }
        return static_cast<int>(neg ? -v : v);
    }

    Expr wedge() {
        Expr first = smash();
        if (!(peek_plus() || peek_wedge_v())) return first;
        Expr w;
        w.op = Expr::Op::Wedge;
        w.kids.push_back(first);
        do {
            w.kids.push_back(smash());
        } while (peek_plus() || peek_wedge_v());
        return w;
    }
    bool peek_plus() { return eat('+'); }

    Expr smash() {
        Expr left = primary();
        while (eat('^')) {
            Expr s;
            s.op = Expr::Op::Smash;
            s.kids = {left, primary()};
            left = s;
        }
        return left;
    }

    Expr leaf(const Elementary& e) {
        Expr x;
        x.op = Expr::Op::Leaf;
        x.leaf = e;
        return x;
    }

    template <class F>
    Expr build(F&& f, std::size_t at) {
        try {
            return leaf(f());
        } catch (const std::invalid_argument& ex) {
            throw ParseError(ex.what(), at);
        }
    }

    Expr primary() {
        skip();
        if (eat('(')) {
            Expr e = wedge();
            expect(')');
            return e;
        }
        if (eat('*')) {
            Expr p;
            p.op = Expr::Op::Point;
            return p;
        }
        const std::size_t at = i_;
        const std::string name = ident();
        if (name.empty()) fail("expected a complex");
        if (name == "pt") {
            Expr p;
            p.op = Expr::Op::Point;
            return p;
        }
        expect('(');
        Expr out;
        if (name == "S") {
            int n = integer();
            out = build([&] { return sphere(n); }, at);
        } else if (name == "M") {
            int q = integer();
            int r = 1;
            if (eat('^')) r = integer();
            expect(',');
            int n = integer();
            // M(q,n) with q a prime power is accepted as well.
            int p = q;
            if (r == 1)
                for (int d = 2; d * d <= q; ++d)
                    if (q % d == 0) {
                        int k = 0, t = q;
                        while (t % d == 0) {
                            t /= d;
                            ++k;
                        }
                        if (t != 1) fail("Moore order must be a prime power");
                        p = d;
                        r = k;
                        break;
                    }
            out = build([&] { return moore(p, r, n); }, at);
        } else if (name == "Ceta") {
            int k = integer();
            out = build([&] { return ceta(k); }, at);
        } else if (name == "Ctop") {
            int k = integer();
            expect(',');
            int s = integer();
            out = build([&] { return ctop(k, s); }, at);
        } else if (name == "Cbot") {
            int r = integer();
            expect(',');
            int k = integer();
            out = build([&] { return cbot(r, k); }, at);
        } else if (name == "C") {
            int r = integer();
            expect(',');
            int k = integer();
            expect(',');
            int s = integer();
            out = build([&] { return cfull(r, k, s); }, at);
        } else if (name == "susp") {
            out.op = Expr::Op::Susp;
            out.amount = integer();
            expect(',');
            out.kids.push_back(wedge());
        } else if (name == "D") {
            out.op = Expr::Op::Dual;
            out.kids.push_back(wedge());
            if (eat(',')) {
                out.explicit_window = true;
                out.amount = integer();
            }
        } else {
            i_ = at;
            fail("unknown constructor '" + name + "'");
        }
        expect(')');
        return out;
    }
};

}  // namespace

Expr parse_expression(const std::string& text) { return Parser(text).parse_all(); }

std::string print(const Expr& e) {
    switch (e.op) {
        case Expr::Op::Leaf: return to_string(e.leaf);
        case Expr::Op::Point: return "*";
        case Expr::Op::Wedge: {
            std::string out;
            for (const auto& k : e.kids) {
                if (!out.empty()) out += " v ";
                out += print(k);
            }
            return out;
        }
        case Expr::Op::Smash: {
            auto side = [](const Expr& k) {
                return k.op == Expr::Op::Wedge ? "(" + print(k) + ")" : print(k);
            };
            return side(e.kids[0]) + "^" + side(e.kids[1]);
        }
        case Expr::Op::Susp: return "susp(" + std::to_string(e.amount) + "," + print(e.kids[0]) + ")";
        case Expr::Op::Dual:
            return "D(" + print(e.kids[0]) + (e.explicit_window ? "," + std::to_string(e.amount) : "") + ")";
    }
    return "?";
}

Evaluation evaluate(const Expr& e) {
    Evaluation out;
    switch (e.op) {
        case Expr::Op::Leaf: out.wedge = Wedge(e.leaf); break;
        case Expr::Op::Point: break;
        case Expr::Op::Wedge:
            for (const auto& k : e.kids) {
                Evaluation sub = evaluate(k);
                out.wedge += sub.wedge;
                out.branches.insert(out.branches.end(), sub.branches.begin(), sub.branches.end());
            }
            break;
        case Expr::Op::Smash: {
            Evaluation l = evaluate(e.kids[0]);
            Evaluation r = evaluate(e.kids[1]);
            SmashResult s = smash_decompose(l.wedge, r.wedge);
            out.wedge = s.wedge;
            out.branches = l.branches;
            out.branches.insert(out.branches.end(), r.branches.begin(), r.branches.end());
            out.branches.insert(out.branches.end(), s.branches.begin(), s.branches.end());
            break;
        }
        case Expr::Op::Susp: {
            out = evaluate(e.kids[0]);
            out.wedge = suspend(out.wedge, e.amount);
            break;
        }
        case Expr::Op::Dual: {
            out = evaluate(e.kids[0]);
            out.wedge = e.explicit_window ? dual(out.wedge, e.amount) : dual(out.wedge);
            break;
        }
    }
    return out;
}

Wedge parse_wedge(const std::string& text) { return evaluate(parse_expression(text)).wedge; }

Elementary parse_elementary(const std::string& text) {
    Wedge w = parse_wedge(text);
    if (w.size() != 1 || !std::holds_alternative<Elementary>(w.parts().front()))
        throw ParseError("expected a single elementary complex in '" + text + "'", 0);
    return std::get<Elementary>(w.parts().front());
}

}  // namespace chang
