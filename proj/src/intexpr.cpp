#include "chang/intexpr.hpp"

#include "chang/errors.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

namespace chang {
namespace {

struct Cursor {
    const std::string& s;
    std::size_t i = 0;
    const Bindings& env;

    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool eat(const std::string& tok) {
        skip();
        if (s.compare(i, tok.size(), tok) == 0) {
            i += tok.size();
            return true;
        }
        return false;
    }
    bool at_end() {
        skip();
        return i >= s.size();
    }
    [[noreturn]] void fail(const std::string& what) { throw ParseError(what + " in '" + s + "'", i); }

    bool eat_minus() { return eat("-") || eat("\xE2\x88\x92"); }

    static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
    static bool ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '\'';
    }

    std::int64_t expr() {
        std::int64_t v = term();
        for (;;) {
            if (eat("+")) v += term();
            else if (eat_minus()) v -= term();
            else return v;
        }
    }
    std::int64_t term() {
        std::int64_t v = unary();
        while (eat("*")) v *= unary();
        return v;
    }
    std::int64_t unary() {
        if (eat_minus()) return -unary();
        return power();
    }
    std::int64_t power() {
        std::int64_t base = atom();
        if (eat("^")) {
            std::int64_t e = unary();
            if (e < 0) fail("negative exponent");
            std::int64_t v = 1;
            for (std::int64_t k = 0; k < e; ++k) v *= base;
            return v;
        }
        return base;
    }
    std::int64_t atom() {
        skip();
        if (i >= s.size()) fail("unexpected end");
        if (eat("(")) {
            std::int64_t v = expr();
            if (!eat(")")) fail("expected ')'");
            return v;
        }
        if (eat("{")) {
            std::int64_t v = expr();
            if (!eat("}")) fail("expected '}'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(s[i]))) {
            std::int64_t v = 0;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) v = v * 10 + (s[i++] - '0');
            return v;
        }
        if (ident_start(s[i])) {
            std::size_t b = i;
            while (i < s.size() && ident_char(s[i])) ++i;
            std::string name = s.substr(b, i - b);
            if ((name == "min" || name == "max") && eat("(")) {
                std::vector<std::int64_t> args{expr()};
                while (eat(",")) args.push_back(expr());
                if (!eat(")")) fail("expected ')'");
                return name == "min" ? *std::min_element(args.begin(), args.end())
                                     : *std::max_element(args.begin(), args.end());
            }
            auto it = env.find(name);
            if (it == env.end()) fail("unbound identifier '" + name + "'");
            return it->second;
        }
        fail("unexpected character");
    }

    // Returns 0 for none, else an operator code.
    int compare_op() {
        skip();
        static const std::vector<std::pair<std::string, int>> ops = {
            {"==", 1}, {"!=", 2}, {"<=", 3}, {">=", 4}, {"\xE2\x89\xA4", 3}, {"\xE2\x89\xA5", 4},
            {"\xE2\x89\xA0", 2}, {"=", 1}, {"<", 5}, {">", 6}};
        for (const auto& [tok, code] : ops)
            if (eat(tok)) return code;
        return 0;
    }

    bool comparison() {
        std::int64_t lhs = expr();
        int op = compare_op();
        if (op == 0) fail("expected comparison");
        bool ok = true;
        while (op != 0) {
            std::int64_t rhs = expr();
            switch (op) {
                case 1: ok = ok && lhs == rhs; break;
                case 2: ok = ok && lhs != rhs; break;
                case 3: ok = ok && lhs <= rhs; break;
                case 4: ok = ok && lhs >= rhs; break;
                case 5: ok = ok && lhs < rhs; break;
                case 6: ok = ok && lhs > rhs; break;
            }
            lhs = rhs;
            op = compare_op();
        }
        return ok;
    }
    bool keyword(const std::string& kw) {
        skip();
        if (s.compare(i, kw.size(), kw) == 0 &&
            (i + kw.size() >= s.size() || !ident_char(s[i + kw.size()]))) {
            i += kw.size();
            return true;
        }
        return false;
    }
    bool conj() {
        bool v = comparison();
        while (keyword("and") || eat("&&") || eat(",")) v = comparison() && v;
        return v;
    }
    bool disj() {
        bool v = conj();
        while (keyword("or") || eat("||")) v = conj() || v;
        return v;
    }
};

}  // namespace

std::int64_t eval_int(const std::string& text, const Bindings& env) {
    Cursor c{text, 0, env};
    std::int64_t v = c.expr();
    if (!c.at_end()) c.fail("trailing input");
    return v;
}

bool eval_pred(const std::string& text, const Bindings& env) {
    Cursor c{text, 0, env};
    if (c.at_end() || c.keyword("any") || c.keyword("true")) {
        if (!c.at_end()) c.fail("trailing input");
        return true;
    }
    bool v = c.disj();
    if (!c.at_end()) c.fail("trailing input");
    return v;
}

}  // namespace chang
