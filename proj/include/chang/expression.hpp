#pragma once

#include "chang/complex.hpp"
#include "chang/smash.hpp"

#include <optional>
#include <string>
#include <vector>

namespace chang {

// Syntax tree of a complex expression:
//   S(n)  M(p^r,n)  Ceta(k)  Ctop(k,s)  Cbot(r,k)  C(r,k,s)  *
//   X + Y or X v Y (wedge), X ^ Y (smash, binds tighter), susp(m,X), D(X), D(X,d), (X)
struct Expr {
    enum class Op { Leaf, Point, Wedge, Smash, Susp, Dual };
    Op op = Op::Point;
    Elementary leaf;
    std::vector<Expr> kids;
    int amount = 0;  // suspension count or explicit dual window
    bool explicit_window = false;
};

Expr parse_expression(const std::string& text);
std::string print(const Expr& e);

struct Evaluation {
    Wedge wedge;
    std::vector<Branch> branches;
};

Evaluation evaluate(const Expr& e);
Wedge parse_wedge(const std::string& text);
// Parses text that must denote a single elementary complex.
Elementary parse_elementary(const std::string& text);

}  // namespace chang
