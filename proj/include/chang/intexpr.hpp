#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace chang {

using Bindings = std::map<std::string, std::int64_t>;

// Tiny integer expression language used by the data files.
//   expr  := term (('+'|'-') term)*
//   term  := unary ('*' unary)*
//   unary := '-' unary | power
//   power := atom ('^' unary)?
//   atom  := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')' | '{' expr '}'
// Identifiers may contain letters, digits, '_', '.', and primes; functions are min and max.
std::int64_t eval_int(const std::string& text, const Bindings& env);

// Predicates: comparisons (chains allowed, "r = t = 1"), joined by "and"/"or"/"&&"/"||"/",".
// Empty text, "any" and "true" are true.
bool eval_pred(const std::string& text, const Bindings& env);

}  // namespace chang
