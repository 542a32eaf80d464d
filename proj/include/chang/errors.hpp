#pragma once

#include <stdexcept>
#include <string>

namespace chang {

// The pair of elementary complexes has no rule in the smash decision table.
class UnclassifiedPair : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// No hom-table record covers the requested pair or degree.
class UntabulatedHom : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A composite of two formal generators is not in the relation table.
class UnknownComposition : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " (at offset " + std::to_string(pos) + ")"), pos_(pos) {}
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

// No consistent duality window, or a dual would leave the stable range.
class WindowError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The decomposition produced by a rule disagrees with Künneth.
class VerificationFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace chang
