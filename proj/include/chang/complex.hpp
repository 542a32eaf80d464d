#pragma once

#include <compare>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace chang {

// Declaration order doubles as the total order on kinds.
enum class Kind { Sphere, Moore, ChangEta, ChangTop, ChangBot, ChangFull, Point };

const char* kind_name(Kind k);

// One elementary piece of an (n-1)-connected finite complex of dimension <= n+2.
//   Sphere     S^dim
//   Moore      M^dim_{p^r}      cells dim, dim+1
//   ChangEta   C_eta^dim        cells dim-2, dim
//   ChangTop   C^{dim,s}        cells dim-2, dim-1, dim
//   ChangBot   C^dim_r          cells dim-2, dim-1, dim
//   ChangFull  C^{dim,s}_r      cells dim-2, dim-1, dim-1, dim
// Unused fields are zero. Chang complexes are 2-local, so p = 2 for them.
struct Elementary {
    Kind kind = Kind::Point;
    int dim = 0;
    int r = 0;
    int s = 0;
    int p = 0;

    auto operator<=>(const Elementary&) const = default;
};

Elementary sphere(int n);
Elementary moore(int p, int r, int n);
Elementary ceta(int k);
Elementary ctop(int k, int s);
Elementary cbot(int r, int k);
Elementary cfull(int r, int k, int s);
Elementary point();

// Throws std::invalid_argument when the parameters are out of range.
void validate(const Elementary& e);

bool is_chang(const Elementary& e);
int bottom_cell(const Elementary& e);
int top_cell(const Elementary& e);
std::vector<int> cells(const Elementary& e);

// Dimension at which a kind is normalised inside smash atoms (3 for spheres/Moore, 5 for Chang).
int base_dim(Kind k);
// Returns the piece moved to its base dimension and the number of suspensions removed.
std::pair<Elementary, int> to_base(const Elementary& e);
Elementary suspend(const Elementary& e, int m);

// An indecomposable smash of two elementary pieces: Σ^shift (left ∧ right),
// with both factors at base dimension and left <= right.
struct SmashAtom {
    Elementary left;
    Elementary right;
    int shift = 0;

    auto operator<=>(const SmashAtom&) const = default;
};

// Validates that the pair is classified as indecomposable.
SmashAtom make_atom(const Elementary& a, const Elementary& b, int extra_shift = 0);
// Skips classification; for the decision table itself.
SmashAtom make_atom_unchecked(const Elementary& a, const Elementary& b, int extra_shift = 0);

int bottom_cell(const SmashAtom& a);
int top_cell(const SmashAtom& a);

// Atoms sort before elementary pieces.
using Summand = std::variant<SmashAtom, Elementary>;

int bottom_cell(const Summand& x);
int top_cell(const Summand& x);

// A finite wedge, kept sorted with points and trivial pieces removed.
class Wedge {
public:
    Wedge() = default;
    Wedge(std::vector<Summand> parts);
    Wedge(const Elementary& e);
    Wedge(const SmashAtom& a);

    const std::vector<Summand>& parts() const { return parts_; }
    bool empty() const { return parts_.empty(); }
    std::size_t size() const { return parts_.size(); }

    Wedge operator+(const Wedge& other) const;
    Wedge& operator+=(const Wedge& other);
    bool operator==(const Wedge& other) const = default;

private:
    std::vector<Summand> parts_;
};

bool classified_atom_pair(const Elementary& a, const Elementary& b);

Wedge canonicalize(const Wedge& x);
Wedge suspend(const Wedge& x, int m);

// Spanier-Whitehead dual with explicit window d: cells c go to d - c.
Elementary dual(const Elementary& e, int d);
SmashAtom dual(const SmashAtom& a, int d);
Wedge dual(const Wedge& x, int d);
// Window inferred as (lowest bottom cell) + (highest top cell). The cells must fit in
// a span of 2, or 4 when atoms are present; otherwise WindowError names the culprits.
int infer_window(const Wedge& x);
Wedge dual(const Wedge& x);

// Cell census (dimension, count), ascending by dimension, zero counts omitted.
std::vector<std::pair<int, int>> cells_of(const Wedge& x);
std::vector<std::pair<int, int>> cells_of(const Summand& x);

std::string to_string(const Elementary& e);
std::string to_string(const SmashAtom& a);
std::string to_string(const Summand& x);
// Summands joined by " v "; the empty wedge prints as "*".
std::string to_string(const Wedge& x);

}  // namespace chang
