#pragma once

#include "chang/complex.hpp"
#include "chang/graded.hpp"
#include "chang/hom_tables.hpp"
#include "chang/intexpr.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace chang {

// Integer polynomial in unknown bits b_i ∈ {0,1}; since b² = b it is multilinear,
// stored as monomial mask -> coefficient.
struct Poly {
    std::map<std::uint32_t, std::int64_t> terms;

    static Poly constant(std::int64_t c);
    static Poly bit(int index);

    bool is_zero() const { return terms.empty(); }
    std::optional<std::int64_t> as_constant() const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator-() const;
    // Coefficients into [0, order); order 0 means no reduction.
    Poly reduced(std::int64_t order) const;
    // Fixes the bits present in `mask` to the values in `values`.
    Poly substitute(std::uint32_t mask, std::uint32_t values) const;
    bool operator==(const Poly&) const = default;
};

// An element of the tabulated group [source, target], as coordinates over its named basis.
struct FormalMorphism {
    Elementary source;
    Elementary target;
    std::vector<Poly> coords;

    bool is_zero() const;
    bool operator==(const FormalMorphism&) const = default;
};

// Entry (i, j) is a map cols[j] -> rows[i]; the matrix presents a map from the wedge of
// the columns to the wedge of the rows, whose mapping cone is the complex of interest.
struct FormalMatrix {
    std::vector<Elementary> rows;
    std::vector<Elementary> cols;
    std::vector<std::vector<FormalMorphism>> entries;

    bool operator==(const FormalMatrix&) const = default;
};

// One elementary transformation. Indices are 1-based.
//   NegateRow/NegateCol      -r_n, -c_n
//   RowCompose               g r_m + r_n   (g: rows[m] -> rows[n])
//   ColCompose               k c_m f + c_n (f: cols[n] -> cols[m])
//   ScaleAddRow/ScaleAddCol  k r_m + r_n, k c_m + c_n
// Literals are kept as text and read in the right group when the step is applied.
struct TransformStep {
    enum class Kind { NegateRow, NegateCol, RowCompose, ColCompose, ScaleAddRow, ScaleAddCol };
    Kind kind = Kind::NegateRow;
    int m = 0;
    int n = 0;
    std::string morphism;  // g or f
    std::string scale;     // k; empty means 1
    std::string when;      // predicate over the parameters; empty means always

    bool operator==(const TransformStep&) const = default;
};

// Reads "[pred] g r_m + r_n", "k c_m f + c_n", "c_m(f) + c_n", "-r_n", or a JSON record
// {"kind": "ColCompose", "m": 1, "f": "i", "n": 3}.
TransformStep parse_step(const std::string& text);
std::string to_string(const TransformStep& s);
std::string to_json(const TransformStep& s);
// One step per line; blank lines and lines starting with '#' are skipped.
std::vector<TransformStep> parse_script(const std::string& text);
std::vector<TransformStep> load_script(const std::string& path);
// A step whose effect undoes s on any matrix it applies to.
TransformStep inverse(const TransformStep& s);

struct RelationRule {
    std::string outer;
    std::string inner;
    std::string objects;  // "S,M,S"-style kinds of A, B, C; empty matches anything
    std::string when;
    std::vector<std::string> bits;
    std::string result;
    std::string cite;
};

class RelationTable {
public:
    static RelationTable load(const std::string& data_dir);
    // First rule for outer ∘ inner with A -> B -> C, or nullptr.
    const RelationRule* find(const std::string& outer, const std::string& inner, const Elementary& a,
                             const Elementary& b, const Elementary& c) const;
    const std::vector<RelationRule>& rules() const { return rules_; }

private:
    std::vector<RelationRule> rules_;
};

const RelationTable& default_relation_table();

// Result of splitting a mapping cone.
struct ConeSplit {
    Wedge pieces;                         // named summands of the cone
    std::vector<FormalMatrix> residuals;  // blocks whose cone has no recognised shape
    std::vector<std::string> residual_census;
    std::vector<std::string> log;

    bool complete() const { return residuals.empty(); }
};

class MatrixEngine {
public:
    MatrixEngine();
    MatrixEngine(const HomTable& homs, const RelationTable& relations);

    // Integer parameters visible to literals, decorations and step predicates.
    Bindings params;

    // Bits are registered by name; κ, κ', ε, ε' exist from the start.
    int bit(const std::string& name);
    const std::vector<std::string>& bit_names() const { return bits_; }
    // When set, every bit read from a literal or a relation is replaced by its value.
    void fix_bits(std::map<std::string, int> values) { fixed_ = std::move(values); }

    const HomGroup& group(const Elementary& src, const Elementary& tgt) const;

    FormalMorphism zero(const Elementary& src, const Elementary& tgt) const;
    FormalMorphism parse(const std::string& literal, const Elementary& src, const Elementary& tgt);
    FormalMorphism add(const FormalMorphism& a, const FormalMorphism& b) const;
    FormalMorphism negate(const FormalMorphism& a) const;
    FormalMorphism scale(const FormalMorphism& a, const Poly& k) const;
    // outer ∘ inner. Throws UnknownComposition when a generator pair has no rule.
    FormalMorphism compose(const FormalMorphism& outer, const FormalMorphism& inner);

    FormalMatrix make_matrix(const std::vector<Elementary>& rows, const std::vector<Elementary>& cols,
                             const std::vector<std::vector<std::string>>& literals);
    FormalMatrix apply_step(const FormalMatrix& m, const TransformStep& s);
    // Steps whose predicate fails under params are skipped.
    FormalMatrix run_script(const FormalMatrix& m, const std::vector<TransformStep>& steps);

    ConeSplit split_cone(const FormalMatrix& m);
    // Cellular homology of the mapping cone.
    GradedGroup cone_homology(const FormalMatrix& m) const;

    Poly substitute(const Poly& p, const std::map<std::string, int>& values);
    FormalMorphism substitute(const FormalMorphism& f, const std::map<std::string, int>& values);
    FormalMatrix substitute(const FormalMatrix& m, const std::map<std::string, int>& values);

    std::string to_string(const Poly& p) const;
    std::string to_string(const FormalMorphism& f) const;
    std::string render(const FormalMatrix& m) const;

private:
    const HomTable* homs_;
    const RelationTable* relations_;
    std::vector<std::string> bits_;
    std::map<std::string, int> fixed_;
    mutable std::map<std::pair<Elementary, Elementary>, HomGroup> groups_;

    FormalMorphism reduce(FormalMorphism f) const;
    FormalMorphism basis_element(const Elementary& src, const Elementary& tgt, std::size_t index) const;
    FormalMorphism resolve(const std::string& outer, const std::string& inner, const Elementary& a,
                           const Elementary& b, const Elementary& c);
    std::optional<std::int64_t> unit_multiple(const FormalMorphism& f) const;
    bool recognise(const FormalMatrix& block, Wedge& out);
    Poly fix(const Poly& p);
};

// A matrix problem read from JSON: parameters, constraints, summand descriptors with
// {expr} placeholders, entry literals, and optionally a script and expected results.
struct MatrixProblem {
    std::string name;
    std::string description;
    std::string path;
    Bindings params;
    std::string constraints;
    std::vector<std::string> bits;
    std::vector<std::string> rows;
    std::vector<std::string> cols;
    std::vector<std::vector<std::string>> entries;
    std::vector<std::vector<std::string>> expect;
    std::string expect_cone;
    int expect_residuals = 0;
    std::vector<TransformStep> script;
};

MatrixProblem load_problem(const std::string& path);
// Replaces every {expr} by its integer value under env.
std::string fill_placeholders(const std::string& text, const Bindings& env);
// Sets the engine parameters, checks the constraints and builds the matrix.
FormalMatrix instantiate(MatrixEngine& engine, const MatrixProblem& problem);
// The expected grid, read in the groups of the given matrix.
FormalMatrix expected_matrix(MatrixEngine& engine, const MatrixProblem& problem, const FormalMatrix& m);

}  // namespace chang
