#pragma once

#include "chang/complex.hpp"
#include "chang/graded.hpp"

#include <map>
#include <string>
#include <vector>

namespace chang {

struct HomGenerator {
    std::string name;
    std::int64_t order = 0;  // 0 is Z
    // Evaluated decorations, e.g. the r and s of ξ_r^s; -1 when absent.
    int sub = -1;
    int sup = -1;
};

// A tabulated stable group [X, Y] with a named basis.
struct HomGroup {
    std::string source;
    std::string target;
    CyclicList group;
    std::vector<HomGenerator> generators;
    // Further named elements as coefficient expressions over the generators (may involve unknown bits).
    std::map<std::string, std::vector<std::string>> aliases;
    int stable_from = 0;
    std::string citation;
    std::string note;
};

class HomTable {
public:
    // Reads hom_tables.json from a data directory.
    static HomTable load(const std::string& data_dir);

    // [X, Y] for single summands. Throws UntabulatedHom when no record applies.
    HomGroup lookup(const Summand& x, const Summand& y) const;

    std::size_t size() const { return records_.size(); }

    struct Record {
        std::string source;
        std::string target;
        int offset_lo = 0;
        int offset_hi = 0;
        std::string when;
        std::vector<std::pair<std::string, std::map<std::string, std::string>>> generators;
        std::map<std::string, std::vector<std::string>> aliases;
        int stable_from = 0;
        std::string cite;
        std::string note;
    };
    const std::vector<Record>& records() const { return records_; }

private:
    std::vector<Record> records_;
};

// Directory holding the data files: CHANG_TABLE_PATH when set, else the build-time default.
std::string data_directory();
const HomTable& default_hom_table();

// Kind tag used by the table, e.g. "M", "C", "Ceta^C".
std::string table_tag(const Summand& x);

HomGroup hom_group(const Summand& x, const Summand& y);
// π_degree of an atom, and [atom, S^degree].
HomGroup atom_homotopy(const SmashAtom& a, int degree);
HomGroup atom_cohomotopy(const SmashAtom& a, int degree);

// [Σ^shift X, Y] as the direct sum over pairs of summands. [X, *] = [*, Y] = 0.
CyclicList wedge_hom_order(const Wedge& x, const Wedge& y, int shift = 0);
// π_n of a wedge.
CyclicList homotopy_group(int n, const Wedge& x);

}  // namespace chang
