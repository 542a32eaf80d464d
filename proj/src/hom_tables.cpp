#include "chang/hom_tables.hpp"

#include "chang/errors.hpp"
#include "chang/intexpr.hpp"

#include <json.hpp>

#include <cstdlib>
#include <fstream>

namespace chang {

using json = nlohmann::json;

std::string data_directory() {
    if (const char* env = std::getenv("CHANG_TABLE_PATH"); env && *env) return env;
    return CHANG_DEFAULT_DATA_DIR;
}

HomTable HomTable::load(const std::string& data_dir) {
    const std::string path = data_dir + "/hom_tables.json";
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json doc = json::parse(in);
    HomTable table;
    for (const auto& r : doc.at("records")) {
        Record rec;
        rec.source = r.at("source");
        rec.target = r.at("target");
        if (r.contains("offset")) {
            rec.offset_lo = rec.offset_hi = r.at("offset").get<int>();
        } else {
            rec.offset_lo = r.at("offset_range").at(0).get<int>();
            rec.offset_hi = r.at("offset_range").at(1).get<int>();
        }
        rec.when = r.value("when", "");
        for (const auto& g : r.at("generators")) {
            std::map<std::string, std::string> fields;
            for (auto it = g.begin(); it != g.end(); ++it)
                if (it.key() != "name") fields[it.key()] = it.value().get<std::string>();
            rec.generators.emplace_back(g.at("name").get<std::string>(), fields);
        }
        if (r.contains("aliases"))
            for (auto it = r.at("aliases").begin(); it != r.at("aliases").end(); ++it)
                rec.aliases[it.key()] = it.value().get<std::vector<std::string>>();
        rec.stable_from = r.value("stable_from", 0);
        rec.cite = r.at("cite");
        rec.note = r.value("note", "");
        table.records_.push_back(std::move(rec));
    }
    return table;
}

const HomTable& default_hom_table() {
    static const HomTable table = HomTable::load(data_directory());
    return table;
}

namespace {

std::string elementary_tag(const Elementary& e) {
    switch (e.kind) {
        case Kind::Sphere: return "S";
        case Kind::Moore: return "M";
        case Kind::ChangEta: return "Ceta";
        case Kind::ChangTop: return "Ctop";
        case Kind::ChangBot: return "Cbot";
        case Kind::ChangFull: return "C";
        case Kind::Point: return "*";
    }
    return "?";
}

void bind_elementary(Bindings& env, const std::string& prefix, const Elementary& e) {
    env[prefix + "r"] = e.r;
    env[prefix + "s"] = e.s;
    env[prefix + "p"] = e.p;
}

void bind_summand(Bindings& env, const std::string& prefix, const Summand& x) {
    env[prefix + "n"] = bottom_cell(x);
    if (const auto* e = std::get_if<Elementary>(&x)) {
        bind_elementary(env, prefix, *e);
    } else {
        const auto& a = std::get<SmashAtom>(x);
        bind_elementary(env, prefix + "L.", a.left);
        bind_elementary(env, prefix + "R.", a.right);
    }
}

}  // namespace

std::string table_tag(const Summand& x) {
    if (const auto* e = std::get_if<Elementary>(&x)) return elementary_tag(*e);
    const auto& a = std::get<SmashAtom>(x);
    return elementary_tag(a.left) + "^" + elementary_tag(a.right);
}

HomGroup HomTable::lookup(const Summand& x, const Summand& y) const {
    const std::string sx = table_tag(x), sy = table_tag(y);
    const int offset = bottom_cell(x) - bottom_cell(y);
    Bindings env;
    bind_summand(env, "src.", x);
    bind_summand(env, "tgt.", y);
    for (const auto& rec : records_) {
        if (rec.source != sx || rec.target != sy) continue;
        if (offset < rec.offset_lo || offset > rec.offset_hi) continue;
        if (!eval_pred(rec.when, env)) continue;
        if (bottom_cell(y) < rec.stable_from)
            throw UntabulatedHom("[" + to_string(x) + ", " + to_string(y) + "] lies outside the stable range of its table entry");
        HomGroup g;
        g.source = to_string(x);
        g.target = to_string(y);
        for (const auto& [name, fields] : rec.generators) {
            HomGenerator gen;
            gen.name = name;
            gen.order = eval_int(fields.at("order"), env);
            if (fields.count("sub")) gen.sub = static_cast<int>(eval_int(fields.at("sub"), env));
            if (fields.count("sup")) gen.sup = static_cast<int>(eval_int(fields.at("sup"), env));
            g.generators.push_back(gen);
            g.group.push_back(gen.order);
        }
        g.group = normalize(g.group);
        g.aliases = rec.aliases;
        g.stable_from = rec.stable_from;
        g.citation = rec.cite;
        g.note = rec.note;
        return g;
    }
    throw UntabulatedHom("no table entry for [" + to_string(x) + ", " + to_string(y) + "]");
}

HomGroup hom_group(const Summand& x, const Summand& y) { return default_hom_table().lookup(x, y); }

HomGroup atom_homotopy(const SmashAtom& a, int degree) { return hom_group(sphere(degree), a); }

HomGroup atom_cohomotopy(const SmashAtom& a, int degree) { return hom_group(a, sphere(degree)); }

CyclicList wedge_hom_order(const Wedge& x, const Wedge& y, int shift) {
    CyclicList out;
    Wedge sx = suspend(x, shift);
    for (const auto& p : sx.parts())
        for (const auto& q : y.parts()) {
            HomGroup g = hom_group(p, q);
            out.insert(out.end(), g.group.begin(), g.group.end());
        }
    return normalize(out);
}

CyclicList homotopy_group(int n, const Wedge& x) { return wedge_hom_order(Wedge(sphere(n)), x); }

}  // namespace chang
