// Command line front end: one subcommand per engine.
// Exit codes: 0 ok, 1 verification failure, 2 usage or parse error,
// 3 unclassified pair or untabulated hom group.

#include "chang/errors.hpp"
#include "chang/expression.hpp"
#include "chang/hom_tables.hpp"
#include "chang/invariants.hpp"
#include "chang/matrix.hpp"
#include "chang/smash.hpp"
#include "chang/verifier.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <sstream>

using namespace chang;
using ojson = nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kFailed = 1, kUsage = 2, kUntabulated = 3 };

struct Out {
    bool structured = false;
    std::ostringstream text;
    ojson doc = ojson::object();

    void emit() const {
        if (structured)
            std::cout << doc.dump(2) << "\n";
        else
            std::cout << text.str();
    }
};

std::string group_line(const std::vector<std::int64_t>& orders) {
    std::string out;
    for (auto o : orders) {
        if (o == 1) continue;
        if (!out.empty()) out += " ⊕ ";
        out += o == 0 ? "Z" : "Z/" + std::to_string(o);
    }
    return out.empty() ? "0" : out;
}

ojson graded_json(const GradedGroup& g) {
    ojson o = ojson::object();
    for (const auto& [d, grp] : g.degrees) o[std::to_string(d)] = grp;
    return o;
}

std::vector<std::string> lines_of(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

Evaluation eval_text(const std::string& t) { return evaluate(parse_expression(t)); }

int cmd_smash(Out& out, const std::string& a, const std::string& b) {
    Expr e;
    e.op = Expr::Op::Smash;
    e.kids = {parse_expression(a), parse_expression(b)};
    Evaluation ev = evaluate(e);
    out.text << to_string(ev.wedge) << "\n";
    out.doc["smash"] = to_string(ev.wedge);
    ojson br = ojson::array();
    for (const auto& x : ev.branches) {
        out.text << "branch " << x.rule << ": " << to_string(x.left) << "^" << to_string(x.right) << "\n";
        br.push_back({{"rule", x.rule}, {"left", to_string(x.left)}, {"right", to_string(x.right)}});
    }
    out.doc["branches"] = br;
    return kOk;
}

int cmd_homology(Out& out, const std::string& x) {
    GradedGroup h = integral_homology(eval_text(x).wedge);
    out.text << to_string(h) << "\n";
    out.doc["homology"] = graded_json(h);
    return kOk;
}

int cmd_cohomology(Out& out, const std::string& x, bool with_sq) {
    SqModule m = mod2_cohomology(eval_text(x).wedge);
    ojson basis = ojson::object();
    for (const auto& [d, labels] : m.basis) {
        if (labels.empty()) continue;
        out.text << "H^" << d << ":";
        for (const auto& l : labels) out.text << " " << l;
        out.text << "\n";
        basis[std::to_string(d)] = labels;
    }
    out.doc["basis"] = basis;
    if (!with_sq) return kOk;
    ojson ops = ojson::array();
    for (int k : {1, 2, 4})
        for (const auto& [d, labels] : m.basis)
            for (const auto& l : labels) {
                auto img = m.apply(k, l);
                if (img.empty()) continue;
                std::string rhs;
                for (const auto& t : img) rhs += (rhs.empty() ? "" : " + ") + t;
                out.text << "Sq" << k << " " << l << " = " << rhs << "\n";
                ops.push_back({{"op", "Sq" + std::to_string(k)}, {"class", l}, {"image", img}});
            }
    out.doc["sq"] = ops;
    return kOk;
}

int cmd_dual(Out& out, const std::string& x, std::optional<int> window) {
    Wedge w = eval_text(x).wedge;
    int d = window ? *window : infer_window(w);
    Wedge r = dual(w, d);
    out.text << to_string(r) << "\n";
    out.doc["window"] = d;
    out.doc["dual"] = to_string(r);
    return kOk;
}

// Generator orders per summand in table order, so the answer reads like the tables.
int cmd_pi(Out& out, int n, const std::string& x) {
    Wedge w = eval_text(x).wedge;
    std::vector<std::int64_t> orders;
    ojson parts = ojson::array();
    for (const auto& p : w.parts()) {
        HomGroup g = hom_group(Summand(sphere(n)), p);
        ojson gens = ojson::array();
        for (const auto& gen : g.generators) {
            orders.push_back(gen.order);
            gens.push_back({{"name", gen.name}, {"order", gen.order}});
        }
        parts.push_back({{"summand", to_string(p)}, {"generators", gens}});
    }
    out.text << group_line(orders) << "\n";
    out.doc["degree"] = n;
    out.doc["group"] = group_line(orders);
    out.doc["summands"] = parts;
    return kOk;
}

int cmd_homgroup(Out& out, const std::string& a, const std::string& b, int deg) {
    Wedge x = suspend(eval_text(a).wedge, deg);
    Wedge y = eval_text(b).wedge;
    std::vector<std::int64_t> orders;
    ojson pairs = ojson::array();
    std::ostringstream detail;
    for (const auto& p : x.parts())
        for (const auto& q : y.parts()) {
            HomGroup g = hom_group(p, q);
            ojson gens = ojson::array();
            detail << "  [" << to_string(p) << ", " << to_string(q) << "]:";
            if (g.generators.empty()) detail << " 0";
            for (const auto& gen : g.generators) {
                orders.push_back(gen.order);
                detail << " " << gen.name << " (" << (gen.order == 0 ? "Z" : "Z/" + std::to_string(gen.order)) << ")";
                gens.push_back({{"name", gen.name}, {"order", gen.order}});
            }
            detail << "\n";
            pairs.push_back({{"source", to_string(p)}, {"target", to_string(q)}, {"generators", gens}, {"cite", g.citation}});
        }
    out.text << group_line(orders) << "\n" << detail.str();
    out.doc["group"] = group_line(orders);
    out.doc["pairs"] = pairs;
    return kOk;
}

int cmd_reduce(Out& out, const std::string& file, const std::string& script_file, bool automatic,
               const std::vector<std::string>& sets) {
    MatrixProblem p = load_problem(file);
    for (const auto& kv : sets) {
        auto eq = kv.find('=');
        if (eq == std::string::npos) throw ParseError("expected name=value in '" + kv + "'", 0);
        p.params[kv.substr(0, eq)] = eval_int(kv.substr(eq + 1), {});
    }
    if (!script_file.empty()) p.script = load_script(script_file);
    if (automatic) p.script.clear();

    MatrixEngine engine;
    FormalMatrix m = instantiate(engine, p);
    bool ok = true;
    out.text << p.name;
    for (const auto& [k, v] : p.params) out.text << " " << k << "=" << v;
    out.text << "\n" << engine.render(m);
    out.doc["name"] = p.name;
    out.doc["params"] = p.params;
    out.doc["matrix"] = lines_of(engine.render(m));

    FormalMatrix r = m;
    if (!p.script.empty()) {
        r = engine.run_script(m, p.script);
        out.text << "after " << p.script.size() << " steps:\n" << engine.render(r);
        out.doc["reduced"] = lines_of(engine.render(r));
        if (!p.expect.empty()) {
            bool match = r == expected_matrix(engine, p, r);
            ok = ok && match;
            out.text << "expected grid: " << (match ? "match" : "MISMATCH") << "\n";
            out.doc["expect_match"] = match;
        }
    }

    ConeSplit cs = engine.split_cone(r);
    out.text << "cone: " << to_string(cs.pieces) << "\n";
    for (const auto& c : cs.residual_census) out.text << "residual: " << c << "\n";
    out.doc["cone"] = to_string(cs.pieces);
    out.doc["residuals"] = cs.residual_census;
    out.doc["log"] = cs.log;
    // The expected cone is stated for the scripted reduction only.
    if (!automatic && (!p.expect_cone.empty() || p.expect_residuals)) {
        Wedge want = p.expect_cone.empty() ? Wedge() : parse_wedge(fill_placeholders(p.expect_cone, p.params));
        bool match = cs.pieces == want && static_cast<int>(cs.residuals.size()) == p.expect_residuals;
        ok = ok && match;
        out.text << "expected cone: " << (match ? "match" : "MISMATCH (" + to_string(want) + ")") << "\n";
        out.doc["expect_cone_match"] = match;
    }
    return ok ? kOk : kFailed;
}

int cmd_verify(Out& out, const std::string& x, const std::string& y, const std::string& w) {
    VerificationReport v = check_decomposition(eval_text(x).wedge, eval_text(y).wedge, eval_text(w).wedge);
    auto yn = [](bool b) { return b ? "yes" : "no"; };
    out.text << "homology match: " << yn(v.homology_match) << "\n"
             << "mod 2 match: " << yn(v.mod2_match) << "\n"
             << "Sq invariants match: " << yn(v.sq_invariants_match) << "\n"
             << "Sq isomorphism: " << to_string(v.sq_iso) << "\n";
    for (const auto& n : v.obstruction_notes) out.text << "note: " << n << "\n";
    out.text << (v.ok() ? "consistent" : "REJECTED") << "\n";
    out.doc["homology_match"] = v.homology_match;
    out.doc["mod2_match"] = v.mod2_match;
    out.doc["sq_invariants_match"] = v.sq_invariants_match;
    out.doc["sq_iso"] = to_string(v.sq_iso);
    out.doc["notes"] = v.obstruction_notes;
    out.doc["ok"] = v.ok();
    return v.ok() ? kOk : kFailed;
}

int cmd_table(Out& out, int max_exponent) {
    auto pieces = base_pieces(max_exponent);
    auto hits = branch_coverage(pieces);
    int unused = 0;
    ojson rows = ojson::object();
    for (const auto& id : rule_ids()) {
        int n = hits[id];
        if (n == 0) ++unused;
        out.text << id << " " << n << "\n";
        rows[id] = n;
    }
    const auto pairs = (pieces.size() + 1) * (pieces.size() + 1);
    out.text << pairs << " pairs, " << rule_ids().size() - unused << "/" << rule_ids().size()
             << " rules fired\n";
    out.doc["pairs"] = pairs;
    out.doc["rules"] = rows;
    out.doc["unfired"] = unused;
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Smash products and wedge decompositions of small Chang complexes"};
    app.require_subcommand(1);
    std::string format = "text";
    app.add_option("--format", format, "Output rendering")->check(CLI::IsMember({"text", "structured"}));

    std::string a, b, c, file, script;
    int n = 0, deg = 0, max_exponent = 3;
    std::optional<int> window;
    bool sq = false, automatic = false, coverage = false;
    std::vector<std::string> sets;

    auto* smash = app.add_subcommand("smash", "Decompose X ^ Y into elementary pieces and atoms");
    smash->add_option("X", a)->required();
    smash->add_option("Y", b)->required();

    auto* homology = app.add_subcommand("homology", "Integral homology");
    homology->add_option("X", a)->required();

    auto* cohomology = app.add_subcommand("cohomology", "Mod 2 cohomology");
    cohomology->add_option("X", a)->required();
    cohomology->add_flag("--sq", sq, "List the Sq^1, Sq^2, Sq^4 action");

    auto* dualc = app.add_subcommand("dual", "Spanier-Whitehead dual");
    dualc->add_option("X", a)->required();
    dualc->add_option("--window", window, "Explicit window d (cells c go to d - c)");

    auto* pi = app.add_subcommand("pi", "Stable homotopy group pi_N");
    pi->add_option("N", n)->required();
    pi->add_option("X", a)->required();

    auto* homgroup = app.add_subcommand("homgroup", "Stable group [susp^N X, Y]");
    homgroup->add_option("X", a)->required();
    homgroup->add_option("Y", b)->required();
    homgroup->add_option("--deg", deg, "Suspension of the source");

    auto* reduce = app.add_subcommand("reduce", "Replay a matrix reduction and split the cone");
    reduce->add_option("FILE", file)->required()->check(CLI::ExistingFile);
    auto* script_opt = reduce->add_option("--script", script, "Step file")->check(CLI::ExistingFile);
    reduce->add_flag("--auto", automatic, "Skip the script and let the cone splitter cancel units")->excludes(script_opt);
    reduce->add_option("--set", sets, "Override a parameter, name=value");

    auto* verify = app.add_subcommand("verify", "Check W against X ^ Y");
    verify->add_option("X", a)->required();
    verify->add_option("Y", b)->required();
    verify->add_option("W", c)->required();

    auto* table = app.add_subcommand("table", "Decision table statistics");
    table->add_flag("--branch-coverage", coverage, "Count rule firings over all base pairs")->required();
    table->add_option("--max-exponent", max_exponent, "Largest exponent in the sample");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    Out out;
    out.structured = format == "structured";
    int code = kOk;
    try {
        if (*smash) code = cmd_smash(out, a, b);
        else if (*homology) code = cmd_homology(out, a);
        else if (*cohomology) code = cmd_cohomology(out, a, sq);
        else if (*dualc) code = cmd_dual(out, a, window);
        else if (*pi) code = cmd_pi(out, n, a);
        else if (*homgroup) code = cmd_homgroup(out, a, b, deg);
        else if (*reduce) code = cmd_reduce(out, file, script, automatic, sets);
        else if (*verify) code = cmd_verify(out, a, b, c);
        else if (*table) code = cmd_table(out, max_exponent);
    } catch (const UnclassifiedPair& e) {
        std::cerr << "unclassified: " << e.what() << "\n";
        return kUntabulated;
    } catch (const UntabulatedHom& e) {
        std::cerr << "untabulated: " << e.what() << "\n";
        return kUntabulated;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid: " << e.what() << "\n";
        return kUsage;
    } catch (const WindowError& e) {
        std::cerr << "window: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "failed: " << e.what() << "\n";
        return kFailed;
    }
    out.emit();
    return code;
}
