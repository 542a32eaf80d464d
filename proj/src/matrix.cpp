#include "chang/matrix.hpp"

#include "chang/errors.hpp"
#include "chang/expression.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <regex>
#include <set>
#include <sstream>
#include <tuple>
#include <utility>

namespace chang {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Poly

Poly Poly::constant(std::int64_t c) {
    Poly p;
    if (c != 0) p.terms[0] = c;
    return p;
}

Poly Poly::bit(int index) {
    if (index < 0 || index >= 32) throw std::out_of_range("bit index");
    Poly p;
    p.terms[1u << index] = 1;
    return p;
}

std::optional<std::int64_t> Poly::as_constant() const {
    if (terms.empty()) return 0;
    if (terms.size() == 1 && terms.begin()->first == 0) return terms.begin()->second;
    return std::nullopt;
}

Poly Poly::operator+(const Poly& o) const {
    Poly out = *this;
    for (const auto& [m, c] : o.terms) {
        auto& slot = out.terms[m];
        slot += c;
        if (slot == 0) out.terms.erase(m);
    }
    return out;
}

Poly Poly::operator-() const {
    Poly out = *this;
    for (auto& [m, c] : out.terms) c = -c;
    return out;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
    Poly out;
    for (const auto& [m1, c1] : terms)
        for (const auto& [m2, c2] : o.terms) out = out + [&] {
            Poly t;
            t.terms[m1 | m2] = c1 * c2;  // b^2 = b
            return t;
        }();
    return out;
}

Poly Poly::reduced(std::int64_t order) const {
    if (order == 0) return *this;
    Poly out;
    for (const auto& [m, c] : terms) {
        std::int64_t v = ((c % order) + order) % order;
        if (v != 0) out.terms[m] = v;
    }
    return out;
}

Poly Poly::substitute(std::uint32_t mask, std::uint32_t values) const {
    Poly out;
    for (const auto& [m, c] : terms) {
        if ((m & mask & ~values) != 0) continue;  // some fixed bit is 0
        Poly t;
        t.terms[m & ~mask] = c;
        out = out + t;
    }
    return out;
}

bool FormalMorphism::is_zero() const {
    return std::all_of(coords.begin(), coords.end(), [](const Poly& p) { return p.is_zero(); });
}

// ---------------------------------------------------------------------------
// Literal reader

namespace {

struct Spelling {
    const char* text;
    const char* canonical;
};

// ASCII spellings rewritten before tokenising. Longer words first.
const Spelling kWords[] = {
    {"varrho", "ϱ"}, {"epsilon", "ε"}, {"lambda", "λ"}, {"kappa", "κ"}, {"wedge", "∧"},
    {"eps", "ε"},    {"rho", "ρ"},     {"eta", "η"},    {"chi", "χ"},   {"xi", "ξ"},
    {"/\\", "∧"},    {"−", "-"},
};

// Generator names, longest first after sorting.
const Spelling kGenerators[] = {
    {"1∧η", "1∧η"},   {"η∧1", "η∧1"},   {"λ_{11}", "λ11"}, {"λ11", "λ11"}, {"B(χ)", "B(χ)"},
    {"iηηq", "iηηq"}, {"iηη", "iηη"},   {"iηq", "iηq"},    {"iη", "iη"},   {"iϱ", "iϱ"},
    {"iq", "iq"},     {"ηηq", "ηηq"},   {"ηη", "ηη"},      {"ηq", "ηq"},   {"η", "η"},
    {"ξ", "ξ"},       {"ϱ", "ϱ"},       {"ρ", "ρ"},        {"id", "1"},    {"i", "i"},
    {"q", "q"},
};

std::string normalise_literal(std::string s) {
    for (const auto& w : kWords) {
        std::string from = w.text;
        for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos)) {
            s.replace(pos, from.size(), w.canonical);
            pos += std::string(w.canonical).size();
        }
    }
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) out += c;
    return out;
}

bool starts_with(const std::string& s, std::size_t at, const std::string& p) {
    return s.compare(at, p.size(), p) == 0;
}

std::vector<Spelling> sorted_generators() {
    std::vector<Spelling> v(std::begin(kGenerators), std::end(kGenerators));
    std::stable_sort(v.begin(), v.end(), [](const Spelling& a, const Spelling& b) {
        return std::string(a.text).size() > std::string(b.text).size();
    });
    return v;
}

const std::vector<Spelling>& generators_by_length() {
    static const std::vector<Spelling> v = sorted_generators();
    return v;
}

struct Value {
    bool has_generator = false;
    Poly scalar;               // when !has_generator
    std::vector<Poly> coords;  // when has_generator
};

std::size_t utf8_width(const std::string& s) {
    std::size_t w = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto c = static_cast<unsigned char>(s[i]);
        if ((c & 0xC0) == 0x80) continue;
        // combining diacritics U+0300..U+036F
        if (c == 0xCC || (c == 0xCD && i + 1 < s.size() && static_cast<unsigned char>(s[i + 1]) < 0xB0)) continue;
        ++w;
    }
    return w;
}

std::string pad(const std::string& s, std::size_t width) {
    const std::size_t w = utf8_width(s);
    return s + std::string(width > w ? width - w : 0, ' ');
}

}  // namespace

// Recursive descent over a normalised literal.
//   sum    := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor+
//   factor := number ['^' exponent] | bit | generator decorations | '(' sum ')'
class LiteralReader {
public:
    LiteralReader(MatrixEngine& engine, const std::string& text, const HomGroup* group)
        : engine_(engine), s_(normalise_literal(text)), group_(group) {}

    Value read() {
        if (s_.empty()) throw ParseError("empty literal", 0);
        Value v = sum();
        if (i_ < s_.size()) fail("unexpected '" + s_.substr(i_, 1) + "'");
        return v;
    }

    // True when the text names a generator anywhere.
    static bool mentions_generator(const std::string& text) {
        const std::string s = normalise_literal(text);
        for (std::size_t i = 0; i < s.size(); ++i)
            for (const auto& g : generators_by_length()) {
                if (!starts_with(s, i, g.text)) continue;
                const std::string name = g.text;
                // "i" and "q" only count when not part of an identifier like "id" handled above
                if ((name == "i" || name == "q") && i > 0 && std::isalpha(static_cast<unsigned char>(s[i - 1])))
                    continue;
                return true;
            }
        return false;
    }

private:
    MatrixEngine& engine_;
    std::string s_;
    const HomGroup* group_;
    std::size_t i_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(what + " in literal '" + s_ + "'", i_);
    }

    bool at(const std::string& p) const { return starts_with(s_, i_, p); }

    std::size_t dim() const { return group_ ? group_->generators.size() : 0; }

    std::vector<Poly> lift(const Poly& k) const {
        if (!group_) fail("a generator is not allowed here");
        std::vector<Poly> out(dim());
        if (k.is_zero()) return out;
        for (std::size_t g = 0; g < dim(); ++g)
            if (group_->generators[g].name == "1") {
                out[g] = k;
                return out;
            }
        fail("no identity in [" + group_->source + ", " + group_->target + "]");
    }

    Value add(Value a, const Value& b) const {
        if (!a.has_generator && !b.has_generator) {
            a.scalar = a.scalar + b.scalar;
            return a;
        }
        std::vector<Poly> x = a.has_generator ? a.coords : lift(a.scalar);
        std::vector<Poly> y = b.has_generator ? b.coords : lift(b.scalar);
        for (std::size_t g = 0; g < x.size(); ++g) x[g] = x[g] + y[g];
        Value out;
        out.has_generator = true;
        out.coords = x;
        return out;
    }

    Value mul(Value a, const Value& b) const {
        if (a.has_generator && b.has_generator) fail("a term may hold one generator only");
        if (!a.has_generator && !b.has_generator) {
            a.scalar = a.scalar * b.scalar;
            return a;
        }
        const Value& vec = a.has_generator ? a : b;
        const Poly& k = a.has_generator ? b.scalar : a.scalar;
        Value out = vec;
        for (auto& c : out.coords) c = c * k;
        return out;
    }

    Value negate(Value v) const {
        if (v.has_generator)
            for (auto& c : v.coords) c = -c;
        else
            v.scalar = -v.scalar;
        return v;
    }

    Value sum() {
        Value total;
        bool first = true;
        while (true) {
            bool neg = false;
            if (at("+")) {
                ++i_;
            } else if (at("-")) {
                neg = true;
                ++i_;
            } else if (!first) {
                break;
            }
            Value t = term();
            total = first && !neg ? t : add(total, neg ? negate(t) : t);
            first = false;
        }
        return total;
    }

    bool factor_start() const {
        if (i_ >= s_.size()) return false;
        const char c = s_[i_];
        return c != '+' && c != '-' && c != ')' && c != '}';
    }

    Value term() {
        if (!factor_start()) fail("expected a term");
        Value v = factor();
        while (factor_start()) v = mul(v, factor());
        return v;
    }

    std::string braced_or_token() {
        if (at("{")) {
            int depth = 0;
            std::size_t b = i_;
            for (; i_ < s_.size(); ++i_) {
                if (s_[i_] == '{') ++depth;
                if (s_[i_] == '}' && --depth == 0) break;
            }
            if (i_ >= s_.size()) fail("unbalanced '{'");
            ++i_;
            return s_.substr(b + 1, i_ - b - 2);
        }
        std::size_t b = i_;
        if (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        } else if (i_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[i_]))) {
            ++i_;
            while (i_ < s_.size() && s_[i_] == '\'') ++i_;
        } else {
            fail("expected an exponent or index");
        }
        return s_.substr(b, i_ - b);
    }

    std::int64_t evaluate(const std::string& text) {
        try {
            return eval_int(text, engine_.params);
        } catch (const std::exception& ex) {
            fail(std::string("cannot evaluate '") + text + "': " + ex.what());
        }
    }

    Value factor() {
        if (at("(")) {
            ++i_;
            Value v = sum();
            if (!at(")")) fail("expected ')'");
            ++i_;
            return v;
        }
        for (const auto& g : generators_by_length()) {
            if (!at(g.text)) continue;
            i_ += std::string(g.text).size();
            return generator(g.canonical);
        }
        if (std::isdigit(static_cast<unsigned char>(s_[i_]))) {
            std::size_t b = i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            std::int64_t base = std::stoll(s_.substr(b, i_ - b));
            Value v;
            if (at("^")) {
                ++i_;
                std::int64_t e = evaluate(braced_or_token());
                if (e < 0 || e > 62) fail("exponent out of range");
                std::int64_t p = 1;
                for (std::int64_t k = 0; k < e; ++k) p *= base;
                base = p;
            }
            v.scalar = Poly::constant(base);
            return v;
        }
        // bits, longest registered name first
        std::string best;
        for (const auto& name : engine_.bit_names())
            if (at(name) && name.size() > best.size()) best = name;
        if (!best.empty()) {
            i_ += best.size();
            Value v;
            v.scalar = engine_bit(best);
            return v;
        }
        fail("unknown symbol");
    }

    Poly engine_bit(const std::string& name);

    Value generator(const std::string& name) {
        std::optional<std::int64_t> sub, sup;
        while (at("_") || at("^")) {
            const bool is_sub = at("_");
            ++i_;
            std::int64_t v = evaluate(braced_or_token());
            (is_sub ? sub : sup) = v;
        }
        Value out;
        if (name == "1") {
            out.scalar = Poly::constant(1);
            return out;
        }
        if (!group_) fail("a generator is not allowed here");
        out.has_generator = true;
        out.coords.assign(dim(), Poly{});
        for (std::size_t g = 0; g < dim(); ++g) {
            const auto& gen = group_->generators[g];
            if (gen.name != name) continue;
            if (sub && gen.sub >= 0 && *sub != gen.sub) fail("index _" + std::to_string(*sub) + " does not fit " + name);
            if (sup && gen.sup >= 0 && *sup != gen.sup) fail("index ^" + std::to_string(*sup) + " does not fit " + name);
            out.coords[g] = Poly::constant(1);
            return out;
        }
        auto it = group_->aliases.find(name);
        if (it == group_->aliases.end())
            fail("'" + name + "' is not an element of [" + group_->source + ", " + group_->target + "]");
        for (std::size_t g = 0; g < dim() && g < it->second.size(); ++g) {
            LiteralReader inner(engine_, it->second[g], nullptr);
            Value c = inner.read();
            out.coords[g] = c.scalar;
        }
        return out;
    }
};

Poly LiteralReader::engine_bit(const std::string& name) { return Poly::bit(engine_.bit(name)); }

// ---------------------------------------------------------------------------
// Steps

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string unwrap(std::string s) {
    s = trim(s);
    if (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
        int depth = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '(') ++depth;
            if (s[i] == ')' && --depth == 0 && i + 1 < s.size()) return s;
        }
        return trim(s.substr(1, s.size() - 2));
    }
    return s;
}

const char* kind_label(TransformStep::Kind k) {
    switch (k) {
        case TransformStep::Kind::NegateRow: return "NegateRow";
        case TransformStep::Kind::NegateCol: return "NegateCol";
        case TransformStep::Kind::RowCompose: return "RowCompose";
        case TransformStep::Kind::ColCompose: return "ColCompose";
        case TransformStep::Kind::ScaleAddRow: return "ScaleAddRow";
        case TransformStep::Kind::ScaleAddCol: return "ScaleAddCol";
    }
    return "?";
}

TransformStep step_from_json(const json& j) {
    TransformStep s;
    const std::string kind = j.at("kind");
    static const std::map<std::string, TransformStep::Kind> kinds = {
        {"NegateRow", TransformStep::Kind::NegateRow},     {"NegateCol", TransformStep::Kind::NegateCol},
        {"RowCompose", TransformStep::Kind::RowCompose},   {"ColCompose", TransformStep::Kind::ColCompose},
        {"ScaleAddRow", TransformStep::Kind::ScaleAddRow}, {"ScaleAddCol", TransformStep::Kind::ScaleAddCol},
    };
    auto it = kinds.find(kind);
    if (it == kinds.end()) throw ParseError("unknown step kind '" + kind + "'", 0);
    s.kind = it->second;
    s.n = j.at("n").get<int>();
    s.m = j.value("m", 0);
    if (j.contains("g")) s.morphism = j.at("g").get<std::string>();
    if (j.contains("f")) s.morphism = j.at("f").get<std::string>();
    if (j.contains("k")) {
        s.scale = j.at("k").is_string() ? j.at("k").get<std::string>() : std::to_string(j.at("k").get<long long>());
    }
    s.when = j.value("when", "");
    const bool adds = s.kind != TransformStep::Kind::NegateRow && s.kind != TransformStep::Kind::NegateCol;
    if (adds && s.m == s.n) throw ParseError("a step may not add a line to itself", 0);
    if (s.n < 1 || (adds && s.m < 1)) throw ParseError("step indices start at 1", 0);
    if (s.kind == TransformStep::Kind::RowCompose && s.morphism.empty())
        throw ParseError("RowCompose needs a morphism g", 0);
    if (s.kind == TransformStep::Kind::ColCompose && s.morphism.empty())
        throw ParseError("ColCompose needs a morphism f", 0);
    if ((s.kind == TransformStep::Kind::ScaleAddRow || s.kind == TransformStep::Kind::ScaleAddCol) && s.scale.empty())
        s.scale = "1";
    return s;
}

}  // namespace

TransformStep parse_step(const std::string& raw) {
    std::string text = trim(raw);
    if (!text.empty() && text.front() == '{') {
        try {
            return step_from_json(json::parse(text));
        } catch (const json::exception& ex) {
            throw ParseError(std::string("bad step record: ") + ex.what(), 0);
        }
    }
    TransformStep s;
    if (!text.empty() && text.front() == '[') {
        auto close = text.find(']');
        if (close == std::string::npos) throw ParseError("unclosed '[' in step", 0);
        s.when = trim(text.substr(1, close - 1));
        text = trim(text.substr(close + 1));
    }
    for (std::size_t pos = text.find("−"); pos != std::string::npos; pos = text.find("−")) text.replace(pos, 3, "-");

    static const std::regex negate(R"(^-\s*([rc])_\{?(\d+)\}?$)");
    static const std::regex tail(R"(\+\s*([rc])_\{?(\d+)\}?\s*$)");
    static const std::regex head(R"((^|[^A-Za-z0-9_'])([rc])_\{?(\d+)\}?)");
    std::smatch mt;
    if (std::regex_match(text, mt, negate)) {
        s.kind = mt[1] == "r" ? TransformStep::Kind::NegateRow : TransformStep::Kind::NegateCol;
        s.n = std::stoi(mt[2]);
        return s;
    }
    std::smatch mtail;
    if (!std::regex_search(text, mtail, tail)) throw ParseError("expected '+ r_n' or '+ c_n' at the end of '" + raw + "'", text.size());
    const std::string body = text.substr(0, static_cast<std::size_t>(mtail.position(0)));
    std::smatch mhead;
    if (!std::regex_search(body, mhead, head)) throw ParseError("expected r_m or c_m in '" + raw + "'", 0);
    if (mhead[2] != mtail[1]) throw ParseError("a step mixes rows and columns: '" + raw + "'", 0);
    const bool row = mhead[2] == "r";
    s.m = std::stoi(mhead[3]);
    s.n = std::stoi(mtail[2]);
    if (s.m == s.n) throw ParseError("a step may not add a line to itself", 0);
    const std::size_t split = static_cast<std::size_t>(mhead.position(0)) + mhead[1].length();
    const std::string before = trim(body.substr(0, split));
    const std::string after = trim(body.substr(split + mhead[0].length() - mhead[1].length()));
    if (row) {
        if (!after.empty()) throw ParseError("a row step composes on the left: '" + raw + "'", split);
        if (before.empty() || !LiteralReader::mentions_generator(before)) {
            s.kind = TransformStep::Kind::ScaleAddRow;
            s.scale = before.empty() ? "1" : unwrap(before);
        } else {
            s.kind = TransformStep::Kind::RowCompose;
            s.morphism = unwrap(before);
        }
    } else {
        if (after.empty()) {
            s.kind = TransformStep::Kind::ScaleAddCol;
            s.scale = before.empty() ? "1" : unwrap(before);
        } else {
            s.kind = TransformStep::Kind::ColCompose;
            s.morphism = unwrap(after);
            s.scale = before.empty() ? "" : unwrap(before);
        }
    }
    return s;
}

std::string to_string(const TransformStep& s) {
    std::string out = s.when.empty() ? "" : "[" + s.when + "] ";
    auto wrap = [](const std::string& t) {
        return t.find_first_of("+-") == std::string::npos ? t : "(" + t + ")";
    };
    const std::string m = std::to_string(s.m), n = std::to_string(s.n);
    switch (s.kind) {
        case TransformStep::Kind::NegateRow: return out + "-r_" + n;
        case TransformStep::Kind::NegateCol: return out + "-c_" + n;
        case TransformStep::Kind::RowCompose: return out + wrap(s.morphism) + " r_" + m + " + r_" + n;
        case TransformStep::Kind::ScaleAddRow: return out + wrap(s.scale) + " r_" + m + " + r_" + n;
        case TransformStep::Kind::ScaleAddCol: return out + wrap(s.scale) + " c_" + m + " + c_" + n;
        case TransformStep::Kind::ColCompose:
            return out + (s.scale.empty() ? "" : wrap(s.scale) + " ") + "c_" + m + "(" + s.morphism + ") + c_" + n;
    }
    return out;
}

std::string to_json(const TransformStep& s) {
    json j;
    j["kind"] = kind_label(s.kind);
    if (s.kind != TransformStep::Kind::NegateRow && s.kind != TransformStep::Kind::NegateCol) j["m"] = s.m;
    j["n"] = s.n;
    if (s.kind == TransformStep::Kind::RowCompose) j["g"] = s.morphism;
    if (s.kind == TransformStep::Kind::ColCompose) j["f"] = s.morphism;
    if (!s.scale.empty()) j["k"] = s.scale;
    if (!s.when.empty()) j["when"] = s.when;
    return j.dump();
}

std::vector<TransformStep> parse_script(const std::string& text) {
    std::vector<TransformStep> out;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        try {
            out.push_back(parse_step(t));
        } catch (const ParseError& ex) {
            throw ParseError("line " + std::to_string(number) + ": " + ex.what(), ex.position());
        }
    }
    return out;
}

std::vector<TransformStep> load_script(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_script(buf.str());
}

TransformStep inverse(const TransformStep& s) {
    TransformStep out = s;
    switch (s.kind) {
        case TransformStep::Kind::NegateRow:
        case TransformStep::Kind::NegateCol: break;
        case TransformStep::Kind::RowCompose: out.morphism = "-(" + s.morphism + ")"; break;
        case TransformStep::Kind::ScaleAddRow:
        case TransformStep::Kind::ScaleAddCol: out.scale = "-(" + s.scale + ")"; break;
        case TransformStep::Kind::ColCompose: out.scale = s.scale.empty() ? "-1" : "-(" + s.scale + ")"; break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Relations

namespace {

char object_letter(const Elementary& e) {
    switch (e.kind) {
        case Kind::Sphere: return 'S';
        case Kind::Moore: return 'M';
        default: return '?';
    }
}

}  // namespace

RelationTable RelationTable::load(const std::string& data_dir) {
    const std::string path = data_dir + "/relations.json";
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json doc = json::parse(in);
    RelationTable t;
    for (const auto& r : doc.at("relations")) {
        RelationRule rule;
        rule.outer = r.at("outer");
        rule.inner = r.at("inner");
        rule.objects = r.value("objects", "");
        rule.when = r.value("when", "");
        if (r.contains("bits")) rule.bits = r.at("bits").get<std::vector<std::string>>();
        rule.result = r.at("result");
        rule.cite = r.value("cite", "");
        t.rules_.push_back(std::move(rule));
    }
    return t;
}

const RelationRule* RelationTable::find(const std::string& outer, const std::string& inner, const Elementary& a,
                                        const Elementary& b, const Elementary& c) const {
    const std::string objects = std::string{object_letter(a), ',', object_letter(b), ',', object_letter(c)};
    Bindings env;
    const std::pair<const char*, const Elementary*> named[] = {{"a", &a}, {"b", &b}, {"c", &c}};
    for (const auto& [prefix, e] : named) {
        env[std::string(prefix) + ".r"] = e->kind == Kind::Moore ? e->r : 0;
        env[std::string(prefix) + ".n"] = bottom_cell(*e);
    }
    for (const auto& rule : rules_) {
        if (rule.outer != outer || rule.inner != inner) continue;
        if (!rule.objects.empty() && rule.objects != objects) continue;
        if (!eval_pred(rule.when, env)) continue;
        return &rule;
    }
    return nullptr;
}

const RelationTable& default_relation_table() {
    static const RelationTable table = RelationTable::load(data_directory());
    return table;
}

// ---------------------------------------------------------------------------
// Engine

MatrixEngine::MatrixEngine() : MatrixEngine(default_hom_table(), default_relation_table()) {}

MatrixEngine::MatrixEngine(const HomTable& homs, const RelationTable& relations)
    : homs_(&homs), relations_(&relations), bits_{"κ", "κ'", "ε", "ε'"} {}

int MatrixEngine::bit(const std::string& raw) {
    const std::string name = normalise_literal(raw);
    for (std::size_t k = 0; k < bits_.size(); ++k)
        if (bits_[k] == name) return static_cast<int>(k);
    if (bits_.size() >= 32) throw std::runtime_error("too many unknown bits");
    bits_.push_back(name);
    return static_cast<int>(bits_.size() - 1);
}

const HomGroup& MatrixEngine::group(const Elementary& src, const Elementary& tgt) const {
    auto key = std::make_pair(src, tgt);
    auto it = groups_.find(key);
    if (it != groups_.end()) return it->second;
    if (object_letter(src) == '?' || object_letter(tgt) == '?')
        throw UntabulatedHom("matrix entries run between spheres and Moore spaces only");
    return groups_.emplace(key, homs_->lookup(src, tgt)).first->second;
}

FormalMorphism MatrixEngine::zero(const Elementary& src, const Elementary& tgt) const {
    return FormalMorphism{src, tgt, std::vector<Poly>(group(src, tgt).generators.size())};
}

FormalMorphism MatrixEngine::reduce(FormalMorphism f) const {
    const auto& g = group(f.source, f.target);
    for (std::size_t k = 0; k < f.coords.size(); ++k) f.coords[k] = f.coords[k].reduced(g.generators[k].order);
    return f;
}

FormalMorphism MatrixEngine::basis_element(const Elementary& src, const Elementary& tgt, std::size_t index) const {
    FormalMorphism f = zero(src, tgt);
    f.coords.at(index) = Poly::constant(1);
    return reduce(f);
}

FormalMorphism MatrixEngine::parse(const std::string& literal, const Elementary& src, const Elementary& tgt) {
    const HomGroup& g = group(src, tgt);
    LiteralReader reader(*this, literal, &g);
    Value v = reader.read();
    FormalMorphism f = zero(src, tgt);
    if (v.has_generator) {
        f.coords = v.coords;
    } else if (!v.scalar.is_zero()) {
        bool found = false;
        for (std::size_t k = 0; k < g.generators.size(); ++k)
            if (g.generators[k].name == "1") {
                f.coords[k] = v.scalar;
                found = true;
            }
        if (!found)
            throw ParseError("no identity in [" + g.source + ", " + g.target + "] for '" + literal + "'", 0);
    }
    for (auto& c : f.coords) c = fix(c);
    return reduce(f);
}

FormalMorphism MatrixEngine::add(const FormalMorphism& a, const FormalMorphism& b) const {
    if (a.source != b.source || a.target != b.target) throw std::invalid_argument("adding maps of different types");
    FormalMorphism out = a;
    for (std::size_t k = 0; k < out.coords.size(); ++k) out.coords[k] = out.coords[k] + b.coords[k];
    return reduce(out);
}

FormalMorphism MatrixEngine::negate(const FormalMorphism& a) const {
    FormalMorphism out = a;
    for (auto& c : out.coords) c = -c;
    return reduce(out);
}

FormalMorphism MatrixEngine::scale(const FormalMorphism& a, const Poly& k) const {
    FormalMorphism out = a;
    for (auto& c : out.coords) c = c * k;
    return reduce(out);
}

FormalMorphism MatrixEngine::resolve(const std::string& outer, const std::string& inner, const Elementary& a,
                                     const Elementary& b, const Elementary& c) {
    const HomGroup& target = group(a, c);
    if (target.generators.empty()) return zero(a, c);
    const RelationRule* rule = relations_->find(outer, inner, a, b, c);
    if (!rule)
        throw UnknownComposition("no relation for " + outer + " ∘ " + inner + " on " + chang::to_string(a) + " -> " +
                                 chang::to_string(b) + " -> " + chang::to_string(c));
    for (const auto& name : rule->bits) bit(name);
    return parse(rule->result, a, c);
}

FormalMorphism MatrixEngine::compose(const FormalMorphism& outer, const FormalMorphism& inner) {
    if (inner.target != outer.source)
        throw std::invalid_argument("cannot compose " + to_string(outer) + " after " + to_string(inner) +
                                    ": types do not meet");
    const Elementary& a = inner.source;
    const Elementary& b = inner.target;
    const Elementary& c = outer.target;
    FormalMorphism out = zero(a, c);
    if (outer.is_zero() || inner.is_zero()) return out;
    const HomGroup& gi = group(a, b);
    const HomGroup& go = group(b, c);
    for (std::size_t i = 0; i < inner.coords.size(); ++i) {
        if (inner.coords[i].is_zero()) continue;
        for (std::size_t j = 0; j < outer.coords.size(); ++j) {
            if (outer.coords[j].is_zero()) continue;
            const Poly k = outer.coords[j] * inner.coords[i];
            FormalMorphism piece;
            if (go.generators[j].name == "1")
                piece = basis_element(a, c, i);
            else if (gi.generators[i].name == "1")
                piece = basis_element(a, c, j);
            else
                piece = resolve(go.generators[j].name, gi.generators[i].name, a, b, c);
            out = add(out, scale(piece, k));
        }
    }
    return out;
}

FormalMatrix MatrixEngine::make_matrix(const std::vector<Elementary>& rows, const std::vector<Elementary>& cols,
                                       const std::vector<std::vector<std::string>>& literals) {
    if (literals.size() != rows.size()) throw ParseError("the grid needs one line per row summand", 0);
    FormalMatrix m{rows, cols, {}};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (literals[i].size() != cols.size()) throw ParseError("row " + std::to_string(i + 1) + " has the wrong length", 0);
        std::vector<FormalMorphism> line;
        for (std::size_t j = 0; j < cols.size(); ++j) {
            try {
                line.push_back(parse(literals[i][j], cols[j], rows[i]));
            } catch (const ParseError& ex) {
                throw ParseError("entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "): " + ex.what(),
                                 ex.position());
            }
        }
        m.entries.push_back(std::move(line));
    }
    return m;
}

FormalMatrix MatrixEngine::apply_step(const FormalMatrix& in, const TransformStep& s) {
    FormalMatrix m = in;
    const int nrows = static_cast<int>(m.rows.size()), ncols = static_cast<int>(m.cols.size());
    const bool on_rows = s.kind == TransformStep::Kind::NegateRow || s.kind == TransformStep::Kind::RowCompose ||
                         s.kind == TransformStep::Kind::ScaleAddRow;
    const int bound = on_rows ? nrows : ncols;
    const bool adds = s.kind != TransformStep::Kind::NegateRow && s.kind != TransformStep::Kind::NegateCol;
    if (s.n < 1 || s.n > bound || (adds && (s.m < 1 || s.m > bound)))
        throw std::out_of_range("step " + chang::to_string(s) + " refers to a missing line");
    if (adds && s.m == s.n) throw std::invalid_argument("step adds a line to itself");
    const std::size_t n = static_cast<std::size_t>(s.n - 1), mm = adds ? static_cast<std::size_t>(s.m - 1) : 0;

    auto cell = [](std::size_t i, std::size_t j) {
        return " at cell (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
    };
    Poly k = Poly::constant(1);
    if (!s.scale.empty()) {
        LiteralReader reader(*this, s.scale, nullptr);
        k = fix(reader.read().scalar);
    }
    switch (s.kind) {
        case TransformStep::Kind::NegateRow:
            for (auto& e : m.entries[n]) e = negate(e);
            break;
        case TransformStep::Kind::NegateCol:
            for (auto& line : m.entries) line[n] = negate(line[n]);
            break;
        case TransformStep::Kind::RowCompose:
        case TransformStep::Kind::ScaleAddRow: {
            FormalMorphism g = s.kind == TransformStep::Kind::RowCompose ? scale(parse(s.morphism, m.rows[mm], m.rows[n]), k)
                                                                         : parse("1", m.rows[mm], m.rows[n]);
            if (s.kind == TransformStep::Kind::ScaleAddRow) g = scale(g, k);
            for (std::size_t j = 0; j < m.cols.size(); ++j) {
                try {
                    m.entries[n][j] = add(m.entries[n][j], compose(g, in.entries[mm][j]));
                } catch (const UnknownComposition& ex) {
                    throw UnknownComposition(ex.what() + cell(n, j));
                }
            }
            break;
        }
        case TransformStep::Kind::ColCompose:
        case TransformStep::Kind::ScaleAddCol: {
            FormalMorphism f = s.kind == TransformStep::Kind::ColCompose ? parse(s.morphism, m.cols[n], m.cols[mm])
                                                                         : parse("1", m.cols[n], m.cols[mm]);
            f = scale(f, k);
            for (std::size_t i = 0; i < m.rows.size(); ++i) {
                try {
                    m.entries[i][n] = add(m.entries[i][n], compose(in.entries[i][mm], f));
                } catch (const UnknownComposition& ex) {
                    throw UnknownComposition(ex.what() + cell(i, n));
                }
            }
            break;
        }
    }
    return m;
}

FormalMatrix MatrixEngine::run_script(const FormalMatrix& m, const std::vector<TransformStep>& steps) {
    FormalMatrix cur = m;
    for (std::size_t k = 0; k < steps.size(); ++k) {
        if (!eval_pred(steps[k].when, params)) continue;
        try {
            cur = apply_step(cur, steps[k]);
        } catch (const UnknownComposition& ex) {
            throw UnknownComposition("step " + std::to_string(k + 1) + " (" + chang::to_string(steps[k]) + "): " + ex.what());
        } catch (const ParseError& ex) {
            throw ParseError("step " + std::to_string(k + 1) + " (" + chang::to_string(steps[k]) + "): " + ex.what(),
                             ex.position());
        }
    }
    return cur;
}

Poly MatrixEngine::substitute(const Poly& p, const std::map<std::string, int>& values) {
    std::uint32_t mask = 0, set = 0;
    for (const auto& [name, v] : values) {
        const int b = bit(name);
        mask |= 1u << b;
        if (v) set |= 1u << b;
    }
    return p.substitute(mask, set);
}

Poly MatrixEngine::fix(const Poly& p) { return fixed_.empty() ? p : substitute(p, fixed_); }

FormalMorphism MatrixEngine::substitute(const FormalMorphism& f, const std::map<std::string, int>& values) {
    FormalMorphism out = f;
    for (auto& c : out.coords) c = substitute(c, values);
    return reduce(out);
}

FormalMatrix MatrixEngine::substitute(const FormalMatrix& m, const std::map<std::string, int>& values) {
    FormalMatrix out = m;
    for (auto& line : out.entries)
        for (auto& e : line) e = substitute(e, values);
    return out;
}

// ---------------------------------------------------------------------------
// Printing

std::string MatrixEngine::to_string(const Poly& p) const {
    if (p.is_zero()) return "0";
    std::string out;
    for (const auto& [mask, c] : p.terms) {
        std::string mono;
        for (std::size_t b = 0; b < 32; ++b)
            if (mask & (1u << b)) mono += b < bits_.size() ? bits_[b] : "b" + std::to_string(b);
        std::string term;
        if (mono.empty())
            term = std::to_string(c < 0 ? -c : c);
        else
            term = (c == 1 || c == -1) ? mono : std::to_string(c < 0 ? -c : c) + mono;
        if (out.empty())
            out = (c < 0 ? "-" : "") + term;
        else
            out += (c < 0 ? " - " : " + ") + term;
    }
    return out;
}

namespace {

std::string power_text(std::int64_t v) {
    if (v >= 4 && (v & (v - 1)) == 0) {
        int e = 0;
        while ((std::int64_t{1} << e) < v) ++e;
        return "2^" + std::to_string(e);
    }
    return std::to_string(v);
}

}  // namespace

std::string MatrixEngine::to_string(const FormalMorphism& f) const {
    const auto& g = group(f.source, f.target);
    std::string out;
    for (std::size_t k = 0; k < f.coords.size(); ++k) {
        const Poly& c = f.coords[k];
        if (c.is_zero()) continue;
        const std::string& name = g.generators[k].name;
        bool negative = false;
        std::string term;
        if (auto v = c.as_constant()) {
            std::int64_t x = *v;
            const std::int64_t order = g.generators[k].order;
            if (order > 0 && x > order / 2) x -= order;
            negative = x < 0;
            const std::int64_t a = negative ? -x : x;
            if (name == "1")
                term = power_text(a);
            else
                term = (a == 1 ? "" : power_text(a)) + name;
        } else {
            const std::string poly = to_string(c);
            const bool single = c.terms.size() == 1 && c.terms.begin()->second == 1;
            term = (single ? poly : "(" + poly + ")") + (name == "1" ? "" : name);
        }
        if (out.empty())
            out = (negative ? "-" : "") + term;
        else
            out += (negative ? " - " : " + ") + term;
    }
    return out.empty() ? "0" : out;
}

std::string MatrixEngine::render(const FormalMatrix& m) const {
    std::vector<std::vector<std::string>> cells;
    std::vector<std::string> header{""};
    for (const auto& c : m.cols) header.push_back(chang::to_string(c));
    cells.push_back(header);
    for (std::size_t i = 0; i < m.rows.size(); ++i) {
        std::vector<std::string> line{chang::to_string(m.rows[i])};
        for (const auto& e : m.entries[i]) line.push_back(to_string(e));
        cells.push_back(line);
    }
    std::vector<std::size_t> width(header.size(), 0);
    for (const auto& line : cells)
        for (std::size_t j = 0; j < line.size(); ++j) width[j] = std::max(width[j], utf8_width(line[j]));
    std::string out;
    for (const auto& line : cells) {
        std::string text;
        for (std::size_t j = 0; j < line.size(); ++j) text += (j == 0 ? "" : " | ") + pad(line[j], width[j]);
        while (!text.empty() && text.back() == ' ') text.pop_back();
        out += text + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Mapping cones

std::optional<std::int64_t> MatrixEngine::unit_multiple(const FormalMorphism& f) const {
    if (f.source != f.target) return std::nullopt;
    const auto& g = group(f.source, f.target);
    std::optional<std::int64_t> k;
    for (std::size_t j = 0; j < f.coords.size(); ++j) {
        if (g.generators[j].name == "1") {
            auto v = f.coords[j].as_constant();
            if (!v) return std::nullopt;
            const std::int64_t order = g.generators[j].order;
            const bool unit = order == 0 ? (*v == 1 || *v == -1) : (std::gcd(*v, order) == 1);
            if (!unit) return std::nullopt;
            k = *v;
        } else if (!f.coords[j].is_zero()) {
            return std::nullopt;
        }
    }
    return k;
}

namespace {

std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
    if (m == 0) return a;  // ±1
    std::int64_t t = 0, nt = 1, r = m, nr = ((a % m) + m) % m;
    while (nr != 0) {
        const std::int64_t q = r / nr;
        t = std::exchange(nt, t - q * nt);
        r = std::exchange(nr, r - q * nr);
    }
    return ((t % m) + m) % m;
}

bool is_prime_power(std::int64_t n, std::int64_t& p, int& e) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d <= n; ++d)
        if (n % d == 0) {
            p = d;
            e = 0;
            while (n % d == 0) {
                n /= d;
                ++e;
            }
            return n == 1;
        }
    return false;
}

std::string census_text(const std::map<int, int>& census) {
    std::string out;
    for (const auto& [d, c] : census) out += (out.empty() ? "" : " ") + std::to_string(c) + "e" + std::to_string(d);
    return out;
}

}  // namespace

// Names the cone of a connected block when it has one of the two-cell to four-cell shapes.
bool MatrixEngine::recognise(const FormalMatrix& b, Wedge& out) {
    auto is = [&](const FormalMorphism& f, const std::string& lit) {
        try {
            FormalMorphism x = parse(lit, f.source, f.target);
            return !x.is_zero() && (f == x || f == negate(x));
        } catch (const std::exception&) {
            return false;
        }
    };
    // exponent e when f = ±2^e·1 with e >= 1
    auto power = [&](const FormalMorphism& f) -> int {
        if (f.source != f.target || f.source.kind != Kind::Sphere) return 0;
        auto v = f.coords.empty() ? std::optional<std::int64_t>{} : f.coords[0].as_constant();
        if (!v) return 0;
        std::int64_t p;
        int e;
        if (!is_prime_power(*v < 0 ? -*v : *v, p, e) || p != 2) return 0;
        return e;
    };
    auto sph = [](const Elementary& e) { return e.kind == Kind::Sphere; };
    auto moore2 = [](const Elementary& e) { return e.kind == Kind::Moore && e.p == 2; };
    auto order_by_cell = [](std::vector<std::size_t>& idx, const std::vector<Elementary>& objs) {
        std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
            return std::make_pair(bottom_cell(objs[x]), objs[x]) < std::make_pair(bottom_cell(objs[y]), objs[y]);
        });
    };
    std::vector<std::size_t> ri(b.rows.size()), ci(b.cols.size());
    std::iota(ri.begin(), ri.end(), 0);
    std::iota(ci.begin(), ci.end(), 0);
    order_by_cell(ri, b.rows);
    order_by_cell(ci, b.cols);
    auto R = [&](std::size_t k) { return b.rows[ri[k]]; };
    auto C = [&](std::size_t k) { return b.cols[ci[k]]; };
    auto E = [&](std::size_t i, std::size_t j) -> const FormalMorphism& { return b.entries[ri[i]][ci[j]]; };
    const int a = bottom_cell(R(0));

    try {
        if (b.rows.size() == 1 && b.cols.size() == 1) {
            const auto& f = E(0, 0);
            if (sph(R(0)) && sph(C(0)) && bottom_cell(C(0)) == a) {
                auto v = f.coords[0].as_constant();
                std::int64_t p;
                int e;
                if (v && is_prime_power(*v < 0 ? -*v : *v, p, e)) {
                    out += Wedge(moore(static_cast<int>(p), e, a));
                    return true;
                }
            }
            if (sph(R(0)) && sph(C(0)) && bottom_cell(C(0)) == a + 1 && is(f, "η")) {
                out += Wedge(ceta(a + 2));
                return true;
            }
            if (moore2(R(0)) && sph(C(0)) && bottom_cell(C(0)) == a + 1 && is(f, "iη")) {
                out += Wedge(cbot(R(0).r, a + 2));
                return true;
            }
            if (sph(R(0)) && moore2(C(0)) && bottom_cell(C(0)) == a && is(f, "ηq")) {
                out += Wedge(ctop(a + 2, C(0).r));
                return true;
            }
            if (moore2(R(0)) && moore2(C(0)) && bottom_cell(C(0)) == a && is(f, "iηq")) {
                out += Wedge(cfull(R(0).r, a + 2, C(0).r));
                return true;
            }
            if (moore2(R(0)) && C(0) == suspend(R(0), 1) && is(f, "η∧1") && a >= 6) {
                out += Wedge(make_atom(moore(2, R(0).r, 3), ceta(5), a - 6));
                return true;
            }
            return false;
        }
        if (b.rows.size() == 2 && b.cols.size() == 1) {
            // (η; 2^s) or (iη; 2^s) on a column S^{a+1}
            if (!sph(C(0)) || bottom_cell(C(0)) != a + 1 || !sph(R(1)) || bottom_cell(R(1)) != a + 1) return false;
            const int s = power(E(1, 0));
            if (s == 0) return false;
            if (sph(R(0)) && is(E(0, 0), "η")) {
                out += Wedge(ctop(a + 2, s));
                return true;
            }
            if (moore2(R(0)) && is(E(0, 0), "iη")) {
                out += Wedge(cfull(R(0).r, a + 2, s));
                return true;
            }
            return false;
        }
        if (b.rows.size() == 1 && b.cols.size() == 2) {
            // (2^r, η) or (2^r, ηq) on a row S^a
            if (!sph(R(0)) || !sph(C(0)) || bottom_cell(C(0)) != a) return false;
            const int r = power(E(0, 0));
            if (r == 0) return false;
            if (sph(C(1)) && bottom_cell(C(1)) == a + 1 && is(E(0, 1), "η")) {
                out += Wedge(cbot(r, a + 2));
                return true;
            }
            if (moore2(C(1)) && bottom_cell(C(1)) == a && is(E(0, 1), "ηq")) {
                out += Wedge(cfull(r, a + 2, C(1).r));
                return true;
            }
            return false;
        }
        if (b.rows.size() == 2 && b.cols.size() == 2) {
            // [[2^r, η], [0, 2^s]] on S^a, S^{a+1}
            if (!sph(R(0)) || !sph(R(1)) || !sph(C(0)) || !sph(C(1))) return false;
            if (bottom_cell(R(1)) != a + 1 || bottom_cell(C(0)) != a || bottom_cell(C(1)) != a + 1) return false;
            const int r = power(E(0, 0)), s = power(E(1, 1));
            if (r == 0 || s == 0 || !E(1, 0).is_zero() || !is(E(0, 1), "η")) return false;
            out += Wedge(cfull(r, a + 2, s));
            return true;
        }
    } catch (const std::invalid_argument&) {
        return false;
    }
    return false;
}

ConeSplit MatrixEngine::split_cone(const FormalMatrix& input) {
    ConeSplit result;
    FormalMatrix m = input;
    std::vector<bool> row_alive(m.rows.size(), true), col_alive(m.cols.size(), true);

    auto cancel = [&]() -> bool {
        for (std::size_t i = 0; i < m.rows.size(); ++i) {
            if (!row_alive[i]) continue;
            for (std::size_t j = 0; j < m.cols.size(); ++j) {
                if (!col_alive[j]) continue;
                auto u = unit_multiple(m.entries[i][j]);
                if (!u) continue;
                const auto& g = group(m.rows[i], m.rows[i]);
                std::int64_t order = 0;
                for (const auto& gen : g.generators)
                    if (gen.name == "1") order = gen.order;
                const Poly minus_inv = Poly::constant(-inverse_mod(*u, order));
                FormalMatrix trial = m;
                try {
                    for (std::size_t k = 0; k < m.rows.size(); ++k) {
                        if (k == i || !row_alive[k] || trial.entries[k][j].is_zero()) continue;
                        const FormalMorphism gk = scale(trial.entries[k][j], minus_inv);
                        const auto before = trial;
                        for (std::size_t l = 0; l < m.cols.size(); ++l)
                            if (col_alive[l])
                                trial.entries[k][l] = add(before.entries[k][l], compose(gk, before.entries[i][l]));
                    }
                    for (std::size_t l = 0; l < m.cols.size(); ++l) {
                        if (l == j || !col_alive[l] || trial.entries[i][l].is_zero()) continue;
                        const FormalMorphism fl = scale(trial.entries[i][l], minus_inv);
                        const auto before = trial;
                        for (std::size_t k = 0; k < m.rows.size(); ++k)
                            if (row_alive[k])
                                trial.entries[k][l] = add(before.entries[k][l], compose(before.entries[k][j], fl));
                    }
                } catch (const UnknownComposition&) {
                    continue;
                }
                bool clean = true;
                for (std::size_t k = 0; k < m.rows.size(); ++k)
                    if (k != i && row_alive[k] && !trial.entries[k][j].is_zero()) clean = false;
                for (std::size_t l = 0; l < m.cols.size(); ++l)
                    if (l != j && col_alive[l] && !trial.entries[i][l].is_zero()) clean = false;
                if (!clean) continue;
                m = trial;
                row_alive[i] = col_alive[j] = false;
                result.log.push_back("cancel " + chang::to_string(m.cols[j]) + " against " + chang::to_string(m.rows[i]));
                return true;
            }
        }
        return false;
    };

    auto split_zero = [&]() -> bool {
        bool any = false;
        for (std::size_t j = 0; j < m.cols.size(); ++j) {
            if (!col_alive[j]) continue;
            bool zero = true;
            for (std::size_t i = 0; i < m.rows.size(); ++i)
                if (row_alive[i] && !m.entries[i][j].is_zero()) zero = false;
            if (!zero) continue;
            col_alive[j] = false;
            result.pieces += Wedge(suspend(m.cols[j], 1));
            result.log.push_back("zero column: suspension of " + chang::to_string(m.cols[j]) + " splits off");
            any = true;
        }
        for (std::size_t i = 0; i < m.rows.size(); ++i) {
            if (!row_alive[i]) continue;
            bool zero = true;
            for (std::size_t j = 0; j < m.cols.size(); ++j)
                if (col_alive[j] && !m.entries[i][j].is_zero()) zero = false;
            if (!zero) continue;
            row_alive[i] = false;
            result.pieces += Wedge(m.rows[i]);
            result.log.push_back("zero row: " + chang::to_string(m.rows[i]) + " splits off");
            any = true;
        }
        return any;
    };

    while (cancel() || split_zero()) {
    }

    // connected blocks of the remaining bipartite graph
    std::vector<int> row_block(m.rows.size(), -1), col_block(m.cols.size(), -1);
    int blocks = 0;
    for (std::size_t start = 0; start < m.rows.size(); ++start) {
        if (!row_alive[start] || row_block[start] >= 0) continue;
        std::vector<std::pair<bool, std::size_t>> stack{{true, start}};
        row_block[start] = blocks;
        while (!stack.empty()) {
            auto [is_row, k] = stack.back();
            stack.pop_back();
            if (is_row) {
                for (std::size_t j = 0; j < m.cols.size(); ++j)
                    if (col_alive[j] && col_block[j] < 0 && !m.entries[k][j].is_zero()) {
                        col_block[j] = blocks;
                        stack.push_back({false, j});
                    }
            } else {
                for (std::size_t i = 0; i < m.rows.size(); ++i)
                    if (row_alive[i] && row_block[i] < 0 && !m.entries[i][k].is_zero()) {
                        row_block[i] = blocks;
                        stack.push_back({true, i});
                    }
            }
        }
        ++blocks;
    }
    for (int blk = 0; blk < blocks; ++blk) {
        FormalMatrix sub;
        std::vector<std::size_t> rs, cs;
        for (std::size_t i = 0; i < m.rows.size(); ++i)
            if (row_alive[i] && row_block[i] == blk) rs.push_back(i);
        for (std::size_t j = 0; j < m.cols.size(); ++j)
            if (col_alive[j] && col_block[j] == blk) cs.push_back(j);
        for (auto i : rs) sub.rows.push_back(m.rows[i]);
        for (auto j : cs) sub.cols.push_back(m.cols[j]);
        for (auto i : rs) {
            std::vector<FormalMorphism> line;
            for (auto j : cs) line.push_back(m.entries[i][j]);
            sub.entries.push_back(line);
        }
        Wedge named;
        if (recognise(sub, named)) {
            result.pieces += named;
            result.log.push_back("block named " + [&] {
                std::string s;
                for (const auto& p : named.parts()) s += (s.empty() ? "" : " v ") + chang::to_string(p);
                return s;
            }());
            continue;
        }
        std::map<int, int> census;
        for (const auto& r : sub.rows)
            for (int c : cells(r)) ++census[c];
        for (const auto& c : sub.cols)
            for (int d : cells(c)) ++census[d + 1];
        result.residuals.push_back(sub);
        result.residual_census.push_back(census_text(census));
        result.log.push_back("residual block with cells " + census_text(census));
    }
    return result;
}

// ---------------------------------------------------------------------------
// Cellular homology of a cone

namespace {

using IntMatrix = std::vector<std::vector<std::int64_t>>;

// Nonzero invariant factors of an integer matrix.
std::vector<std::int64_t> smith_invariants(IntMatrix a) {
    std::vector<std::int64_t> out;
    if (a.empty() || a[0].empty()) return out;
    const std::size_t rows = a.size(), cols = a[0].size();
    std::size_t t = 0;
    while (t < rows && t < cols) {
        // smallest nonzero pivot in the trailing block
        std::size_t pi = rows, pj = cols;
        for (std::size_t i = t; i < rows; ++i)
            for (std::size_t j = t; j < cols; ++j)
                if (a[i][j] != 0 && (pi == rows || std::llabs(a[i][j]) < std::llabs(a[pi][pj]))) {
                    pi = i;
                    pj = j;
                }
        if (pi == rows) break;
        std::swap(a[t], a[pi]);
        for (auto& line : a) std::swap(line[t], line[pj]);
        bool done = false;
        while (!done) {
            done = true;
            for (std::size_t i = t + 1; i < rows; ++i) {
                const std::int64_t q = a[i][t] / a[t][t];
                if (q != 0)
                    for (std::size_t j = t; j < cols; ++j) a[i][j] -= q * a[t][j];
                if (a[i][t] != 0) {
                    std::swap(a[t], a[i]);
                    done = false;
                }
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                const std::int64_t q = a[t][j] / a[t][t];
                if (q != 0)
                    for (std::size_t i = t; i < rows; ++i) a[i][j] -= q * a[i][t];
                if (a[t][j] != 0) {
                    for (auto& line : a) std::swap(line[t], line[j]);
                    done = false;
                }
            }
            if (done) {
                // the pivot must divide the rest of the block
                for (std::size_t i = t + 1; i < rows && done; ++i)
                    for (std::size_t j = t + 1; j < cols; ++j)
                        if (a[i][j] % a[t][t] != 0) {
                            for (std::size_t jj = t; jj < cols; ++jj) a[t][jj] += a[i][jj];
                            done = false;
                            break;
                        }
            }
        }
        out.push_back(std::llabs(a[t][t]));
        ++t;
    }
    return out;
}

struct Cell {
    int degree;
    bool suspended;  // a cell of the cone on the source
    std::size_t summand;
    int which;  // 0 bottom, 1 top
};

std::int64_t moore_order(const Elementary& e) {
    std::int64_t v = 1;
    for (int k = 0; k < e.r; ++k) v *= e.p;
    return v;
}

}  // namespace

GradedGroup MatrixEngine::cone_homology(const FormalMatrix& m) const {
    std::vector<Cell> cellv;
    auto add_cells = [&](const Elementary& e, bool susp, std::size_t idx) {
        const int shift = susp ? 1 : 0;
        cellv.push_back({bottom_cell(e) + shift, susp, idx, 0});
        if (e.kind == Kind::Moore) cellv.push_back({bottom_cell(e) + 1 + shift, susp, idx, 1});
    };
    for (std::size_t i = 0; i < m.rows.size(); ++i) add_cells(m.rows[i], false, i);
    for (std::size_t j = 0; j < m.cols.size(); ++j) add_cells(m.cols[j], true, j);
    auto find = [&](bool susp, std::size_t idx, int which) -> std::size_t {
        for (std::size_t k = 0; k < cellv.size(); ++k)
            if (cellv[k].suspended == susp && cellv[k].summand == idx && cellv[k].which == which) return k;
        throw std::logic_error("missing cell");
    };

    // boundary[target][source]
    const std::size_t N = cellv.size();
    IntMatrix d(N, std::vector<std::int64_t>(N, 0));
    auto internal = [&](const Elementary& e, bool susp, std::size_t idx, std::int64_t sign) {
        if (e.kind != Kind::Moore) return;
        d[find(susp, idx, 0)][find(susp, idx, 1)] += sign * moore_order(e);
    };
    for (std::size_t i = 0; i < m.rows.size(); ++i) internal(m.rows[i], false, i, 1);
    for (std::size_t j = 0; j < m.cols.size(); ++j) internal(m.cols[j], true, j, -1);

    for (std::size_t i = 0; i < m.rows.size(); ++i)
        for (std::size_t j = 0; j < m.cols.size(); ++j) {
            const FormalMorphism& f = m.entries[i][j];
            const auto& g = group(f.source, f.target);
            for (std::size_t k = 0; k < f.coords.size(); ++k) {
                if (f.coords[k].is_zero()) continue;
                const std::string& name = g.generators[k].name;
                // which source cell goes to which target cell, with multiplicity
                std::vector<std::tuple<int, int, std::int64_t>> pieces;
                if (name == "1") {
                    pieces.push_back({0, 0, 1});
                    if (f.source.kind == Kind::Moore) pieces.push_back({1, 1, 1});
                } else if (name == "B(χ)") {
                    const int r = f.source.r, t = f.target.r;
                    const std::int64_t up = std::int64_t{1} << std::abs(r - t);
                    pieces.push_back({0, 0, r >= t ? 1 : up});
                    pieces.push_back({1, 1, r >= t ? up : 1});
                } else if (name == "i") {
                    pieces.push_back({0, 0, 1});
                } else if (name == "q" || name == "iq") {
                    pieces.push_back({1, 0, 1});
                } else {
                    continue;  // η family and the rest vanish on cellular chains
                }
                auto v = f.coords[k].as_constant();
                if (!v) throw std::runtime_error("cone homology needs determined coefficients, got " + to_string(f));
                for (auto [src, tgt, mult] : pieces)
                    d[find(false, i, tgt)][find(true, j, src)] += *v * mult;
            }
        }

    std::map<int, std::vector<std::size_t>> by_degree;
    for (std::size_t k = 0; k < N; ++k) by_degree[cellv[k].degree].push_back(k);
    auto block = [&](int deg) {  // C_deg -> C_{deg-1}
        IntMatrix out;
        const auto& src = by_degree[deg];
        const auto& tgt = by_degree[deg - 1];
        for (auto t : tgt) {
            std::vector<std::int64_t> line;
            for (auto s : src) line.push_back(d[t][s]);
            out.push_back(line);
        }
        return out;
    };
    GradedGroup h;
    std::set<int> degrees;
    for (const auto& c : cellv) degrees.insert(c.degree);
    for (int deg : degrees) {
        const auto out_inv = smith_invariants(block(deg));
        const auto in_inv = smith_invariants(block(deg + 1));
        const std::int64_t free =
            static_cast<std::int64_t>(by_degree[deg].size()) - static_cast<std::int64_t>(out_inv.size()) -
            static_cast<std::int64_t>(in_inv.size());
        for (std::int64_t k = 0; k < free; ++k) h.add(deg, 0);
        for (auto q : in_inv)
            if (q > 1) h.add(deg, q);
    }
    return h;
}

// ---------------------------------------------------------------------------
// Problem files

std::string fill_placeholders(const std::string& text, const Bindings& env) {
    std::string out;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '{') {
            out += text[i];
            continue;
        }
        auto close = text.find('}', i);
        if (close == std::string::npos) throw ParseError("unclosed '{' in '" + text + "'", i);
        out += std::to_string(eval_int(text.substr(i + 1, close - i - 1), env));
        i = close;
    }
    return out;
}

MatrixProblem load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& ex) {
        throw ParseError(path + ": " + ex.what(), 0);
    }
    MatrixProblem p;
    p.path = path;
    p.name = doc.value("name", std::filesystem::path(path).stem().string());
    p.description = doc.value("description", "");
    if (doc.contains("params"))
        for (auto it = doc["params"].begin(); it != doc["params"].end(); ++it) p.params[it.key()] = it.value().get<std::int64_t>();
    p.constraints = doc.value("constraints", "");
    if (doc.contains("bits")) p.bits = doc["bits"].get<std::vector<std::string>>();
    p.rows = doc.at("rows").get<std::vector<std::string>>();
    p.cols = doc.at("cols").get<std::vector<std::string>>();
    p.entries = doc.at("entries").get<std::vector<std::vector<std::string>>>();
    if (doc.contains("expect")) p.expect = doc["expect"].get<std::vector<std::vector<std::string>>>();
    p.expect_cone = doc.value("expect_cone", "");
    p.expect_residuals = doc.value("expect_residuals", 0);
    if (doc.contains("script")) {
        const auto& s = doc["script"];
        if (s.is_string()) {
            auto dir = std::filesystem::path(path).parent_path();
            p.script = load_script((dir / s.get<std::string>()).string());
        } else {
            for (const auto& step : s) p.script.push_back(step.is_string() ? parse_step(step.get<std::string>()) : step_from_json(step));
        }
    }
    return p;
}

FormalMatrix instantiate(MatrixEngine& engine, const MatrixProblem& problem) {
    engine.params = problem.params;
    if (!eval_pred(problem.constraints, engine.params)) {
        std::string values;
        for (const auto& [k, v] : problem.params) values += (values.empty() ? "" : ", ") + k + "=" + std::to_string(v);
        throw std::invalid_argument("parameters " + values + " violate '" + problem.constraints + "'");
    }
    for (const auto& b : problem.bits) engine.bit(b);
    std::vector<Elementary> rows, cols;
    for (const auto& r : problem.rows) rows.push_back(parse_elementary(fill_placeholders(r, engine.params)));
    for (const auto& c : problem.cols) cols.push_back(parse_elementary(fill_placeholders(c, engine.params)));
    return engine.make_matrix(rows, cols, problem.entries);
}

FormalMatrix expected_matrix(MatrixEngine& engine, const MatrixProblem& problem, const FormalMatrix& m) {
    return engine.make_matrix(m.rows, m.cols, problem.expect);
}

}  // namespace chang
