#include "steenrod/ring_file.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>

#include "json.hpp"

namespace steenrod {

RingFileError::RingFileError(int line, int column, const std::string& message)
    : std::runtime_error(line > 0 ? std::to_string(line) + ":" + std::to_string(column) + ": " + message : message),
      line_(line), column_(column), message_(message)
{}

RingFileError::RingFileError(const std::string& path, const RingFileError& inner)
    : std::runtime_error(path + ":" + (inner.line_ > 0 ? std::to_string(inner.line_) + ":" +
                                                             std::to_string(inner.column_) + ":"
                                                       : std::string()) +
                         " " + inner.message_),
      line_(inner.line_), column_(inner.column_), message_(inner.message_)
{}

namespace {

bool is_name_start(char c)
{
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_name_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class PolyParser {
public:
    PolyParser(const std::string& s, const std::vector<Generator>& gens, Prime p, SourceSpan origin)
        : s_(s), gens_(gens), p_(p), origin_(origin)
    {}

    Polynomial parse()
    {
        skip();
        Polynomial out;
        if (s_.find_first_not_of("0 \t", i_) == std::string::npos && i_ < s_.size())
            return out;
        bool negated = false;
        for (;;) {
            term(out, negated);
            skip();
            if (at_end())
                break;
            if (s_[i_] == '+' || s_[i_] == '-') {
                negated = s_[i_] == '-';
                ++i_;
                continue;
            }
            fail("expected '+', '-', '*' or end of polynomial");
        }
        return out;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const
    {
        throw RingFileError(origin_.line, origin_.column + static_cast<int>(i_), msg);
    }

    void skip()
    {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_])))
            ++i_;
    }

    bool at_end() const { return i_ >= s_.size(); }

    std::uint64_t nat(bool reduce)
    {
        if (at_end() || !std::isdigit(static_cast<unsigned char>(s_[i_])))
            fail("expected a number");
        std::uint64_t v = 0;
        const std::size_t start = i_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
            v = v * 10 + static_cast<unsigned>(s_[i_] - '0');
            if (reduce)
                v %= p_.value();
            else if (v > 1000000)
                throw RingFileError(origin_.line, origin_.column + static_cast<int>(start), "exponent is too large");
            ++i_;
        }
        return v;
    }

    void term(Polynomial& out, bool negated)
    {
        skip();
        std::uint32_t c = 1;
        bool have_coefficient = false;
        if (!at_end() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
            c = static_cast<std::uint32_t>(nat(true));
            have_coefficient = true;
            skip();
            if (!at_end() && s_[i_] == '*') {
                ++i_;
                skip();
                if (at_end() || !is_name_start(s_[i_]))
                    fail("expected a generator name");
            }
        }
        Exponents e(gens_.size(), 0);
        std::vector<std::size_t> odd_sequence;
        bool killed = false;
        bool first = true;
        while (!at_end() && (first ? is_name_start(s_[i_]) : s_[i_] == '*')) {
            if (!first) {
                ++i_;
                skip();
            }
            first = false;
            const std::size_t start = i_;
            while (!at_end() && is_name_char(s_[i_]))
                ++i_;
            const std::string name = s_.substr(start, i_ - start);
            auto it = std::find_if(gens_.begin(), gens_.end(), [&](const Generator& g) { return g.name == name; });
            if (name.empty() || it == gens_.end()) {
                i_ = start;
                fail(name.empty() ? "expected a generator name" : "unknown generator '" + name + "'");
            }
            const std::size_t g = static_cast<std::size_t>(it - gens_.begin());
            skip();
            int power = 1;
            if (!at_end() && s_[i_] == '^') {
                ++i_;
                skip();
                if (!at_end() && s_[i_] == '-')
                    fail("negative exponent");
                power = static_cast<int>(nat(false));
                skip();
            }
            e[g] += power;
            if (p_.is_odd() && gens_[g].degree % 2 && power > 0) {
                if (power > 1)
                    killed = true;
                odd_sequence.push_back(g);
            }
        }
        if (first && !have_coefficient)
            fail("expected a coefficient or a generator name");
        std::size_t inversions = 0;
        for (std::size_t a = 0; a < odd_sequence.size(); ++a)
            for (std::size_t b = a + 1; b < odd_sequence.size(); ++b) {
                if (odd_sequence[a] == odd_sequence[b])
                    killed = true;
                else if (odd_sequence[a] > odd_sequence[b])
                    ++inversions;
            }
        if (killed)
            return;
        c = p_.mul(c, p_.sign(static_cast<long long>(inversions)));
        if (negated)
            c = p_.neg(c);
        std::uint32_t& slot = out[e];
        slot = p_.add(slot, c);
        if (slot == 0)
            out.erase(e);
    }

    const std::string& s_;
    const std::vector<Generator>& gens_;
    Prime p_;
    SourceSpan origin_;
    std::size_t i_ = 0;
};

std::string trim(const std::string& s)
{
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct RawLine {
    std::string text;
    int line = 0;
    int column = 1;
};

struct RawFile {
    std::optional<RawLine> prime;
    std::optional<RawLine> cap;
    std::vector<std::pair<RawLine, RawLine>> generators;
    std::vector<RawLine> relations;
    std::vector<RawLine> action;
};

int to_int(const RawLine& v, const std::string& what)
{
    const std::string t = trim(v.text);
    if (t.empty() || t.size() > 9 || t.find_first_not_of("0123456789") != std::string::npos)
        throw RingFileError(v.line, v.column, what + " must be a non-negative integer, got '" + t + "'");
    return std::stoi(t);
}

RawFile read_text(const std::string& text)
{
    RawFile raw;
    std::istringstream in(text);
    std::string line;
    std::string section;
    std::set<std::string> seen_sections;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        const std::string t = trim(line);
        if (t.empty())
            continue;
        const int col = static_cast<int>(line.find_first_not_of(" \t")) + 1;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw RingFileError(n, col, "unterminated section header");
            section = trim(t.substr(1, t.size() - 2));
            if (section != "ring" && section != "generators" && section != "relations" && section != "action")
                throw RingFileError(n, col, "unknown section [" + section + "]");
            if (!seen_sections.insert(section).second)
                throw RingFileError(n, col, "section [" + section + "] appears twice");
            continue;
        }
        if (section.empty())
            throw RingFileError(n, col, "content before the first section header");
        const auto eq = line.find('=');
        if (section == "relations") {
            raw.relations.push_back({line, n, 1});
            continue;
        }
        if (eq == std::string::npos)
            throw RingFileError(n, col, "expected '='");
        if (section == "action") {
            raw.action.push_back({line, n, 1});
            continue;
        }
        const RawLine key{trim(line.substr(0, eq)), n, col};
        const RawLine value{line.substr(eq + 1), n, static_cast<int>(eq) + 2};
        if (section == "ring") {
            std::optional<RawLine>* slot = key.text == "prime" ? &raw.prime : key.text == "cap" ? &raw.cap : nullptr;
            if (!slot)
                throw RingFileError(n, col, "unknown key '" + key.text + "' in [ring]");
            if (*slot)
                throw RingFileError(n, col, "duplicate key '" + key.text + "'");
            *slot = value;
        } else {
            raw.generators.emplace_back(key, value);
        }
    }
    return raw;
}

std::pair<int, int> line_col(const std::string& text, std::size_t byte)
{
    int line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

RawFile read_json(const std::string& text)
{
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [l, c] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
        throw RingFileError(l, c, std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw RingFileError(0, 0, "JSON ring file must be an object");
    RawFile raw;
    for (const auto& [key, value] : doc.items()) {
        if (key == "prime" || key == "cap") {
            if (!value.is_number_integer())
                throw RingFileError(0, 0, "'" + key + "' must be an integer");
            (key == "prime" ? raw.prime : raw.cap) = RawLine{std::to_string(value.get<long long>()), 0, 0};
        } else if (key == "generators") {
            if (!value.is_array())
                throw RingFileError(0, 0, "'generators' must be an array of {name, degree}");
            for (const auto& g : value) {
                if (!g.is_object() || !g.contains("name") || !g.contains("degree") || !g["name"].is_string() ||
                    !g["degree"].is_number_integer())
                    throw RingFileError(0, 0, "each generator needs a string 'name' and an integer 'degree'");
                raw.generators.emplace_back(RawLine{g["name"].get<std::string>(), 0, 0},
                                            RawLine{std::to_string(g["degree"].get<long long>()), 0, 0});
            }
        } else if (key == "relations" || key == "action") {
            if (!value.is_array())
                throw RingFileError(0, 0, "'" + key + "' must be an array of strings");
            for (const auto& r : value) {
                if (!r.is_string())
                    throw RingFileError(0, 0, "'" + key + "' must be an array of strings");
                (key == "relations" ? raw.relations : raw.action).push_back({r.get<std::string>(), 0, 1});
            }
        } else {
            throw RingFileError(0, 0, "unknown key '" + key + "'");
        }
    }
    return raw;
}

const std::regex& name_pattern()
{
    static const std::regex re("[A-Za-z_][A-Za-z0-9_]*");
    return re;
}

} // namespace

Polynomial parse_polynomial(const std::string& text, const std::vector<Generator>& generators, Prime p,
                            SourceSpan origin)
{
    return PolyParser(text, generators, p, origin).parse();
}

int polynomial_degree(const Polynomial& poly, const std::vector<Generator>& generators)
{
    int degree = -1;
    for (const auto& [e, c] : poly) {
        int d = 0;
        for (std::size_t g = 0; g < e.size(); ++g)
            d += e[g] * generators[g].degree;
        if (degree >= 0 && d != degree)
            throw std::invalid_argument("inhomogeneous polynomial: degrees " + std::to_string(degree) + " and " +
                                        std::to_string(d));
        degree = d;
    }
    return degree;
}

RingFile parse_ring_file(const std::string& text)
{
    const auto first = text.find_first_not_of(" \t\r\n");
    const RawFile raw = first != std::string::npos && text[first] == '{' ? read_json(text) : read_text(text);

    RingFile out;
    if (!raw.prime)
        throw RingFileError(0, 0, "missing prime");
    const int pv = to_int(*raw.prime, "prime");
    try {
        out.presentation.prime = Prime(pv);
    } catch (const std::exception&) {
        throw RingFileError(raw.prime->line, raw.prime->column, std::to_string(pv) + " is not a prime");
    }
    const Prime p = out.presentation.prime;

    if (raw.generators.empty())
        throw RingFileError(0, 0, "no generators");
    int top = 0;
    for (const auto& [name, degree] : raw.generators) {
        if (!std::regex_match(name.text, name_pattern()))
            throw RingFileError(name.line, name.column, "invalid generator name '" + name.text + "'");
        for (const auto& g : out.presentation.generators)
            if (g.name == name.text)
                throw RingFileError(name.line, name.column, "duplicate generator '" + name.text + "'");
        const int d = to_int(degree, "degree of " + name.text);
        if (d <= 0)
            throw RingFileError(degree.line, degree.column, "generator degrees must be positive");
        out.presentation.generators.push_back({name.text, d});
        top = std::max(top, d);
    }
    if (raw.cap) {
        out.presentation.cap = to_int(*raw.cap, "cap");
    } else {
        out.presentation.cap = 4 * top;
        out.cap_defaulted = true;
    }
    const auto& gens = out.presentation.generators;

    for (const auto& r : raw.relations) {
        const auto eq = r.text.find('=');
        const SourceSpan at{r.line, r.column, 0};
        Polynomial lhs = parse_polynomial(r.text.substr(0, eq), gens, p, at);
        if (eq != std::string::npos) {
            const Polynomial rhs =
                parse_polynomial(r.text.substr(eq + 1), gens, p, {r.line, r.column + static_cast<int>(eq) + 1, 0});
            for (const auto& [e, c] : rhs) {
                std::uint32_t& slot = lhs[e];
                slot = p.sub(slot, c);
                if (slot == 0)
                    lhs.erase(e);
            }
        }
        out.presentation.relations.push_back(std::move(lhs));
        out.relation_spans.push_back({r.line, r.column + static_cast<int>(r.text.find_first_not_of(" \t")), 0});
    }

    static const std::regex lhs_re(R"(^\s*(?:Sq\s*\^\s*(\d+)|P\s*\^\s*(\d+)|(b))\s*\(\s*([A-Za-z_][A-Za-z0-9_]*)\s*\)\s*$)");
    for (const auto& a : raw.action) {
        const auto eq = a.text.find('=');
        const int col = a.column + static_cast<int>(a.text.find_first_not_of(" \t"));
        if (eq == std::string::npos)
            throw RingFileError(a.line, col, "expected 'op(generator) = polynomial'");
        std::smatch m;
        const std::string lhs = a.text.substr(0, eq);
        if (!std::regex_match(lhs, m, lhs_re))
            throw RingFileError(a.line, col, "expected Sq^i(g), P^s(g) or b(g) before '='");
        ActionEntry entry;
        entry.span = {a.line, col, static_cast<int>(eq)};
        entry.generator = m[4];
        if (m[1].matched) {
            if (p.is_odd())
                throw RingFileError(a.line, col, "Sq is only defined at p = 2");
            entry.op = Letter::sq(std::stoi(m[1]));
        } else if (m[2].matched) {
            if (p.is_two())
                throw RingFileError(a.line, col, "P is only defined at odd primes");
            entry.op = Letter::P(std::stoi(m[2]));
        } else {
            if (p.is_two())
                throw RingFileError(a.line, col, "b is only defined at odd primes");
            entry.op = Letter::beta();
        }
        entry.value = parse_polynomial(a.text.substr(eq + 1), gens, p, {a.line, a.column + static_cast<int>(eq) + 1, 0});
        try {
            entry.value_degree = polynomial_degree(entry.value, gens);
        } catch (const std::invalid_argument& e) {
            throw RingFileError(a.line, col, e.what());
        }
        out.action.push_back(std::move(entry));
    }
    return out;
}

LoadedRing load_ring(const RingFile& file)
{
    const RingPresentation& pres = file.presentation;
    for (std::size_t i = 0; i < pres.relations.size(); ++i) {
        const SourceSpan at = i < file.relation_spans.size() ? file.relation_spans[i] : SourceSpan{0, 0, 0};
        int d;
        try {
            d = polynomial_degree(pres.relations[i], pres.generators);
        } catch (const std::invalid_argument& e) {
            throw RingFileError(at.line, at.column, std::string("relation: ") + e.what());
        }
        if (d == 0)
            throw RingFileError(at.line, at.column, "relation has degree 0");
        if (d > pres.cap)
            throw RingFileError(at.line, at.column,
                                "relation degree " + std::to_string(d) + " exceeds the cap " + std::to_string(pres.cap));
    }
    std::shared_ptr<const RingBasis> basis;
    try {
        basis = RingBasis::compute(pres);
    } catch (const std::invalid_argument& e) {
        throw RingFileError(0, 0, e.what());
    }

    LoadedRing out{basis, ActionTable(basis), file.cap_defaulted};
    std::set<std::pair<std::string, std::pair<bool, int>>> seen;
    for (const auto& a : file.action) {
        const auto g = basis->generator_index(a.generator);
        if (!g)
            throw RingFileError(a.span.line, a.span.column, "unknown generator '" + a.generator + "'");
        if (!seen.insert({a.generator, {a.op.bockstein, a.op.power}}).second)
            throw RingFileError(a.span.line, a.span.column,
                                "duplicate entry for " + letter_name(a.op, basis->prime()) + "(" + a.generator + ")");
        const int target = basis->generators()[*g].degree + letter_degree(a.op, basis->prime());
        if (a.value_degree >= 0 && a.value_degree != target)
            throw RingFileError(a.span.line, a.span.column,
                                letter_name(a.op, basis->prime()) + "(" + a.generator + ") must have degree " +
                                    std::to_string(target) + ", the value has degree " +
                                    std::to_string(a.value_degree));
        if (target > basis->cap())
            throw RingFileError(a.span.line, a.span.column,
                                "target degree " + std::to_string(target) + " exceeds the cap " +
                                    std::to_string(basis->cap()));
        try {
            const RingElement v = a.value_degree < 0 ? basis->zero(target) : basis->reduce(a.value, target);
            out.table.set(*g, a.op, v);
        } catch (const std::exception& e) {
            throw RingFileError(a.span.line, a.span.column, e.what());
        }
    }
    return out;
}

LoadedRing load_ring_text(const std::string& text)
{
    return load_ring(parse_ring_file(text));
}

LoadedRing load_ring_path(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw RingFileError(0, 0, "cannot read ring file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return load_ring_text(ss.str());
    } catch (const RingFileError& e) {
        throw RingFileError(path, e);
    }
}

RingElement parse_ring_element(const std::string& text, const RingBasis& basis, int zero_degree)
{
    const Polynomial poly = parse_polynomial(text, basis.generators(), basis.prime());
    const int d = polynomial_degree(poly, basis.generators());
    if (d < 0)
        return basis.zero(zero_degree);
    if (d > basis.cap())
        throw std::invalid_argument("element degree " + std::to_string(d) + " exceeds the cap " +
                                    std::to_string(basis.cap()));
    return basis.reduce(poly, d);
}

} // namespace steenrod
