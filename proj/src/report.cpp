#include "steenrod/report.hpp"

#include <iomanip>
#include <sstream>

namespace steenrod {

PeriodicityReport periodicity_report(const RingBasis& basis, bool minimal_only, std::size_t enumeration_bound)
{
    PeriodicityReport r;
    r.cap = basis.cap();
    r.minimal_only = minimal_only;
    if (minimal_only) {
        const MinimalPeriod m = minimal_period(basis, enumeration_bound);
        r.minimal = m.k;
        r.incomplete = m.incomplete;
        if (m.k)
            r.searches.push_back(find_periodicity_elements(basis, *m.k, enumeration_bound));
        return r;
    }
    for (int k = 1; 2 * k <= basis.cap(); ++k) {
        if (basis.dimension(k) == 0)
            continue;
        PeriodicitySearch s = find_periodicity_elements(basis, k, enumeration_bound);
        if (s.incomplete)
            r.incomplete = true;
        if (!s.elements.empty() && !r.minimal && !r.incomplete)
            r.minimal = k;
        if (!s.elements.empty() || s.incomplete)
            r.searches.push_back(std::move(s));
    }
    return r;
}

std::string status_of(bool passed)
{
    return passed ? "pass" : "fail";
}

Json document(const std::string& command, const std::string& status, const Json& payload)
{
    Json d;
    d["schema"] = kReportSchema;
    d["command"] = command;
    d["status"] = status;
    for (const auto& [k, v] : payload.items())
        d[k] = v;
    return d;
}

Json to_json(const VerificationReport& r, bool timing)
{
    Json j;
    j["id"] = r.id;
    Json params = Json::object();
    for (const auto& [k, v] : r.params)
        std::visit([&, &key = k](const auto& x) { params[key] = x; }, v);
    j["params"] = params;
    j["passed"] = r.passed;
    j["vacuous"] = r.vacuous;
    if (!r.conclusion.empty())
        j["conclusion"] = r.conclusion;
    Json checks = Json::array();
    for (const auto& c : r.checks)
        checks.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    j["checks"] = checks;
    j["witnesses"] = r.witnesses;
    j["notes"] = r.notes;
    if (timing && r.seconds)
        j["seconds"] = *r.seconds;
    return j;
}

Json to_json(const CoherenceReport& r)
{
    Json j;
    j["degree_limit"] = r.degree_limit;
    j["checks"] = r.checks;
    j["passed"] = r.passed();
    Json v = Json::array();
    for (const auto& x : r.violations)
        v.push_back(Json{{"degree", x.degree},
                         {"kind", x.kind},
                         {"relation", x.relation},
                         {"element", x.element},
                         {"lhs", x.lhs},
                         {"rhs", x.rhs}});
    j["violations"] = v;
    return j;
}

Json to_json(const PeriodicityReport& r, const RingBasis& basis)
{
    Json j;
    j["cap"] = r.cap;
    j["minimal_only"] = r.minimal_only;
    j["minimal_period"] = r.minimal ? Json(*r.minimal) : Json(nullptr);
    j["incomplete"] = r.incomplete;
    Json s = Json::array();
    for (const auto& p : r.searches) {
        Json e = Json::array();
        for (const auto& x : p.elements)
            e.push_back(basis.to_string(x));
        s.push_back(Json{{"k", p.k},
                         {"elements", e},
                         {"verified_from", p.verified_from},
                         {"verified_to", p.verified_to},
                         {"incomplete", p.incomplete}});
    }
    j["searches"] = s;
    return j;
}

std::string to_text(const VerificationReport& r, bool timing)
{
    std::ostringstream os;
    os << r.id;
    if (!r.params.empty()) {
        os << " (";
        for (std::size_t i = 0; i < r.params.size(); ++i)
        {
            os << (i ? ", " : "") << r.params[i].first << " = ";
            std::visit([&](const auto& x) { os << x; }, r.params[i].second);
        }
        os << ")";
    }
    os << ": " << (r.passed ? "PASS" : "FAIL");
    if (r.vacuous)
        os << " (vacuous)";
    if (!r.conclusion.empty())
        os << ", conclusion: " << r.conclusion;
    if (timing && r.seconds)
        os << " [" << std::fixed << std::setprecision(3) << *r.seconds << " s]";
    os << '\n';
    for (const auto& c : r.checks)
        os << "  [" << (c.passed ? "pass" : "FAIL") << "] " << c.name << (c.detail.empty() ? "" : ": " + c.detail)
           << '\n';
    for (const auto& w : r.witnesses)
        os << "  witness: " << w << '\n';
    for (const auto& n : r.notes)
        os << "  note: " << n << '\n';
    return os.str();
}

std::string to_text(const CoherenceReport& r)
{
    std::ostringstream os;
    os << "coherence up to degree " << r.degree_limit << ": " << (r.passed() ? "PASS" : "FAIL") << ", " << r.checks
       << " identities checked, " << r.violations.size() << " violations\n";
    for (const auto& v : r.violations)
        os << "  degree " << v.degree << ", " << v.kind << ": " << v.relation << " on " << v.element << ": " << v.lhs
           << " vs " << v.rhs << '\n';
    return os.str();
}

std::string to_text(const PeriodicityReport& r, const RingBasis& basis)
{
    std::ostringstream os;
    os << "minimal period: " << (r.minimal ? std::to_string(*r.minimal) : std::string("none")) << " (cap "
       << r.cap << (r.incomplete ? ", search incomplete" : "") << ")\n";
    for (const auto& s : r.searches) {
        os << "  k = " << s.k << ":";
        if (s.elements.empty())
            os << " none";
        for (std::size_t i = 0; i < s.elements.size(); ++i)
            os << (i ? ", " : " ") << basis.to_string(s.elements[i]);
        os << " (verified for " << s.verified_from << " <= i <= " << s.verified_to << ")";
        if (s.incomplete)
            os << " incomplete";
        os << '\n';
    }
    return os.str();
}

} // namespace steenrod
