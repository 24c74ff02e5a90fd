#include "steenrod/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "steenrod/expr.hpp"
#include "steenrod/paper_verifier.hpp"
#include "steenrod/report.hpp"
#include "steenrod/ring_file.hpp"
#include "steenrod/steenrod_core.hpp"
#include "steenrod/unstable_action.hpp"

namespace steenrod {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Options {
    bool json = false;
    bool timing = false;
    std::optional<unsigned> workers;

    int prime = 2;
    std::string expr;
    int degree = 0;
    int k = 0;
    std::string ring;
    std::string element;
    bool min = false;
    std::optional<int> limit;

    std::string verify_id;
    std::vector<int> ks;
    int k_max = 64;
    std::optional<int> p, lambda, a;
    std::optional<int> cap;
    std::string model = "multiples-of-8";
};

struct Output {
    std::ostream& out;
    std::ostream& err;
    const Options& opt;
    std::string command;

    void emit(const std::string& status, const Json& payload, const std::string& text) const
    {
        if (opt.json)
            out << document(command, status, payload).dump(2) << '\n';
        else
            out << text;
    }

    int error(const std::string& kind, const std::string& message, Json extra = Json::object(),
              const std::string& excerpt = {}) const
    {
        if (opt.json) {
            Json e;
            e["kind"] = kind;
            e["message"] = message;
            for (const auto& [k, v] : extra.items())
                e[k] = v;
            out << document(command, "error", Json{{"error", e}}).dump(2) << '\n';
        } else {
            err << "steenrod " << command << ": " << message << '\n' << excerpt;
        }
        return kExitUsage;
    }
};

unsigned default_workers()
{
    const char* env = std::getenv("STEENROD_WORKERS");
    if (!env || !*env)
        return 1;
    try {
        std::size_t used = 0;
        const unsigned long n = std::stoul(env, &used);
        if (used == std::string(env).size() && n >= 1 && n <= 256)
            return static_cast<unsigned>(n);
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("STEENROD_WORKERS must be an integer in [1, 256], got '") + env + "'");
}

Prime checked_prime(int p)
{
    if (p < 2)
        throw UsageError("prime must be at least 2");
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0)
            throw UsageError(std::to_string(p) + " is not prime");
    return Prime(static_cast<std::uint32_t>(p));
}

/// The offending input line with a caret under the error position.
std::string excerpt(const std::string& text, const SourceSpan& at)
{
    std::istringstream in(text);
    std::string line;
    for (int i = 0; i < at.line && std::getline(in, line);)
        ++i;
    return "  " + line + "\n  " + std::string(static_cast<std::size_t>(std::max(0, at.column - 1)), ' ') + "^\n";
}

const char* kind_name(ParseError::Kind k)
{
    switch (k) {
    case ParseError::Kind::Lexical:
        return "lexical";
    case ParseError::Kind::Syntax:
        return "syntax";
    case ParseError::Kind::Semantic:
        return "semantic";
    }
    return "syntax";
}

int parse_error(const Output& o, const ParseError& e, const std::string& input, const std::string& what)
{
    Json extra{{"input", input},
               {"line", e.where().line},
               {"column", e.where().column},
               {"expected", e.expected()}};
    return o.error(kind_name(e.kind()), what + ": " + e.what(), extra, excerpt(input, e.where()));
}

int ring_error(const Output& o, const RingFileError& e)
{
    Json extra{{"line", e.line()}, {"column", e.column()}};
    return o.error("ring-file", e.what(), extra);
}

int cmd_normalize(const Output& o)
{
    const Prime p = checked_prime(o.opt.prime);
    SteenrodElement in(p);
    try {
        in = parse_element(o.opt.expr, p);
    } catch (const ParseError& e) {
        return parse_error(o, e, o.opt.expr, "expression");
    }
    const SteenrodElement nf = normalize(in);
    Json payload{{"prime", p.value()}, {"input", o.opt.expr}, {"normal_form", print(nf)}};
    const auto deg = nf.degree();
    payload["degree"] = deg ? Json(*deg) : Json(nullptr);
    o.emit("ok", payload, print(nf) + "\n");
    return kExitOk;
}

int cmd_basis(const Output& o)
{
    const Prime p = checked_prime(o.opt.prime);
    if (o.opt.degree < 0)
        throw UsageError("degree must be non-negative");
    const auto basis = admissible_basis(o.opt.degree, p);
    Json list = Json::array();
    std::string text;
    for (const auto& m : basis) {
        list.push_back(m.to_string());
        text += m.to_string() + "\n";
    }
    o.emit("ok", Json{{"prime", p.value()}, {"degree", o.opt.degree}, {"dimension", basis.size()}, {"basis", list}},
           text);
    return kExitOk;
}

int cmd_decompose(const Output& o)
{
    const int k = o.opt.k;
    if (k < 1)
        throw UsageError("k must be positive");
    if (is_power_of_two(k)) {
        const std::string msg = "Sq^" + std::to_string(k) + " is indecomposable: " + std::to_string(k) +
                                " is a power of two, so Sq^" + std::to_string(k) +
                                " is not a sum of composites of lower squares";
        o.emit("refused", Json{{"k", k}, {"power_of_two", true}, {"message", msg}}, msg + "\n");
        return kExitFailure;
    }
    const AdemDecomposition d = decompose_power(k);
    const bool recombines = normalize(d.recombine()) == SteenrodElement::sq({k});
    Json summands = Json::array();
    for (const auto& [i, a] : d.summands)
        summands.push_back(Json{{"i", i}, {"a", print(a)}});
    Json payload{{"k", k}, {"power_of_two", false}, {"decomposition", d.to_string()}, {"summands", summands},
                 {"recombines", recombines}};
    o.emit(recombines ? "ok" : "fail", payload,
           d.to_string() + "\n" + (recombines ? "" : "warning: the decomposition does not normalize back\n"));
    return recombines ? kExitOk : kExitFailure;
}

int cmd_act(const Output& o)
{
    std::optional<LoadedRing> ring;
    try {
        ring.emplace(load_ring_path(o.opt.ring));
    } catch (const RingFileError& e) {
        return ring_error(o, e);
    }
    const RingBasis& basis = *ring->basis;
    const Prime p = basis.prime();
    SteenrodElement op(p);
    try {
        op = parse_element(o.opt.expr, p);
    } catch (const ParseError& e) {
        return parse_error(o, e, o.opt.expr, "expression");
    }
    std::optional<RingElement> e;
    try {
        e = parse_ring_element(o.opt.element, basis);
    } catch (const RingFileError& ex) {
        return o.error("element", std::string("element: ") + ex.what(), Json{{"input", o.opt.element}});
    } catch (const std::invalid_argument& ex) {
        return o.error("element", std::string("element: ") + ex.what(), Json{{"input", o.opt.element}});
    }
    RingElement result(p, 0);
    try {
        result = act(op, *e, ring->table);
    } catch (const DegreeOverflow& ex) {
        return o.error("degree", ex.what());
    } catch (const MissingActionValue& ex) {
        return o.error("ring-file", std::string("incomplete action table: ") + ex.what());
    }
    const std::string value = basis.to_string(result);
    Json payload{{"ring", o.opt.ring},
                 {"operation", print(normalize(op))},
                 {"element", basis.to_string(*e)},
                 {"degree", result.is_zero() ? Json(nullptr) : Json(result.degree())},
                 {"value", value}};
    o.emit("ok", payload, value + "\n");
    return kExitOk;
}

int cmd_periodicity(const Output& o)
{
    std::optional<LoadedRing> ring;
    try {
        ring.emplace(load_ring_path(o.opt.ring));
    } catch (const RingFileError& e) {
        return ring_error(o, e);
    }
    const PeriodicityReport r = periodicity_report(*ring->basis, o.opt.min);
    const int code = r.incomplete ? kExitIncomplete : r.minimal ? kExitOk : kExitFailure;
    const std::string status = code == kExitOk ? "pass" : code == kExitIncomplete ? "incomplete" : "fail";
    Json payload{{"ring", o.opt.ring}};
    const Json body = to_json(r, *ring->basis);
    for (const auto& [k, v] : body.items())
        payload[k] = v;
    o.emit(status, payload, to_text(r, *ring->basis));
    return code;
}

int cmd_coherence(const Output& o, unsigned workers)
{
    std::optional<LoadedRing> ring;
    try {
        ring.emplace(load_ring_path(o.opt.ring));
    } catch (const RingFileError& e) {
        return ring_error(o, e);
    }
    const int limit = o.opt.limit.value_or(ring->basis->cap());
    if (limit < 0 || limit > ring->basis->cap())
        throw UsageError("limit must lie in [0, cap = " + std::to_string(ring->basis->cap()) + "]");
    const CoherenceReport r = check_adem_coherence(ring->table, limit, workers);
    Json payload{{"ring", o.opt.ring}};
    const Json body = to_json(r);
    for (const auto& [k, v] : body.items())
        payload[k] = v;
    o.emit(status_of(r.passed()), payload, to_text(r));
    return r.passed() ? kExitOk : kExitFailure;
}

using Job = std::function<VerificationReport()>;

std::vector<Job> verify_jobs(const Options& opt, unsigned workers)
{
    const std::string& id = opt.verify_id;
    std::vector<Job> jobs;
    if (id == "power-of-two") {
        const int k_max = opt.k_max;
        jobs.push_back([k_max] { return verify_power_of_two(k_max); });
    } else if (id == "s4-family1" || id == "s4-family2") {
        const std::vector<int> ks = opt.ks.empty() ? std::vector<int>{8, 16, 32, 64} : opt.ks;
        for (int k : ks) {
            if (k < 8 || k > 64 || !is_power_of_two(k))
                throw UsageError("k must be one of 8, 16, 32, 64");
            if (id == "s4-family1")
                jobs.push_back([k] { return verify_section4_family1(k); });
            else
                jobs.push_back([k] { return verify_section4_family2(k); });
        }
    } else if (id == "claim1" || id == "claim2" || id == "claim3" || id == "final-coeff") {
        std::vector<OddParameters> matrix;
        if (opt.p || opt.lambda || opt.a) {
            if (!opt.p)
                throw UsageError("-p is required with --lambda or -a");
            matrix.push_back({*opt.p, opt.lambda.value_or(1), opt.a.value_or(1)});
        } else {
            matrix = default_parameter_matrix();
        }
        using Fn = VerificationReport (*)(const OddParameters&, const Rewriter*);
        const Fn fn = id == "claim1"   ? &verify_claim1
                      : id == "claim2" ? &verify_claim2
                      : id == "claim3" ? &verify_claim3
                                       : &verify_final_coefficient;
        for (const auto& q : matrix)
            jobs.push_back([fn, q] { return fn(q, nullptr); });
    } else if (id == "s3-discussion") {
        const int cap = opt.cap.value_or(48);
        Section3Model model;
        if (opt.model == "multiples-of-8")
            model = Section3Model::MultiplesOfEight;
        else if (opt.model == "extra-degree-4")
            model = Section3Model::ExtraDegreeFour;
        else
            throw UsageError("model must be multiples-of-8 or extra-degree-4");
        jobs.push_back([cap, model] { return verify_section3_discussion(cap, model); });
    } else if (id == "candidate-16") {
        CandidateOptions c;
        c.cap = opt.cap.value_or(64);
        c.workers = workers;
        jobs.push_back([c] { return check_counterexample_candidate(c); });
    } else {
        throw UsageError("unknown verification id '" + id +
                         "' (expected power-of-two, s4-family1, s4-family2, claim1, claim2, claim3, "
                         "final-coeff, s3-discussion or candidate-16)");
    }
    return jobs;
}

int cmd_verify(const Output& o, unsigned workers)
{
    std::vector<Job> jobs = verify_jobs(o.opt, workers);
    for (auto& j : jobs)
        j = [inner = std::move(j)] {
            const auto t0 = std::chrono::steady_clock::now();
            VerificationReport r = inner();
            r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            return r;
        };
    // Candidate checks parallelise internally; the outer fan-out is for matrices.
    const unsigned outer = o.opt.verify_id == "candidate-16" ? 1 : workers;
    const std::vector<VerificationReport> reports = run_parallel(jobs, outer);

    std::size_t passed = 0;
    Json list = Json::array();
    std::string text;
    for (const auto& r : reports) {
        passed += r.passed ? 1 : 0;
        list.push_back(to_json(r, o.opt.timing));
        text += to_text(r, o.opt.timing);
    }
    const bool ok = passed == reports.size();
    text += o.opt.verify_id + ": " + std::to_string(passed) + "/" + std::to_string(reports.size()) + " passed\n";
    Json payload{{"verification", o.opt.verify_id},
                 {"summary", Json{{"total", reports.size()}, {"passed", passed}, {"failed", reports.size() - passed}}},
                 {"reports", list}};
    o.emit(status_of(ok), payload, text);
    return ok ? kExitOk : kExitFailure;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    Options opt;
    CLI::App app{"Steenrod algebra computations and checks", "steenrod"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "steenrod 1.0");

    auto common = [&](CLI::App* sub) {
        sub->add_flag("--json", opt.json, "Emit a JSON report document");
        sub->add_option("--workers", opt.workers, "Worker threads (default: $STEENROD_WORKERS or 1)")
            ->check(CLI::Range(1, 256));
    };
    common(&app);

    auto* normalize_cmd = app.add_subcommand("normalize", "Admissible normal form of an expression");
    normalize_cmd->add_option("-p,--prime", opt.prime, "Prime")->required();
    normalize_cmd->add_option("expr", opt.expr, "Expression, e.g. \"Sq^2 Sq^2\"")->required();

    auto* basis_cmd = app.add_subcommand("basis", "Admissible basis in one degree");
    basis_cmd->add_option("-p,--prime", opt.prime, "Prime")->required();
    basis_cmd->add_option("-d,--degree", opt.degree, "Degree")->required();

    auto* decompose_cmd = app.add_subcommand("decompose", "Write Sq^k through lower squares");
    decompose_cmd->add_option("-k", opt.k, "Degree k")->required();

    auto* act_cmd = app.add_subcommand("act", "Apply an operation to a ring element");
    act_cmd->add_option("-r,--ring", opt.ring, "Ring file")->required();
    act_cmd->add_option("expr", opt.expr, "Operation")->required();
    act_cmd->add_option("element", opt.element, "Polynomial in the generators")->required();

    auto* period_cmd = app.add_subcommand("periodicity", "Search for periodicity elements");
    period_cmd->add_option("-r,--ring", opt.ring, "Ring file")->required();
    period_cmd->add_flag("--min", opt.min, "Stop at the minimal period");

    auto* coherence_cmd = app.add_subcommand("coherence", "Check the action against the Adem relations");
    coherence_cmd->add_option("-r,--ring", opt.ring, "Ring file")->required();
    coherence_cmd->add_option("--limit", opt.limit, "Degree limit (default: cap)");

    auto* verify_cmd = app.add_subcommand("verify", "Run a verification");
    verify_cmd->add_option("id", opt.verify_id,
                           "power-of-two, s4-family1, s4-family2, claim1, claim2, claim3, final-coeff, "
                           "s3-discussion or candidate-16")
        ->required();
    verify_cmd->add_option("--k-max", opt.k_max, "power-of-two: largest k");
    verify_cmd->add_option("-k", opt.ks, "s4-family1/2: degrees (default 8 16 32 64)");
    verify_cmd->add_option("-p", opt.p, "claims: prime");
    verify_cmd->add_option("--lambda", opt.lambda, "claims: lambda dividing p - 1 (default 1)");
    verify_cmd->add_option("-a", opt.a, "claims: exponent a (default 1)");
    verify_cmd->add_option("--cap", opt.cap, "s3-discussion, candidate-16: degree cap");
    verify_cmd->add_option("--model", opt.model, "s3-discussion: multiples-of-8 or extra-degree-4");
    verify_cmd->add_flag("--timing", opt.timing, "Include wall-clock times");

    for (auto* sub : {normalize_cmd, basis_cmd, decompose_cmd, act_cmd, period_cmd, coherence_cmd, verify_cmd})
        common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    std::string command;
    for (auto* sub : app.get_subcommands())
        command = sub->get_name();
    Output o{out, err, opt, command};
    try {
        const unsigned workers = opt.workers ? *opt.workers : default_workers();
        if (command == "normalize")
            return cmd_normalize(o);
        if (command == "basis")
            return cmd_basis(o);
        if (command == "decompose")
            return cmd_decompose(o);
        if (command == "act")
            return cmd_act(o);
        if (command == "periodicity")
            return cmd_periodicity(o);
        if (command == "coherence")
            return cmd_coherence(o, workers);
        return cmd_verify(o, workers);
    } catch (const UsageError& e) {
        return o.error("usage", e.what());
    } catch (const std::invalid_argument& e) {
        return o.error("usage", e.what());
    } catch (const std::domain_error& e) {
        return o.error("usage", e.what());
    } catch (const std::out_of_range& e) {
        return o.error("usage", e.what());
    }
}

} // namespace steenrod
