#include "steenrod/unstable_action.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <thread>
#include <tuple>

#include "steenrod/linalg.hpp"

namespace steenrod {

MissingActionValue::MissingActionValue(std::string generator, std::string operation)
    : std::runtime_error("action table has no value for " + operation + "(" + generator + ")"),
      generator_(std::move(generator)), operation_(std::move(operation))
{
}

std::string letter_name(Letter l, Prime p)
{
    if (l.bockstein)
        return "b";
    return (p.is_two() ? "Sq^" : "P^") + std::to_string(l.power);
}

// ---------------------------------------------------------------- ActionTable

ActionTable::ActionTable(std::shared_ptr<const RingBasis> ring) : ring_(std::move(ring))
{
    if (!ring_)
        throw std::invalid_argument("ActionTable needs a ring");
}

int ActionTable::target_degree(std::size_t generator, Letter op) const
{
    return ring_->generators().at(generator).degree + letter_degree(op, prime());
}

std::optional<RingElement> ActionTable::forced(std::size_t g, Letter op) const
{
    const int deg = ring_->generators().at(g).degree;
    if (op.bockstein)
        return std::nullopt;
    if (op.power == 0)
        return ring_->generator(g);
    // Sq^i / P^s as a multiple of the generator degree
    const int scaled = prime().is_two() ? op.power : 2 * op.power;
    if (scaled > deg)
        return ring_->zero(target_degree(g, op));
    if (scaled == deg)
        return ring_->power(ring_->generator(g), static_cast<int>(prime().value()));
    return std::nullopt;
}

bool ActionTable::is_stored_slot(std::size_t generator, Letter op) const
{
    if (op.bockstein)
        return prime().is_odd();
    return op.power > 0 && !forced(generator, op);
}

void ActionTable::set(std::size_t g, Letter op, const RingElement& value)
{
    if (g >= ring_->generators().size())
        throw std::invalid_argument("no generator with index " + std::to_string(g));
    const std::string& name = ring_->generators()[g].name;
    const std::string what = letter_name(op, prime()) + "(" + name + ")";
    if (op.bockstein && prime().is_two())
        throw std::invalid_argument("Bockstein entry " + what + " at p = 2");
    if (op.power < 0)
        throw std::invalid_argument("negative exponent in " + what);
    const int d = target_degree(g, op);
    if (value.degree() != d)
        throw std::invalid_argument(what + " must have degree " + std::to_string(d) + ", got " +
                                    std::to_string(value.degree()));
    if (d > ring_->cap())
        throw std::invalid_argument(what + " lands in degree " + std::to_string(d) + " above the cap");
    if (auto f = forced(g, op)) {
        if (!(*f == value))
            throw std::invalid_argument(what + " is fixed by the unstable axioms to " + ring_->to_string(*f));
        return;
    }
    if (ring_->dimension(d) == 0 && !value.is_zero())
        throw std::invalid_argument(what + " targets the zero group in degree " + std::to_string(d));
    entries_.insert_or_assign(Key{g, {op.bockstein, op.power}}, value);
}

void ActionTable::set(const std::string& generator, Letter op, const RingElement& value)
{
    auto g = ring_->generator_index(generator);
    if (!g)
        throw std::invalid_argument("unknown generator " + generator);
    set(*g, op, value);
}

RingElement ActionTable::value(std::size_t g, Letter op) const
{
    const int d = target_degree(g, op);
    if (d > ring_->cap())
        throw DegreeOverflow(letter_name(op, prime()) + "(" + ring_->generators().at(g).name +
                             ") lands above the cap");
    if (auto f = forced(g, op))
        return *f;
    auto it = entries_.find(Key{g, {op.bockstein, op.power}});
    if (it != entries_.end())
        return it->second;
    if (ring_->dimension(d) == 0)
        return ring_->zero(d);
    throw MissingActionValue(ring_->generators()[g].name, letter_name(op, prime()));
}

// ------------------------------------------------------------ ActionEvaluator

std::size_t ActionEvaluator::KeyHash::operator()(const std::pair<int, Exponents>& k) const
{
    std::size_t h = std::hash<int>()(k.first);
    for (int e : k.second)
        h = h * 1000003u ^ std::hash<int>()(e);
    return h;
}

const RingElement& ActionEvaluator::on_monomial(Letter op, const Exponents& m)
{
    auto key = std::make_pair(op.bockstein ? -1 : op.power, m);
    auto it = memo_.find(key);
    if (it != memo_.end())
        return it->second;
    RingElement v = compute(op, m);
    return memo_.emplace(std::move(key), std::move(v)).first->second;
}

RingElement ActionEvaluator::compute(Letter op, const Exponents& m)
{
    const RingBasis& ring = table_.ring();
    const Prime p = ring.prime();
    const int deg = ring.degree_of(m);
    const int target = deg + letter_degree(op, p);
    if (target > ring.cap())
        throw DegreeOverflow(letter_name(op, p) + " on " + ring.monomial_to_string(m) + " lands in degree " +
                             std::to_string(target) + " above the cap");
    if (!op.bockstein && op.power == 0)
        return ring.reduce(m);
    auto first = std::find_if(m.begin(), m.end(), [](int e) { return e > 0; });
    if (first == m.end())
        return ring.zero(target);

    const auto g = static_cast<std::size_t>(first - m.begin());
    const int gdeg = ring.generators()[g].degree;
    Exponents rest = m;
    --rest[g];
    const int rest_deg = deg - gdeg;
    RingElement out = ring.zero(target);

    if (op.bockstein) {
        // b(g r) = b(g) r + (-1)^|g| g b(r)
        out += ring.multiply(table_.value(g, op), ring.reduce(rest));
        if (rest_deg > 0)
            out += ring.multiply(ring.generator(g), on_monomial(op, rest)).scaled(p.sign(gdeg));
        return out;
    }
    const int k = op.power;
    const int unit = p.is_two() ? 1 : 2; // degree scale of the unstable bound
    for (int i = 0; i <= k && unit * i <= gdeg; ++i) {
        const int j = k - i;
        if (unit * j > rest_deg)
            continue;
        RingElement vg = table_.value(g, Letter{false, i});
        if (vg.is_zero())
            continue;
        out += ring.multiply(vg, on_monomial(Letter{false, j}, rest));
    }
    return out;
}

RingElement ActionEvaluator::apply(Letter op, const RingElement& e)
{
    const RingBasis& ring = table_.ring();
    const int target = e.degree() + letter_degree(op, ring.prime());
    if (target > ring.cap())
        throw DegreeOverflow(letter_name(op, ring.prime()) + " on a class of degree " +
                             std::to_string(e.degree()) + " lands above the cap");
    RingElement out = ring.zero(target);
    const auto& basis = ring.basis(e.degree());
    for (auto [i, c] : e.terms())
        out += on_monomial(op, basis[i]).scaled(c);
    return out;
}

RingElement ActionEvaluator::act(const SteenrodMonomial& m, const RingElement& e)
{
    if (!(m.prime() == table_.prime()))
        throw std::invalid_argument("operation and ring use different primes");
    if (e.degree() + m.degree() > table_.ring().cap())
        throw DegreeOverflow(m.to_string() + " on a class of degree " + std::to_string(e.degree()) +
                             " lands above the cap");
    const auto letters = m.letters();
    RingElement cur = e;
    for (auto it = letters.rbegin(); it != letters.rend(); ++it)
        cur = apply(*it, cur);
    return cur;
}

RingElement ActionEvaluator::act(const SteenrodElement& op, const RingElement& e)
{
    auto d = op.degree();
    if (!op.is_zero() && !d)
        throw std::invalid_argument("cannot act with an inhomogeneous operation");
    RingElement out = table_.ring().zero(e.degree() + d.value_or(0));
    for (const auto& [m, c] : op.terms())
        out += act(m, e).scaled(c);
    return out;
}

RingElement act(const SteenrodElement& op, const RingElement& e, const ActionTable& table)
{
    ActionEvaluator ev(table);
    return ev.act(op, e);
}

// ------------------------------------------------------------- faithful model

ActionTable faithful_model(int n, Prime p, int cap)
{
    if (n < 1)
        throw std::invalid_argument("faithful_model needs n >= 1");
    RingPresentation pres{p, {}, {}, cap};
    if (p.is_odd())
        for (int i = 1; i <= n; ++i)
            pres.generators.push_back({"e" + std::to_string(i), 1});
    for (int i = 1; i <= n; ++i)
        pres.generators.push_back({"t" + std::to_string(i), p.is_two() ? 1 : 2});
    ActionTable table(RingBasis::compute(pres));
    if (p.is_odd())
        for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
            const std::size_t t = i + static_cast<std::size_t>(n);
            table.set(i, Letter::beta(), table.ring().generator(t));
            if (cap >= 3)
                table.set(t, Letter::beta(), table.ring().zero(3));
        }
    return table;
}

// ------------------------------------------------------------------ coherence

namespace {

struct Job {
    std::function<void(ActionEvaluator&, std::vector<CoherenceViolation>&, std::size_t&)> run;
};

} // namespace

CoherenceReport check_adem_coherence(const ActionTable& table, int degree_limit, unsigned workers)
{
    const RingBasis& ring = table.ring();
    const Prime p = ring.prime();
    if (degree_limit > ring.cap())
        throw std::invalid_argument("coherence limit " + std::to_string(degree_limit) + " exceeds the cap " +
                                    std::to_string(ring.cap()));
    CoherenceReport report;
    report.degree_limit = degree_limit;

    auto class_name = [&](int d, std::size_t i) { return ring.monomial_to_string(ring.basis(d)[i]); };

    std::vector<Job> jobs;

    // inadmissible composites against their normal forms
    std::vector<SteenrodMonomial> composites;
    const int pd = p.is_two() ? 1 : 2 * static_cast<int>(p.value() - 1);
    for (int a = 1; a * pd <= degree_limit; ++a)
        for (int b = 1; (a + b) * pd <= degree_limit; ++b) {
            if (p.is_two()) {
                if (a < 2 * b)
                    composites.push_back(SteenrodMonomial::sq({a, b}));
                continue;
            }
            const auto pa = static_cast<int>(p.value()) * b;
            if (a < pa)
                composites.push_back(*SteenrodMonomial::from_letters(p, std::vector<Letter>{Letter::P(a), Letter::P(b)}));
            if (a <= pa && (a + b) * pd + 1 <= degree_limit)
                composites.push_back(*SteenrodMonomial::from_letters(
                    p, std::vector<Letter>{Letter::P(a), Letter::beta(), Letter::P(b)}));
        }
    for (const auto& comp : composites) {
        jobs.push_back({[&, comp](ActionEvaluator& ev, std::vector<CoherenceViolation>& out, std::size_t& checks) {
            const SteenrodElement normal = normalize(comp);
            const std::string relation = comp.to_string() + " = " + normal.to_string();
            const int s = comp.degree();
            for (int d = 0; d + s <= degree_limit; ++d)
                for (std::size_t i = 0; i < ring.dimension(d); ++i) {
                    ++checks;
                    const RingElement b = RingElement::basis_vector(p, d, static_cast<std::uint32_t>(i));
                    try {
                        RingElement lhs = ev.act(comp, b);
                        RingElement rhs = ring.zero(d + s);
                        for (const auto& [m, c] : normal.terms())
                            rhs += ev.act(m, b).scaled(c);
                        if (!(lhs == rhs))
                            out.push_back({d + s, "adem", relation, class_name(d, i), ring.to_string(lhs),
                                           ring.to_string(rhs)});
                    } catch (const MissingActionValue& e) {
                        out.push_back({d + s, "missing", relation, class_name(d, i), e.what(), ""});
                    }
                }
        }});
    }

    // b b = 0
    if (p.is_odd())
        jobs.push_back({[&](ActionEvaluator& ev, std::vector<CoherenceViolation>& out, std::size_t& checks) {
            for (int d = 0; d + 2 <= degree_limit; ++d)
                for (std::size_t i = 0; i < ring.dimension(d); ++i) {
                    ++checks;
                    const RingElement b = RingElement::basis_vector(p, d, static_cast<std::uint32_t>(i));
                    try {
                        RingElement v = ev.apply(Letter::beta(), ev.apply(Letter::beta(), b));
                        if (!v.is_zero())
                            out.push_back({d + 2, "bockstein", "b b = 0", class_name(d, i), ring.to_string(v), "0"});
                    } catch (const MissingActionValue& e) {
                        out.push_back({d + 2, "missing", "b b = 0", class_name(d, i), e.what(), ""});
                    }
                }
        }});

    // top operation is the p-th power
    jobs.push_back({[&](ActionEvaluator& ev, std::vector<CoherenceViolation>& out, std::size_t& checks) {
        const int q = static_cast<int>(p.value());
        for (int d = 1; d * q <= degree_limit; ++d) {
            if (p.is_odd() && d % 2)
                continue;
            const Letter top{false, p.is_two() ? d : d / 2};
            const std::string relation = letter_name(top, p) + "(u) = u^" + std::to_string(q);
            for (std::size_t i = 0; i < ring.dimension(d); ++i) {
                ++checks;
                const RingElement b = RingElement::basis_vector(p, d, static_cast<std::uint32_t>(i));
                try {
                    RingElement lhs = ev.apply(top, b);
                    RingElement rhs = ring.power(b, q);
                    if (!(lhs == rhs))
                        out.push_back({d * q, "unstable", relation, class_name(d, i), ring.to_string(lhs),
                                       ring.to_string(rhs)});
                } catch (const MissingActionValue& e) {
                    out.push_back({d * q, "missing", relation, class_name(d, i), e.what(), ""});
                }
            }
        }
    }});

    // every single operation sends each defining relation into the ideal
    for (const auto& rel : ring.presentation().relations) {
        jobs.push_back({[&](ActionEvaluator& ev, std::vector<CoherenceViolation>& out, std::size_t& checks) {
            std::vector<std::pair<Exponents, std::uint32_t>> terms;
            int e = -1;
            for (const auto& [m, c] : rel) {
                if (c % p.value() == 0)
                    continue;
                bool vanishes = false;
                for (std::size_t g = 0; g < m.size(); ++g)
                    vanishes = vanishes || (ring.is_odd_generator(g) && m[g] > 1);
                e = ring.degree_of(m);
                if (!vanishes)
                    terms.emplace_back(m, c);
            }
            if (terms.empty())
                return;
            Polynomial shown(terms.begin(), terms.end());
            std::string rel_name;
            for (const auto& [m, c] : shown)
                rel_name += (rel_name.empty() ? "" : " + ") + (c == 1 ? "" : std::to_string(c) + " ") +
                            ring.monomial_to_string(m);
            std::vector<Letter> ops;
            if (p.is_two()) {
                for (int i = 1; e + i <= degree_limit; ++i)
                    ops.push_back(Letter::sq(i));
            } else {
                if (e + 1 <= degree_limit)
                    ops.push_back(Letter::beta());
                for (int s = 1; e + s * pd <= degree_limit; ++s)
                    ops.push_back(Letter::P(s));
            }
            for (Letter op : ops) {
                ++checks;
                const int d = e + letter_degree(op, p);
                try {
                    RingElement v = ring.zero(d);
                    for (const auto& [m, c] : terms)
                        v += ev.on_monomial(op, m).scaled(c);
                    if (!v.is_zero())
                        out.push_back({d, "relation", letter_name(op, p) + "(" + rel_name + ") = 0", rel_name,
                                       ring.to_string(v), "0"});
                } catch (const MissingActionValue& ex) {
                    out.push_back({d, "missing", letter_name(op, p) + "(" + rel_name + ") = 0", rel_name, ex.what(), ""});
                }
            }
        }});
    }

    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(jobs.size())));
    std::vector<std::vector<CoherenceViolation>> found(workers);
    std::vector<std::size_t> counts(workers, 0);
    auto worker = [&](unsigned w) {
        ActionEvaluator ev(table);
        for (std::size_t j = w; j < jobs.size(); j += workers)
            jobs[j].run(ev, found[w], counts[w]);
    };
    if (workers == 1) {
        worker(0);
    } else {
        std::vector<std::thread> threads;
        for (unsigned w = 0; w < workers; ++w)
            threads.emplace_back(worker, w);
        for (auto& t : threads)
            t.join();
    }
    for (unsigned w = 0; w < workers; ++w) {
        report.checks += counts[w];
        report.violations.insert(report.violations.end(), found[w].begin(), found[w].end());
    }
    std::sort(report.violations.begin(), report.violations.end(), [](const auto& a, const auto& b) {
        return std::tie(a.degree, a.relation, a.element, a.kind) < std::tie(b.degree, b.relation, b.element, b.kind);
    });
    return report;
}

// ---------------------------------------------------------------- image audit

ImageAudit steenrod_image_audit(const ActionTable& table, const RingElement& x)
{
    const RingBasis& ring = table.ring();
    const Prime p = ring.prime();
    const int k = x.degree();
    ImageAudit out;
    ActionEvaluator ev(table);

    std::vector<std::pair<std::string, RingElement>> targets{{"x", x}};
    if (2 * k <= ring.cap()) {
        targets.emplace_back("x^2", ring.multiply(x, x));
        out.square_checked = true;
    }
    for (const auto& [name, t] : targets) {
        const int D = t.degree();
        std::vector<Letter> ops;
        if (p.is_two()) {
            for (int i = 1; i <= D; ++i)
                ops.push_back(Letter::sq(i));
        } else {
            ops.push_back(Letter::beta());
            for (int s = 1; 2 * s * static_cast<int>(p.value() - 1) <= D; ++s)
                ops.push_back(Letter::P(s));
        }
        for (Letter op : ops) {
            const int dy = D - letter_degree(op, p);
            if (name == "x^2" && (dy == k || dy == 2 * k))
                continue;
            const std::size_t n = ring.dimension(dy);
            if (n == 0)
                continue;
            Matrix m(ring.dimension(D), n);
            for (std::size_t l = 0; l < n; ++l) {
                const RingElement v = ev.apply(op, RingElement::basis_vector(p, dy, static_cast<std::uint32_t>(l)));
                for (auto [r, c] : v.terms())
                    m.at(r, l) = c;
            }
            if (auto y = solve(m, t.to_dense(ring.dimension(D)), p))
                out.witnesses.push_back({name, op, RingElement::from_dense(p, dy, *y)});
        }
    }
    return out;
}

} // namespace steenrod
