#include "steenrod/steenrod_core.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "steenrod/linalg.hpp"

namespace steenrod {

int letter_degree(Letter l, Prime p)
{
    if (l.bockstein)
        return 1;
    return p.is_two() ? l.power : 2 * l.power * static_cast<int>(p.value() - 1);
}

// ---------------------------------------------------------------------------
// SteenrodMonomial

SteenrodMonomial::SteenrodMonomial(Prime p) : prime_(p)
{
    if (p.is_odd())
        bocksteins_.push_back(0);
}

SteenrodMonomial SteenrodMonomial::sq(std::vector<int> exponents)
{
    std::vector<Letter> word;
    for (int i : exponents)
        word.push_back(Letter::sq(i));
    return *from_letters(Prime(2), word);
}

std::optional<SteenrodMonomial> SteenrodMonomial::from_letters(Prime p, std::span<const Letter> word)
{
    SteenrodMonomial m(p);
    for (const Letter& l : word) {
        if (l.bockstein) {
            if (p.is_two())
                throw std::invalid_argument("Bockstein letter at p = 2; use Sq^1");
            if (m.bocksteins_.back())
                return std::nullopt;
            m.bocksteins_.back() = 1;
            continue;
        }
        if (l.power < 0)
            throw std::invalid_argument("negative exponent in Steenrod word");
        if (l.power == 0)
            continue;
        m.powers_.push_back(l.power);
        if (p.is_odd())
            m.bocksteins_.push_back(0);
    }
    return m;
}

std::optional<SteenrodMonomial> SteenrodMonomial::from_alternating(Prime p, std::vector<int> powers,
                                                                   std::vector<std::uint8_t> bocksteins)
{
    if (p.is_two() || bocksteins.size() != powers.size() + 1)
        throw std::invalid_argument("alternating form needs odd p and n+1 Bockstein exponents");
    std::vector<Letter> word;
    for (std::size_t t = 0; t <= powers.size(); ++t) {
        if (bocksteins[t] > 1)
            throw std::invalid_argument("Bockstein exponent must be 0 or 1");
        if (bocksteins[t])
            word.push_back(Letter::beta());
        if (t < powers.size())
            word.push_back(Letter::P(powers[t]));
    }
    return from_letters(p, word);
}

std::vector<Letter> SteenrodMonomial::letters() const
{
    std::vector<Letter> word;
    if (prime_.is_two()) {
        for (int i : powers_)
            word.push_back(Letter::sq(i));
        return word;
    }
    for (std::size_t t = 0; t <= powers_.size(); ++t) {
        if (bocksteins_[t])
            word.push_back(Letter::beta());
        if (t < powers_.size())
            word.push_back(Letter::P(powers_[t]));
    }
    return word;
}

int SteenrodMonomial::degree() const
{
    int d = 0;
    for (const Letter& l : letters())
        d += letter_degree(l, prime_);
    return d;
}

bool SteenrodMonomial::is_identity() const
{
    if (!powers_.empty())
        return false;
    return prime_.is_two() || bocksteins_[0] == 0;
}

std::optional<std::size_t> SteenrodMonomial::inadmissible_pair(bool leftmost) const
{
    const int p = static_cast<int>(prime_.value());
    auto bad = [&](std::size_t t) {
        if (prime_.is_two())
            return powers_[t] < 2 * powers_[t + 1];
        return powers_[t] < p * powers_[t + 1] + bocksteins_[t + 1];
    };
    const std::size_t n = powers_.size();
    if (n < 2)
        return std::nullopt;
    if (leftmost) {
        for (std::size_t t = 0; t + 1 < n; ++t)
            if (bad(t))
                return t;
    } else {
        for (std::size_t t = n - 1; t-- > 0;)
            if (bad(t))
                return t;
    }
    return std::nullopt;
}

bool SteenrodMonomial::is_admissible() const { return !inadmissible_pair().has_value(); }

std::strong_ordering SteenrodMonomial::operator<=>(const SteenrodMonomial& o) const
{
    if (auto c = degree() <=> o.degree(); c != 0)
        return c;
    if (auto c = powers_.size() <=> o.powers_.size(); c != 0)
        return c;
    for (std::size_t t = 0; t <= powers_.size(); ++t) {
        if (!bocksteins_.empty())
            if (auto c = bocksteins_[t] <=> o.bocksteins_[t]; c != 0)
                return c;
        if (t < powers_.size())
            if (auto c = powers_[t] <=> o.powers_[t]; c != 0)
                return c;
    }
    return prime_.value() <=> o.prime_.value();
}

bool SteenrodMonomial::operator==(const SteenrodMonomial& o) const
{
    return prime_ == o.prime_ && powers_ == o.powers_ && bocksteins_ == o.bocksteins_;
}

std::string SteenrodMonomial::to_string() const
{
    if (is_identity())
        return prime_.is_two() ? "Sq^0" : "P^0";
    std::ostringstream os;
    bool first = true;
    for (const Letter& l : letters()) {
        if (!first)
            os << ' ';
        first = false;
        if (l.bockstein)
            os << 'b';
        else
            os << (prime_.is_two() ? "Sq^" : "P^") << l.power;
    }
    return os.str();
}

int excess(const SteenrodMonomial& m)
{
    if (!m.is_admissible())
        throw std::invalid_argument("excess of inadmissible monomial " + m.to_string());
    const auto& s = m.powers();
    if (m.prime().is_two()) {
        int e = s.empty() ? 0 : s[0];
        for (std::size_t j = 1; j < s.size(); ++j)
            e -= s[j];
        return e;
    }
    const auto& eps = m.bocksteins();
    if (s.empty())
        return eps[0];
    // 2 s_1 + e_0 minus the degree of everything to the right of P^{s_1}
    const int p = static_cast<int>(m.prime().value());
    int e = 2 * s[0] + eps[0];
    for (std::size_t j = 1; j < s.size(); ++j)
        e -= 2 * s[j] * (p - 1);
    for (std::size_t j = 1; j < eps.size(); ++j)
        e -= eps[j];
    return e;
}

// ---------------------------------------------------------------------------
// SteenrodElement

SteenrodElement::SteenrodElement(const SteenrodMonomial& m, std::uint32_t coefficient) : prime_(m.prime())
{
    add_term(m, coefficient);
}

SteenrodElement SteenrodElement::sq(std::vector<int> exponents)
{
    return SteenrodElement(SteenrodMonomial::sq(std::move(exponents)));
}

SteenrodElement SteenrodElement::word(Prime p, std::span<const Letter> letters)
{
    auto m = SteenrodMonomial::from_letters(p, letters);
    return m ? SteenrodElement(*m) : SteenrodElement(p);
}

std::uint32_t SteenrodElement::coefficient(const SteenrodMonomial& m) const
{
    auto it = terms_.find(m);
    return it == terms_.end() ? 0 : it->second;
}

std::optional<int> SteenrodElement::degree() const
{
    if (terms_.empty())
        return std::nullopt;
    int d = terms_.begin()->first.degree();
    for (const auto& [m, c] : terms_)
        if (m.degree() != d)
            return std::nullopt;
    return d;
}

bool SteenrodElement::is_admissible() const
{
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.is_admissible(); });
}

void SteenrodElement::add_term(const SteenrodMonomial& m, std::uint32_t coefficient)
{
    if (!(m.prime() == prime_))
        throw std::invalid_argument("monomial prime does not match element prime");
    coefficient %= prime_.value();
    if (coefficient == 0)
        return;
    auto [it, inserted] = terms_.try_emplace(m, coefficient);
    if (!inserted) {
        it->second = prime_.add(it->second, coefficient);
        if (it->second == 0)
            terms_.erase(it);
    }
}

void SteenrodElement::check_prime(const SteenrodElement& o) const
{
    if (!(prime_ == o.prime_))
        throw std::invalid_argument("mixing Steenrod elements at different primes");
}

SteenrodElement& SteenrodElement::operator+=(const SteenrodElement& o)
{
    check_prime(o);
    for (const auto& [m, c] : o.terms_)
        add_term(m, c);
    return *this;
}

SteenrodElement& SteenrodElement::operator-=(const SteenrodElement& o)
{
    check_prime(o);
    for (const auto& [m, c] : o.terms_)
        add_term(m, prime_.neg(c));
    return *this;
}

SteenrodElement SteenrodElement::operator+(const SteenrodElement& o) const
{
    SteenrodElement r = *this;
    return r += o;
}

SteenrodElement SteenrodElement::operator-(const SteenrodElement& o) const
{
    SteenrodElement r = *this;
    return r -= o;
}

SteenrodElement SteenrodElement::scaled(std::uint32_t c) const
{
    SteenrodElement r(prime_);
    for (const auto& [m, x] : terms_)
        r.add_term(m, prime_.mul(x, c % prime_.value()));
    return r;
}

SteenrodElement SteenrodElement::operator*(const SteenrodElement& o) const
{
    check_prime(o);
    SteenrodElement r(prime_);
    for (const auto& [m1, c1] : terms_) {
        std::vector<Letter> left = m1.letters();
        for (const auto& [m2, c2] : o.terms_) {
            std::vector<Letter> word = left;
            for (const Letter& l : m2.letters())
                word.push_back(l);
            if (auto m = SteenrodMonomial::from_letters(prime_, word))
                r.add_term(*m, prime_.mul(c1, c2));
        }
    }
    return r;
}

std::vector<std::pair<SteenrodMonomial, std::uint32_t>> SteenrodElement::print_order() const
{
    std::vector<std::pair<SteenrodMonomial, std::uint32_t>> v(terms_.begin(), terms_.end());
    std::stable_sort(v.begin(), v.end(), [](const auto& x, const auto& y) {
        if (x.first.degree() != y.first.degree())
            return x.first.degree() < y.first.degree();
        if (x.first.length() != y.first.length())
            return x.first.length() < y.first.length();
        return y.first < x.first;
    });
    return v;
}

std::string SteenrodElement::to_string() const
{
    if (terms_.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : print_order()) {
        if (!first)
            os << " + ";
        first = false;
        if (c != 1)
            os << c << ' ';
        os << m.to_string();
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Adem relations

std::vector<AdemTerm> adem_terms(Prime p, int a, int b, bool middle_bockstein, const AdemCoefficientHook& hook)
{
    std::vector<AdemTerm> out;
    auto emit = [&](AdemTerm t) {
        if (hook)
            t.coefficient = hook(t) % p.value();
        if (t.coefficient != 0)
            out.push_back(t);
    };

    if (p.is_two()) {
        if (middle_bockstein || a <= 0 || b <= 0 || a >= 2 * b)
            throw std::invalid_argument("no Adem relation for Sq^" + std::to_string(a) + " Sq^" +
                                        std::to_string(b));
        for (int j = 0; 2 * j <= a; ++j)
            emit({a, b, false, j, false, binomial_mod(b - 1 - j, a - 2 * j, p)});
        return out;
    }

    const int q = static_cast<int>(p.value());
    const int e = middle_bockstein ? 1 : 0;
    if (a <= 0 || b <= 0 || a >= q * b + e)
        throw std::invalid_argument("no Adem relation for P^" + std::to_string(a) + (e ? " b" : "") +
                                    " P^" + std::to_string(b));
    if (!middle_bockstein) {
        for (int j = 0; q * j <= a; ++j)
            emit({a, b, false, j, false,
                  p.mul(p.sign(a + j), binomial_mod((q - 1) * (b - j) - 1, a - q * j, p))});
        return out;
    }
    for (int j = 0; q * j <= a; ++j)
        emit({a, b, true, j, true, p.mul(p.sign(a + j), binomial_mod((q - 1) * (b - j), a - q * j, p))});
    for (int j = 0; q * j <= a - 1; ++j)
        emit({a, b, true, j, false,
              p.mul(p.sign(a + j + 1), binomial_mod((q - 1) * (b - j) - 1, a - q * j - 1, p))});
    return out;
}

Rewriter::Rewriter(Prime p, RewriteOrder order, AdemCoefficientHook hook)
    : prime_(p), order_(order), hook_(std::move(hook))
{
}

SteenrodElement Rewriter::rewrite_once(const SteenrodMonomial& m) const
{
    if (!(m.prime() == prime_))
        throw std::invalid_argument("rewrite_once: monomial prime does not match rewriter");
    auto pair = m.inadmissible_pair(order_ == RewriteOrder::LeftmostFirst);
    if (!pair)
        throw std::invalid_argument("rewrite_once: " + m.to_string() + " is already admissible");
    const std::size_t t = *pair;
    const auto& s = m.powers();
    const auto& eps = m.bocksteins();
    const bool odd = prime_.is_odd();
    const bool mid = odd && eps[t + 1];

    std::vector<Letter> prefix, suffix;
    for (std::size_t u = 0; u < t; ++u) {
        if (odd && eps[u])
            prefix.push_back(Letter::beta());
        prefix.push_back(Letter::P(s[u]));
    }
    if (odd && eps[t])
        prefix.push_back(Letter::beta());
    for (std::size_t u = t + 2; u < s.size(); ++u) {
        if (odd && eps[u])
            suffix.push_back(Letter::beta());
        suffix.push_back(Letter::P(s[u]));
    }
    if (odd && eps[s.size()])
        suffix.push_back(Letter::beta());

    SteenrodElement result(prime_);
    for (const AdemTerm& term : adem_terms(prime_, s[t], s[t + 1], mid, hook_)) {
        std::vector<Letter> word = prefix;
        const int lead = term.a + term.b - term.j;
        if (term.leading_bockstein) {
            word.push_back(Letter::beta());
            word.push_back(Letter::P(lead));
        } else {
            word.push_back(Letter::P(lead));
            if (mid)
                word.push_back(Letter::beta());
        }
        word.push_back(Letter::P(term.j));
        word.insert(word.end(), suffix.begin(), suffix.end());
        if (auto w = SteenrodMonomial::from_letters(prime_, word))
            result.add_term(*w, term.coefficient);
    }
    return result;
}

SteenrodElement Rewriter::normalize(const SteenrodElement& e) const
{
    if (!(e.prime() == prime_))
        throw std::invalid_argument("normalize: element prime does not match rewriter");
    SteenrodElement done(prime_);
    SteenrodElement pending = e;
    while (!pending.is_zero()) {
        // largest pending monomial first
        auto it = std::prev(pending.terms().end());
        SteenrodMonomial m = it->first;
        std::uint32_t c = it->second;
        pending.add_term(m, prime_.neg(c));
        if (m.is_admissible()) {
            done.add_term(m, c);
            continue;
        }
        const SteenrodElement rewritten = rewrite_once(m);
        for (const auto& [m2, c2] : rewritten.terms())
            pending.add_term(m2, prime_.mul(c, c2));
    }
    return done;
}

SteenrodElement adem_rewrite_once(const SteenrodMonomial& m) { return Rewriter(m.prime()).rewrite_once(m); }

SteenrodElement normalize(const SteenrodElement& e) { return Rewriter(e.prime()).normalize(e); }

SteenrodElement normalize(const SteenrodMonomial& m) { return Rewriter(m.prime()).normalize(m); }

// ---------------------------------------------------------------------------
// Admissible bases

namespace {

void admissible_tails_mod2(int remaining, int max_first, std::vector<int>& prefix,
                           std::vector<std::vector<int>>& out)
{
    if (remaining == 0) {
        out.push_back(prefix);
        return;
    }
    for (int i = 1; i <= std::min(remaining, max_first); ++i) {
        prefix.push_back(i);
        admissible_tails_mod2(remaining - i, i / 2, prefix, out);
        prefix.pop_back();
    }
}

/// Tails (s_1, e_1, ..., s_n, e_n) with s_1 <= bound, admissible, of the given degree.
void admissible_tails_odd(int remaining, int bound, int p, std::vector<int>& powers,
                          std::vector<std::uint8_t>& eps, std::vector<SteenrodMonomial>& out, Prime prime)
{
    if (remaining == 0)
        out.push_back(*SteenrodMonomial::from_alternating(prime, powers, eps));
    for (int s = 1; s <= bound && 2 * s * (p - 1) <= remaining; ++s) {
        for (std::uint8_t e = 0; e <= 1; ++e) {
            int rest = remaining - 2 * s * (p - 1) - e;
            if (rest < 0)
                continue;
            powers.push_back(s);
            eps.push_back(e);
            admissible_tails_odd(rest, (s - e) / p, p, powers, eps, out, prime);
            powers.pop_back();
            eps.pop_back();
        }
    }
}

} // namespace

std::vector<SteenrodMonomial> admissible_basis(int degree, Prime p)
{
    std::vector<SteenrodMonomial> out;
    if (degree < 0)
        return out;
    if (p.is_two()) {
        std::vector<std::vector<int>> seqs;
        std::vector<int> prefix;
        admissible_tails_mod2(degree, degree, prefix, seqs);
        for (auto& s : seqs)
            out.push_back(SteenrodMonomial::sq(s));
    } else {
        const int q = static_cast<int>(p.value());
        for (std::uint8_t e0 = 0; e0 <= 1; ++e0) {
            if (degree - e0 < 0)
                continue;
            std::vector<int> powers;
            std::vector<std::uint8_t> eps{e0};
            admissible_tails_odd(degree - e0, degree, q, powers, eps, out, p);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::uint32_t> coordinates(const SteenrodElement& normalized, const std::vector<SteenrodMonomial>& basis)
{
    std::vector<std::uint32_t> v(basis.size(), 0);
    for (const auto& [m, c] : normalized.terms()) {
        auto it = std::lower_bound(basis.begin(), basis.end(), m);
        if (it == basis.end() || !(*it == m))
            throw std::invalid_argument("coordinates: " + m.to_string() + " is not in the given basis");
        v[static_cast<std::size_t>(it - basis.begin())] = c;
    }
    return v;
}

// ---------------------------------------------------------------------------
// Indecomposability and the decomposition of Sq^k

bool is_power_of_two(long long k) { return k > 0 && (k & (k - 1)) == 0; }

bool is_indecomposable(int k, const Rewriter& rewriter)
{
    if (k < 1)
        throw std::invalid_argument("is_indecomposable: k must be positive");
    if (!rewriter.prime().is_two())
        throw std::invalid_argument("is_indecomposable is implemented at p = 2 only");
    const auto basis = admissible_basis(k, rewriter.prime());
    Span decomposables(basis.size(), rewriter.prime());
    // Every product m1 m2 of positive-degree admissibles equals Sq^i (rest m2)
    // with i the first exponent of m1, so these products span the same space.
    for (int i = 1; i < k; ++i) {
        SteenrodElement lead = SteenrodElement::sq({i});
        for (const auto& b : admissible_basis(k - i, rewriter.prime()))
            decomposables.insert(coordinates(rewriter.normalize(lead * SteenrodElement(b)), basis));
    }
    return !decomposables.contains(coordinates(SteenrodElement::sq({k}), basis));
}

bool is_indecomposable(int k) { return is_indecomposable(k, Rewriter(Prime(2))); }

SteenrodElement AdemDecomposition::recombine() const
{
    SteenrodElement sum(Prime(2));
    for (const auto& [i, a] : summands)
        sum += SteenrodElement::sq({i}) * a;
    return sum;
}

std::string AdemDecomposition::to_string() const
{
    std::ostringstream os;
    os << "Sq^" << target_degree << " =";
    bool first = true;
    for (const auto& [i, a] : summands) {
        os << (first ? " " : " + ") << "Sq^" << i << " o (" << a.to_string() << ")";
        first = false;
    }
    return os.str();
}

AdemDecomposition decompose_power(int k, const Rewriter& rewriter)
{
    if (k < 1)
        throw std::invalid_argument("decompose_power: k must be positive");
    if (!rewriter.prime().is_two())
        throw std::invalid_argument("decompose_power is implemented at p = 2 only");
    if (is_power_of_two(k))
        throw std::domain_error("Sq^" + std::to_string(k) + " is indecomposable: " + std::to_string(k) +
                                " is a power of two");
    const Prime p = rewriter.prime();
    const SteenrodMonomial top = SteenrodMonomial::sq({k});
    for (int i = 1; i < k; ++i) {
        for (const auto& b : admissible_basis(k - i, p)) {
            SteenrodElement product = rewriter.normalize(SteenrodElement::sq({i}) * SteenrodElement(b));
            std::uint32_t c = product.coefficient(top);
            if (c == 0)
                continue;
            // c Sq^k = Sq^i b - sum of the other admissible terms, each of
            // which has length >= 2 and is therefore Sq^{first} o rest.
            const std::uint32_t inv = p.inv(c);
            std::map<int, SteenrodElement> grouped;
            auto add = [&](int lead, const SteenrodElement& factor) {
                grouped.try_emplace(lead, p).first->second += factor;
            };
            add(i, SteenrodElement(b).scaled(inv));
            for (const auto& [m, x] : product.terms()) {
                if (m == top)
                    continue;
                std::vector<int> rest(m.powers().begin() + 1, m.powers().end());
                add(m.powers().front(), SteenrodElement::sq(rest).scaled(p.mul(p.neg(x), inv)));
            }
            AdemDecomposition d;
            d.target_degree = k;
            for (auto& [lead, factor] : grouped)
                if (!factor.is_zero())
                    d.summands.emplace_back(lead, factor);
            return d;
        }
    }
    throw std::runtime_error("no decomposition of Sq^" + std::to_string(k) + " found");
}

AdemDecomposition decompose_power(int k) { return decompose_power(k, Rewriter(Prime(2))); }

} // namespace steenrod
