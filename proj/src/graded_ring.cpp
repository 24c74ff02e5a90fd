#include "steenrod/graded_ring.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "steenrod/linalg.hpp"

namespace steenrod {

// ---------------------------------------------------------------- RingElement

RingElement::RingElement(Prime p, int degree, Terms terms) : prime_(p), degree_(degree)
{
    std::sort(terms.begin(), terms.end());
    for (auto [i, c] : terms) {
        c %= p.value();
        if (!terms_.empty() && terms_.back().first == i)
            terms_.back().second = p.add(terms_.back().second, c);
        else
            terms_.emplace_back(i, c);
        if (terms_.back().second == 0)
            terms_.pop_back();
    }
}

RingElement RingElement::from_dense(Prime p, int degree, const std::vector<std::uint32_t>& v)
{
    RingElement e(p, degree);
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] % p.value())
            e.terms_.emplace_back(static_cast<std::uint32_t>(i), v[i] % p.value());
    return e;
}

std::uint32_t RingElement::coefficient(std::uint32_t index) const
{
    auto it = std::lower_bound(terms_.begin(), terms_.end(), std::make_pair(index, 0u));
    return (it != terms_.end() && it->first == index) ? it->second : 0;
}

std::vector<std::uint32_t> RingElement::to_dense(std::size_t dimension) const
{
    std::vector<std::uint32_t> v(dimension, 0);
    for (auto [i, c] : terms_) {
        if (i >= dimension)
            throw std::out_of_range("RingElement::to_dense: index beyond dimension");
        v[i] = c;
    }
    return v;
}

void RingElement::check_compatible(const RingElement& o) const
{
    if (!(prime_ == o.prime_))
        throw std::invalid_argument("ring elements over different primes");
    if (degree_ != o.degree_)
        throw std::invalid_argument("adding ring elements of degrees " + std::to_string(degree_) + " and " +
                                    std::to_string(o.degree_));
}

RingElement& RingElement::operator+=(const RingElement& o)
{
    if (o.is_zero() && prime_ == o.prime_)
        return *this;
    if (is_zero() && prime_ == o.prime_)
        degree_ = o.degree_;
    check_compatible(o);
    Terms out;
    out.reserve(terms_.size() + o.terms_.size());
    auto a = terms_.cbegin();
    auto b = o.terms_.cbegin();
    while (a != terms_.cend() || b != o.terms_.cend()) {
        if (b == o.terms_.cend() || (a != terms_.cend() && a->first < b->first)) {
            out.push_back(*a++);
        } else if (a == terms_.cend() || b->first < a->first) {
            out.push_back(*b++);
        } else {
            std::uint32_t c = prime_.add(a->second, b->second);
            if (c)
                out.emplace_back(a->first, c);
            ++a;
            ++b;
        }
    }
    terms_ = std::move(out);
    return *this;
}

RingElement RingElement::operator+(const RingElement& o) const
{
    RingElement r = *this;
    r += o;
    return r;
}

RingElement RingElement::operator-(const RingElement& o) const { return *this + o.scaled(prime_.value() - 1); }

RingElement RingElement::scaled(std::uint32_t c) const
{
    c %= prime_.value();
    RingElement r(prime_, degree_);
    if (c == 0)
        return r;
    r.terms_ = terms_;
    for (auto& t : r.terms_)
        t.second = prime_.mul(t.second, c);
    return r;
}

// ------------------------------------------------------------------ RingBasis

RingBasis::RingBasis(RingPresentation pres) : pres_(std::move(pres)) {}

std::shared_ptr<const RingBasis> RingBasis::compute(RingPresentation pres)
{
    if (pres.generators.empty())
        throw std::invalid_argument("presentation has no generators");
    std::set<std::string> names;
    int top = 0;
    for (const auto& g : pres.generators) {
        if (g.degree <= 0)
            throw std::invalid_argument("generator " + g.name + " must have positive degree");
        if (!names.insert(g.name).second)
            throw std::invalid_argument("duplicate generator name " + g.name);
        top = std::max(top, g.degree);
    }
    if (pres.cap < top)
        throw std::invalid_argument("cap " + std::to_string(pres.cap) + " is below the generator degree " +
                                    std::to_string(top));
    std::shared_ptr<RingBasis> b(new RingBasis(std::move(pres)));
    b->build();
    return b;
}

std::optional<std::size_t> RingBasis::generator_index(const std::string& name) const
{
    for (std::size_t i = 0; i < pres_.generators.size(); ++i)
        if (pres_.generators[i].name == name)
            return i;
    return std::nullopt;
}

bool RingBasis::is_odd_generator(std::size_t g) const
{
    return prime().is_odd() && pres_.generators[g].degree % 2 != 0;
}

int RingBasis::degree_of(const Exponents& e) const
{
    if (e.size() != pres_.generators.size())
        throw std::invalid_argument("exponent vector has wrong length");
    int d = 0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] < 0)
            throw std::invalid_argument("negative exponent");
        d += e[i] * pres_.generators[i].degree;
    }
    return d;
}

std::vector<Exponents> RingBasis::free_monomials(int degree) const
{
    std::vector<Exponents> out;
    const std::size_t n = pres_.generators.size();
    Exponents cur(n, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int rem) {
        if (i == n) {
            if (rem == 0)
                out.push_back(cur);
            return;
        }
        int d = pres_.generators[i].degree;
        int hi = rem / d;
        if (is_odd_generator(i))
            hi = std::min(hi, 1);
        for (int e = hi; e >= 0; --e) {
            cur[i] = e;
            rec(i + 1, rem - e * d);
        }
        cur[i] = 0;
    };
    rec(0, degree);
    return out;
}

std::optional<std::pair<Exponents, std::uint32_t>> RingBasis::free_product(const Exponents& a,
                                                                           const Exponents& b) const
{
    Exponents r(a.size());
    int swaps = 0;
    int odd_after = 0; // odd letters of a at positions > j
    for (std::size_t j = a.size(); j-- > 0;) {
        r[j] = a[j] + b[j];
        if (is_odd_generator(j)) {
            if (r[j] > 1)
                return std::nullopt;
            swaps += b[j] * odd_after;
            odd_after += a[j];
        }
    }
    return std::make_pair(std::move(r), prime().sign(swaps));
}

void RingBasis::build()
{
    const Prime p = prime();
    const std::size_t n = pres_.generators.size();

    struct Rel {
        int degree;
        std::vector<std::pair<Exponents, std::uint32_t>> terms;
    };
    std::vector<Rel> rels;
    for (const auto& poly : pres_.relations) {
        Rel rel{-1, {}};
        for (const auto& [e, c] : poly) {
            if (c % p.value() == 0)
                continue;
            int d = degree_of(e);
            if (rel.degree >= 0 && d != rel.degree)
                throw std::invalid_argument("inhomogeneous relation");
            rel.degree = d;
            bool vanishes = false;
            for (std::size_t i = 0; i < n; ++i)
                vanishes = vanishes || (is_odd_generator(i) && e[i] > 1);
            if (!vanishes)
                rel.terms.emplace_back(e, c % p.value());
        }
        if (rel.degree < 0)
            continue;
        if (rel.degree == 0)
            throw std::invalid_argument("relation in degree 0");
        if (rel.degree > pres_.cap)
            throw std::invalid_argument("relation of degree " + std::to_string(rel.degree) + " exceeds the cap");
        if (!rel.terms.empty())
            rels.push_back(std::move(rel));
    }

    degrees_.resize(static_cast<std::size_t>(pres_.cap) + 1);
    for (int d = 0; d <= pres_.cap; ++d) {
        Degree& D = degrees_[static_cast<std::size_t>(d)];
        D.free = free_monomials(d);
        for (std::size_t i = 0; i < D.free.size(); ++i)
            D.free_index.emplace(D.free[i], static_cast<std::uint32_t>(i));

        std::vector<std::vector<std::uint32_t>> rows;
        for (const Rel& r : rels) {
            if (r.degree > d)
                continue;
            for (const Exponents& m : degrees_[static_cast<std::size_t>(d - r.degree)].free) {
                std::vector<std::uint32_t> row(D.free.size(), 0);
                bool nonzero = false;
                for (const auto& [t, c] : r.terms) {
                    auto prod = free_product(m, t);
                    if (!prod)
                        continue;
                    std::uint32_t& slot = row[D.free_index.at(prod->first)];
                    slot = p.add(slot, p.mul(c, prod->second));
                    nonzero = true;
                }
                if (nonzero)
                    rows.push_back(std::move(row));
            }
        }

        Matrix m(rows.size(), D.free.size());
        for (std::size_t i = 0; i < rows.size(); ++i)
            std::copy(rows[i].begin(), rows[i].end(), m.data.begin() + static_cast<std::ptrdiff_t>(i * m.cols));
        auto pivots = row_reduce(m, p);

        std::vector<std::ptrdiff_t> pivot_row(D.free.size(), -1);
        for (std::size_t r = 0; r < pivots.size(); ++r)
            pivot_row[pivots[r]] = static_cast<std::ptrdiff_t>(r);
        std::vector<std::uint32_t> basis_index(D.free.size(), 0);
        for (std::size_t c = 0; c < D.free.size(); ++c)
            if (pivot_row[c] < 0) {
                basis_index[c] = static_cast<std::uint32_t>(D.basis.size());
                D.basis.push_back(D.free[c]);
            }
        D.reduced.resize(D.free.size());
        for (std::size_t c = 0; c < D.free.size(); ++c) {
            if (pivot_row[c] < 0) {
                D.reduced[c] = {{basis_index[c], 1}};
                continue;
            }
            auto r = static_cast<std::size_t>(pivot_row[c]);
            for (std::size_t j = c + 1; j < D.free.size(); ++j)
                if (pivot_row[j] < 0 && m.at(r, j))
                    D.reduced[c].emplace_back(basis_index[j], p.neg(m.at(r, j)));
        }
    }
    if (degrees_[0].basis.size() != 1)
        throw std::invalid_argument("degree-0 part is not spanned by 1");
}

std::size_t RingBasis::dimension(int degree) const
{
    if (degree < 0 || degree > pres_.cap)
        return 0;
    return degrees_[static_cast<std::size_t>(degree)].basis.size();
}

const std::vector<Exponents>& RingBasis::basis(int degree) const
{
    if (degree < 0 || degree > pres_.cap)
        throw DegreeOverflow("degree " + std::to_string(degree) + " outside [0, " + std::to_string(pres_.cap) +
                             "]");
    return degrees_[static_cast<std::size_t>(degree)].basis;
}

RingElement RingBasis::one() const { return RingElement::basis_vector(prime(), 0, 0); }

RingElement RingBasis::generator(std::size_t g) const
{
    Exponents e(pres_.generators.size(), 0);
    e.at(g) = 1;
    return reduce(e);
}

RingElement RingBasis::reduce(const Exponents& e) const
{
    int d = degree_of(e);
    if (d > pres_.cap)
        throw DegreeOverflow("monomial " + monomial_to_string(e) + " has degree " + std::to_string(d) +
                             " above the cap " + std::to_string(pres_.cap));
    for (std::size_t i = 0; i < e.size(); ++i)
        if (is_odd_generator(i) && e[i] > 1)
            return zero(d);
    const Degree& D = degrees_[static_cast<std::size_t>(d)];
    return RingElement(prime(), d, D.reduced[D.free_index.at(e)]);
}

RingElement RingBasis::reduce(const Polynomial& poly, int degree) const
{
    RingElement out = zero(degree);
    for (const auto& [e, c] : poly) {
        if (c % prime().value() == 0)
            continue;
        if (degree_of(e) != degree)
            throw std::invalid_argument("polynomial term " + monomial_to_string(e) + " is not of degree " +
                                        std::to_string(degree));
        out += reduce(e).scaled(c);
    }
    return out;
}

RingElement RingBasis::multiply(const RingElement& a, const RingElement& b) const
{
    if (!(a.prime() == prime()) || !(b.prime() == prime()))
        throw std::invalid_argument("multiply: element over a different prime");
    const int d = a.degree() + b.degree();
    if (d > pres_.cap)
        throw DegreeOverflow("product of degree " + std::to_string(d) + " exceeds the cap " +
                             std::to_string(pres_.cap));
    const Prime p = prime();
    const auto& ba = basis(a.degree());
    const auto& bb = basis(b.degree());
    const Degree& D = degrees_[static_cast<std::size_t>(d)];
    RingElement::Terms acc;
    for (auto [i, ci] : a.terms())
        for (auto [j, cj] : b.terms()) {
            auto prod = free_product(ba[i], bb[j]);
            if (!prod)
                continue;
            std::uint32_t c = p.mul(p.mul(ci, cj), prod->second);
            for (auto [k, ck] : D.reduced[D.free_index.at(prod->first)])
                acc.emplace_back(k, p.mul(c, ck));
        }
    return RingElement(p, d, std::move(acc));
}

RingElement RingBasis::power(const RingElement& a, int n) const
{
    if (n < 0)
        throw std::invalid_argument("negative power");
    RingElement r = one();
    for (int i = 0; i < n; ++i)
        r = multiply(r, a);
    return r;
}

std::string RingBasis::monomial_to_string(const Exponents& e) const
{
    std::string s;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0)
            continue;
        if (!s.empty())
            s += '*';
        s += pres_.generators[i].name;
        if (e[i] > 1)
            s += '^' + std::to_string(e[i]);
    }
    return s.empty() ? "1" : s;
}

std::string RingBasis::to_string(const RingElement& e) const
{
    if (e.is_zero())
        return "0";
    const auto& b = basis(e.degree());
    std::string s;
    for (auto [i, c] : e.terms()) {
        if (!s.empty())
            s += " + ";
        if (c != 1)
            s += std::to_string(c) + ' ';
        s += monomial_to_string(b[i]);
    }
    return s;
}

// ---------------------------------------------------------------- Periodicity

std::vector<std::vector<std::uint32_t>> enumerate_vectors(std::size_t n, Prime p, bool projective)
{
    std::vector<std::vector<std::uint32_t>> out;
    const std::uint32_t q = p.value();
    for (std::size_t lead = 0; lead < n; ++lead) {
        std::uint64_t tails = 1;
        for (std::size_t i = lead + 1; i < n; ++i)
            tails *= q;
        for (std::uint32_t head = 1; head < (projective ? 2u : q); ++head)
            for (std::uint64_t t = 0; t < tails; ++t) {
                std::vector<std::uint32_t> v(n, 0);
                v[lead] = head;
                std::uint64_t rest = t;
                for (std::size_t i = n; i-- > lead + 1;) {
                    v[i] = static_cast<std::uint32_t>(rest % q);
                    rest /= q;
                }
                out.push_back(std::move(v));
            }
    }
    return out;
}

namespace {

/// Multiplication matrices of each basis element of H^k acting H^i -> H^{i+k}.
std::vector<Matrix> multiplication_matrices(const RingBasis& basis, int k, int i)
{
    const Prime p = basis.prime();
    const std::size_t nk = basis.dimension(k), ni = basis.dimension(i), nt = basis.dimension(i + k);
    std::vector<Matrix> out(nk, Matrix(nt, ni));
    for (std::size_t j = 0; j < nk; ++j)
        for (std::size_t l = 0; l < ni; ++l) {
            auto prod = basis.multiply(RingElement::basis_vector(p, k, static_cast<std::uint32_t>(j)),
                                       RingElement::basis_vector(p, i, static_cast<std::uint32_t>(l)));
            for (auto [r, c] : prod.terms())
                out[j].at(r, l) = c;
        }
    return out;
}

Matrix combine(const std::vector<Matrix>& ms, const std::vector<std::uint32_t>& c, Prime p)
{
    Matrix out(ms.front().rows, ms.front().cols);
    for (std::size_t j = 0; j < ms.size(); ++j) {
        if (c[j] == 0)
            continue;
        for (std::size_t t = 0; t < out.data.size(); ++t)
            if (ms[j].data[t])
                out.data[t] = p.add(out.data[t], p.mul(c[j], ms[j].data[t]));
    }
    return out;
}

bool dimensions_match(const RingBasis& basis, int k)
{
    for (int i = 0; i + k <= basis.cap(); ++i)
        if (basis.dimension(i) != basis.dimension(i + k))
            return false;
    return true;
}

} // namespace

bool is_periodicity_element(const RingBasis& basis, const RingElement& x)
{
    const int k = x.degree();
    if (k <= 0 || k > basis.cap() || x.is_zero() || !dimensions_match(basis, k))
        return false;
    for (int i = 0; i + k <= basis.cap(); ++i) {
        const std::size_t n = basis.dimension(i);
        if (n == 0)
            continue;
        Matrix m(n, n);
        for (std::size_t l = 0; l < n; ++l) {
            const RingElement prod =
                basis.multiply(x, RingElement::basis_vector(basis.prime(), i, static_cast<std::uint32_t>(l)));
            for (auto [r, c] : prod.terms())
                m.at(r, l) = c;
        }
        if (rank(m, basis.prime()) != n)
            return false;
    }
    return true;
}

PeriodicitySearch find_periodicity_elements(const RingBasis& basis, int k, std::size_t enumeration_bound)
{
    if (k <= 0 || k > basis.cap())
        throw std::invalid_argument("period " + std::to_string(k) + " outside [1, cap]");
    PeriodicitySearch out;
    out.k = k;
    out.verified_from = 0;
    out.verified_to = basis.cap() - k;
    const Prime p = basis.prime();
    const std::size_t n = basis.dimension(k);
    if (n == 0 || !dimensions_match(basis, k))
        return out;

    std::vector<std::vector<std::uint32_t>> candidates;
    if (n > enumeration_bound) {
        out.incomplete = true;
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<std::uint32_t> v(n, 0);
            v[j] = 1;
            candidates.push_back(std::move(v));
        }
    } else {
        candidates = enumerate_vectors(n, p, p.is_odd());
    }

    std::vector<std::vector<Matrix>> maps;
    for (int i = 0; i + k <= basis.cap(); ++i)
        maps.push_back(basis.dimension(i) ? multiplication_matrices(basis, k, i) : std::vector<Matrix>{});

    for (const auto& c : candidates) {
        bool ok = true;
        for (std::size_t i = 0; ok && i < maps.size(); ++i)
            if (!maps[i].empty())
                ok = rank(combine(maps[i], c, p), p) == maps[i].front().cols;
        if (ok)
            out.elements.push_back(RingElement::from_dense(p, k, c));
    }
    return out;
}

MinimalPeriod minimal_period(const RingBasis& basis, std::size_t enumeration_bound)
{
    MinimalPeriod out;
    for (int k = 1; 2 * k <= basis.cap(); ++k) {
        auto s = find_periodicity_elements(basis, k, enumeration_bound);
        out.incomplete = out.incomplete || s.incomplete;
        if (!s.elements.empty()) {
            out.k = k;
            out.witness = s.elements.front();
            return out;
        }
    }
    return out;
}

int top_degree_below(const RingBasis& basis, int k)
{
    for (int m = std::min(k, basis.cap() + 1) - 1; m > 0; --m)
        if (basis.dimension(m))
            return m;
    return 0;
}

FactorizationAudit factorization_audit(const RingBasis& basis, const RingElement& x, std::size_t enumeration_bound)
{
    FactorizationAudit out;
    const Prime p = basis.prime();
    const int k = x.degree();
    std::vector<std::pair<std::string, RingElement>> targets{{"x", x}};
    if (2 * k <= basis.cap()) {
        targets.emplace_back("x^2", basis.multiply(x, x));
        out.square_checked = true;
    }
    for (const auto& [name, t] : targets) {
        const int D = t.degree();
        const std::size_t nt = basis.dimension(D);
        const auto rhs = t.to_dense(nt);
        for (int d = 1; d < k; ++d) {
            const std::size_t ny = basis.dimension(d), nz = basis.dimension(D - d);
            if (ny == 0 || nz == 0)
                continue;
            // products of basis elements, then combine linearly in y
            std::vector<Matrix> maps(ny, Matrix(nt, nz));
            for (std::size_t j = 0; j < ny; ++j)
                for (std::size_t l = 0; l < nz; ++l) {
                    const RingElement prod =
                        basis.multiply(RingElement::basis_vector(p, d, static_cast<std::uint32_t>(j)),
                                       RingElement::basis_vector(p, D - d, static_cast<std::uint32_t>(l)));
                    for (auto [r, c] : prod.terms())
                        maps[j].at(r, l) = c;
                }
            std::vector<std::vector<std::uint32_t>> ys;
            if (ny > enumeration_bound) {
                out.incomplete = true;
                for (std::size_t j = 0; j < ny; ++j) {
                    ys.emplace_back(ny, 0);
                    ys.back()[j] = 1;
                }
            } else {
                ys = enumerate_vectors(ny, p, p.is_odd());
            }
            for (const auto& y : ys)
                if (auto z = solve(combine(maps, y, p), rhs, p))
                    out.witnesses.push_back(
                        {name, RingElement::from_dense(p, d, y), RingElement::from_dense(p, D - d, *z)});
        }
    }
    return out;
}

} // namespace steenrod
