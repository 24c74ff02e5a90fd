#ifndef STEENROD_GRADED_RING_HPP
#define STEENROD_GRADED_RING_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "steenrod/fp_arith.hpp"

namespace steenrod {

struct Generator {
    std::string name;
    int degree = 0;
};

/// Exponent vector indexed like the generator list.
using Exponents = std::vector<int>;

/// Polynomial in the generators; monomials are written in generator order
/// g_1^{e_1} g_2^{e_2} ..., which fixes the Koszul sign at odd p.
using Polynomial = std::map<Exponents, std::uint32_t>;

struct RingPresentation {
    Prime prime{2};
    std::vector<Generator> generators;
    std::vector<Polynomial> relations;
    int cap = 0;
};

/// Thrown when a product or an operation would leave the modelled range.
class DegreeOverflow : public std::out_of_range {
public:
    explicit DegreeOverflow(const std::string& what) : std::out_of_range(what) {}
};

/// Homogeneous element stored as sparse coordinates in the degree-d basis,
/// sorted by basis index with nonzero coefficients only. Adding a zero of
/// another degree is allowed and leaves the sum unchanged.
class RingElement {
public:
    using Terms = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

    RingElement(Prime p, int degree) : prime_(p), degree_(degree) {}
    RingElement(Prime p, int degree, Terms terms);

    static RingElement basis_vector(Prime p, int degree, std::uint32_t index, std::uint32_t c = 1)
    {
        return RingElement(p, degree, Terms{{index, c}});
    }
    static RingElement from_dense(Prime p, int degree, const std::vector<std::uint32_t>& v);

    Prime prime() const { return prime_; }
    int degree() const { return degree_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::uint32_t coefficient(std::uint32_t index) const;
    std::vector<std::uint32_t> to_dense(std::size_t dimension) const;

    RingElement& operator+=(const RingElement& o);
    RingElement operator+(const RingElement& o) const;
    RingElement operator-(const RingElement& o) const;
    RingElement scaled(std::uint32_t c) const;

    /// Zero elements compare equal in every degree.
    friend bool operator==(const RingElement& a, const RingElement& b)
    {
        return a.prime_ == b.prime_ && a.terms_ == b.terms_ && (a.degree_ == b.degree_ || a.terms_.empty());
    }

private:
    void check_compatible(const RingElement& o) const;

    Prime prime_;
    int degree_;
    Terms terms_;
};

/// Degreewise basis of a capped presentation. Free monomials of each degree
/// are ordered lexicographically descending (first generator largest) and
/// the relation slice is row reduced in that order, so the basis consists
/// of the lex-smallest monomials not hit by a pivot.
class RingBasis {
public:
    /// Throws std::invalid_argument on an inhomogeneous or degree-0
    /// relation, a relation above the cap, duplicate names, or a cap below
    /// the largest generator degree.
    static std::shared_ptr<const RingBasis> compute(RingPresentation pres);

    const RingPresentation& presentation() const { return pres_; }
    Prime prime() const { return pres_.prime; }
    int cap() const { return pres_.cap; }
    const std::vector<Generator>& generators() const { return pres_.generators; }
    std::optional<std::size_t> generator_index(const std::string& name) const;
    bool is_odd_generator(std::size_t g) const;

    std::size_t dimension(int degree) const;
    /// Standard monomials spanning H^degree.
    const std::vector<Exponents>& basis(int degree) const;
    int degree_of(const Exponents& e) const;

    RingElement zero(int degree) const { return RingElement(prime(), degree); }
    RingElement one() const;
    /// Image of the generator in the quotient.
    RingElement generator(std::size_t g) const;
    /// Reduced image of a free monomial. Throws DegreeOverflow above the cap.
    RingElement reduce(const Exponents& e) const;
    /// Reduced image of a homogeneous polynomial of the given degree.
    RingElement reduce(const Polynomial& poly, int degree) const;

    /// Ordered product a*b of free monomials in generator order: the
    /// resulting exponents and the Koszul sign, or nullopt when an odd
    /// generator would appear twice.
    std::optional<std::pair<Exponents, std::uint32_t>> free_product(const Exponents& a,
                                                                    const Exponents& b) const;

    /// Reduced product with Koszul signs. Throws DegreeOverflow above the cap.
    RingElement multiply(const RingElement& a, const RingElement& b) const;
    RingElement power(const RingElement& a, int n) const;

    std::string monomial_to_string(const Exponents& e) const;
    std::string to_string(const RingElement& e) const;

private:
    explicit RingBasis(RingPresentation pres);
    void build();
    std::vector<Exponents> free_monomials(int degree) const;

    struct Degree {
        std::vector<Exponents> free;                     // lex descending
        std::map<Exponents, std::uint32_t> free_index;
        std::vector<Exponents> basis;                    // subset of free, same order
        std::vector<RingElement::Terms> reduced;         // per free monomial
    };

    RingPresentation pres_;
    std::vector<Degree> degrees_;
};

struct PeriodicitySearch {
    int k = 0;
    /// All periodicity elements found. At odd p only representatives with
    /// leading coefficient 1 are listed; their nonzero multiples also qualify.
    std::vector<RingElement> elements;
    int verified_from = 0;
    int verified_to = 0;
    bool incomplete = false;
};

/// Default bound on dim H^k for the exhaustive search.
inline constexpr std::size_t kEnumerationBound = 12;

/// Nonzero x in H^k such that multiplication by x is bijective from H^i to
/// H^{i+k} for 0 <= i <= cap - k.
PeriodicitySearch find_periodicity_elements(const RingBasis& basis, int k,
                                            std::size_t enumeration_bound = kEnumerationBound);

/// Whether multiplication by x is bijective H^i -> H^{i+deg x} for all
/// 0 <= i <= cap - deg x.
bool is_periodicity_element(const RingBasis& basis, const RingElement& x);

struct MinimalPeriod {
    std::optional<int> k;
    std::optional<RingElement> witness;
    /// Some k searched before the answer exceeded the enumeration bound.
    bool incomplete = false;
};

/// Smallest k <= cap/2 with a periodicity element.
MinimalPeriod minimal_period(const RingBasis& basis, std::size_t enumeration_bound = kEnumerationBound);

/// Largest m < k with H^m nonzero.
int top_degree_below(const RingBasis& basis, int k);

struct Factorization {
    std::string target; // "x" or "x^2"
    RingElement y;
    RingElement z;
};

struct FactorizationAudit {
    std::vector<Factorization> witnesses;
    bool square_checked = false;
    bool incomplete = false;
    bool passed() const { return witnesses.empty() && !incomplete; }
};

/// Searches x = y*z and x^2 = y*z with 0 < deg y < deg x. Every nonzero y
/// (up to scalars at odd p) is tried and z is found by a linear solve.
FactorizationAudit factorization_audit(const RingBasis& basis, const RingElement& x,
                                       std::size_t enumeration_bound = kEnumerationBound);

/// Every nonzero vector of F_p^n, or the projective representatives with
/// leading coefficient 1 when `projective` is set.
std::vector<std::vector<std::uint32_t>> enumerate_vectors(std::size_t n, Prime p, bool projective);

} // namespace steenrod

#endif // STEENROD_GRADED_RING_HPP
