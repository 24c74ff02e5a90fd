#ifndef STEENROD_STEENROD_CORE_HPP
#define STEENROD_STEENROD_CORE_HPP

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "steenrod/fp_arith.hpp"

namespace steenrod {

/// One letter of a word in the Steenrod algebra: Sq^power at p = 2,
/// P^power or the Bockstein at odd p. power 0 denotes the identity.
struct Letter {
    bool bockstein = false;
    int power = 0;

    static Letter sq(int i) { return {false, i}; }
    static Letter P(int s) { return {false, s}; }
    static Letter beta() { return {true, 0}; }

    friend bool operator==(const Letter&, const Letter&) = default;
};

/// Degree of a single letter at prime p.
int letter_degree(Letter l, Prime p);

/// A word Sq^{i_1}...Sq^{i_n} (p = 2) or b^{e_0} P^{s_1} b^{e_1} ... P^{s_n} b^{e_n}
/// (odd p), stored without zero exponents and without adjacent Bocksteins.
class SteenrodMonomial {
public:
    explicit SteenrodMonomial(Prime p);

    static SteenrodMonomial identity(Prime p) { return SteenrodMonomial(p); }
    /// Sq^{i_1}...Sq^{i_n}; zero exponents are dropped.
    static SteenrodMonomial sq(std::vector<int> exponents);
    /// Canonical monomial for a letter word, or nullopt when the word
    /// contains two adjacent Bocksteins (the word is zero). Identity letters
    /// are dropped. Throws on a Bockstein at p = 2 or a negative exponent.
    static std::optional<SteenrodMonomial> from_letters(Prime p, std::span<const Letter> word);
    /// Odd-p alternating form; bocksteins.size() must be powers.size() + 1.
    static std::optional<SteenrodMonomial> from_alternating(Prime p, std::vector<int> powers,
                                                            std::vector<std::uint8_t> bocksteins);

    Prime prime() const { return prime_; }
    /// i_j at p = 2, s_j at odd p.
    const std::vector<int>& powers() const { return powers_; }
    /// e_0 .. e_n at odd p; empty at p = 2.
    const std::vector<std::uint8_t>& bocksteins() const { return bocksteins_; }
    std::vector<Letter> letters() const;

    int degree() const;
    /// Number of Sq / P letters.
    std::size_t length() const { return powers_.size(); }
    bool is_identity() const;
    bool is_admissible() const;
    /// Index t such that the pair (powers[t], powers[t+1]) violates
    /// admissibility, searching from the left or the right.
    std::optional<std::size_t> inadmissible_pair(bool leftmost = true) const;

    /// Degree, then length, then lexicographic on the exponent sequence
    /// (interleaved with the Bockstein exponents at odd p).
    std::strong_ordering operator<=>(const SteenrodMonomial& o) const;
    bool operator==(const SteenrodMonomial& o) const;

    std::string to_string() const;

private:
    Prime prime_;
    std::vector<int> powers_;
    std::vector<std::uint8_t> bocksteins_;
};

/// Standard excess. Throws std::invalid_argument on inadmissible input.
int excess(const SteenrodMonomial& m);

/// Finite F_p-linear combination of monomials; zero coefficients are never stored.
class SteenrodElement {
public:
    using Terms = std::map<SteenrodMonomial, std::uint32_t>;

    explicit SteenrodElement(Prime p) : prime_(p) {}
    SteenrodElement(const SteenrodMonomial& m, std::uint32_t coefficient = 1);

    static SteenrodElement zero(Prime p) { return SteenrodElement(p); }
    static SteenrodElement identity(Prime p) { return SteenrodElement(SteenrodMonomial::identity(p)); }
    static SteenrodElement sq(std::vector<int> exponents);
    /// Element of a single letter word (zero if it collapses).
    static SteenrodElement word(Prime p, std::span<const Letter> letters);

    Prime prime() const { return prime_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::uint32_t coefficient(const SteenrodMonomial& m) const;
    /// Common degree of all terms; nullopt for zero or inhomogeneous elements.
    std::optional<int> degree() const;
    bool is_admissible() const;

    void add_term(const SteenrodMonomial& m, std::uint32_t coefficient);
    SteenrodElement& operator+=(const SteenrodElement& o);
    SteenrodElement& operator-=(const SteenrodElement& o);
    SteenrodElement operator+(const SteenrodElement& o) const;
    SteenrodElement operator-(const SteenrodElement& o) const;
    SteenrodElement scaled(std::uint32_t c) const;
    /// Composition (this after o), without normalising.
    SteenrodElement operator*(const SteenrodElement& o) const;

    bool operator==(const SteenrodElement& o) const { return prime_ == o.prime_ && terms_ == o.terms_; }

    /// Terms in print order: shorter words first, then lexicographically
    /// descending, so the leading Adem term comes first.
    std::vector<std::pair<SteenrodMonomial, std::uint32_t>> print_order() const;
    std::string to_string() const;

private:
    void check_prime(const SteenrodElement& o) const;

    Prime prime_;
    Terms terms_;
};

/// One summand produced by an Adem relation, exposed so tests can tamper
/// with coefficients.
struct AdemTerm {
    int a = 0;              ///< left exponent
    int b = 0;              ///< right exponent
    bool middle_bockstein = false;
    int j = 0;              ///< second exponent of the produced term
    bool leading_bockstein = false; ///< b P^{a+b-j} P^j (true) vs P^{a+b-j} b P^j
    std::uint32_t coefficient = 0;
};

using AdemCoefficientHook = std::function<std::uint32_t(const AdemTerm&)>;

/// The Adem relation for Sq^a Sq^b (a < 2b) or P^a b^{e} P^b
/// (a < pb + e) as the list of produced terms with nonzero coefficient
/// (possibly adjusted by the hook).
std::vector<AdemTerm> adem_terms(Prime p, int a, int b, bool middle_bockstein,
                                 const AdemCoefficientHook& hook = {});

enum class RewriteOrder { LeftmostFirst, RightmostFirst };

/// Rewriting engine. The default-constructed configuration (leftmost pair,
/// no hook) defines the normal form used throughout the library.
class Rewriter {
public:
    explicit Rewriter(Prime p, RewriteOrder order = RewriteOrder::LeftmostFirst,
                      AdemCoefficientHook hook = {});

    Prime prime() const { return prime_; }

    /// Applies one Adem relation to the selected inadmissible pair.
    /// Throws std::invalid_argument if m is admissible.
    SteenrodElement rewrite_once(const SteenrodMonomial& m) const;

    SteenrodElement normalize(const SteenrodElement& e) const;
    SteenrodElement normalize(const SteenrodMonomial& m) const { return normalize(SteenrodElement(m)); }

private:
    Prime prime_;
    RewriteOrder order_;
    AdemCoefficientHook hook_;
};

SteenrodElement adem_rewrite_once(const SteenrodMonomial& m);
SteenrodElement normalize(const SteenrodElement& e);
SteenrodElement normalize(const SteenrodMonomial& m);

/// All admissible monomials of the given degree, in ascending monomial order.
std::vector<SteenrodMonomial> admissible_basis(int degree, Prime p);

/// Coordinates of an admissible element against admissible_basis(degree).
std::vector<std::uint32_t> coordinates(const SteenrodElement& normalized,
                                       const std::vector<SteenrodMonomial>& basis);

/// Sq^k is not in the span of normalised products of positive-degree
/// elements. Decided by row reduction in degree k.
bool is_indecomposable(int k, const Rewriter& rewriter);
bool is_indecomposable(int k);

struct AdemDecomposition {
    int target_degree = 0;
    /// (i, a_i) with Sq^k = sum Sq^i a_i, 0 < i < k, ascending in i.
    std::vector<std::pair<int, SteenrodElement>> summands;

    /// sum_i Sq^i * a_i, unnormalised.
    SteenrodElement recombine() const;
    std::string to_string() const;
};

/// Decomposition Sq^k = sum_{0<i<k} Sq^i a_i at p = 2. Throws
/// std::domain_error when k is a power of two (no decomposition exists).
AdemDecomposition decompose_power(int k, const Rewriter& rewriter);
AdemDecomposition decompose_power(int k);

bool is_power_of_two(long long k);

} // namespace steenrod

#endif // STEENROD_STEENROD_CORE_HPP
