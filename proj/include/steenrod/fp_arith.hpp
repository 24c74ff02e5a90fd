#ifndef STEENROD_FP_ARITH_HPP
#define STEENROD_FP_ARITH_HPP

#include <cstdint>
#include <ostream>
#include <vector>

namespace steenrod {

/// A prime p < 2^31, validated by trial division at construction.
///
/// Also acts as the arithmetic context for residues stored as plain
/// `std::uint32_t` inside containers; every residue handed to these helpers
/// must already lie in [0, p).
class Prime {
public:
    explicit Prime(std::int64_t value);

    std::uint32_t value() const { return p_; }
    bool is_two() const { return p_ == 2; }
    bool is_odd() const { return p_ != 2; }

    std::uint32_t reduce(std::int64_t n) const
    {
        std::int64_t r = n % static_cast<std::int64_t>(p_);
        return static_cast<std::uint32_t>(r < 0 ? r + p_ : r);
    }
    std::uint32_t add(std::uint32_t a, std::uint32_t b) const
    {
        std::uint32_t s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return a >= b ? a - b : a + p_ - b; }
    std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : p_ - a; }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const
    {
        return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p_);
    }
    std::uint32_t pow(std::uint32_t a, std::uint64_t e) const;
    /// Throws std::domain_error on zero.
    std::uint32_t inv(std::uint32_t a) const;
    /// (-1)^n as a residue.
    std::uint32_t sign(std::int64_t n) const { return (n & 1) ? p_ - 1 : 1 % p_; }

    friend bool operator==(Prime a, Prime b) { return a.p_ == b.p_; }

private:
    std::uint32_t p_;
};

std::ostream& operator<<(std::ostream& os, Prime p);

/// An element of F_p that remembers its field.
class FpScalar {
public:
    FpScalar(std::int64_t n, Prime p) : residue_(p.reduce(n)), prime_(p) {}

    std::uint32_t residue() const { return residue_; }
    Prime prime() const { return prime_; }
    bool is_zero() const { return residue_ == 0; }

    FpScalar operator+(FpScalar o) const;
    FpScalar operator-(FpScalar o) const;
    FpScalar operator*(FpScalar o) const;
    FpScalar operator-() const { return {prime_.neg(residue_), prime_}; }
    FpScalar inverse() const { return {prime_.inv(residue_), prime_}; }

    friend bool operator==(FpScalar a, FpScalar b)
    {
        return a.prime_ == b.prime_ && a.residue_ == b.residue_;
    }

private:
    void check_same_field(FpScalar o) const;

    std::uint32_t residue_;
    Prime prime_;
};

std::ostream& operator<<(std::ostream& os, FpScalar x);

/// Base-p digits of n, least significant first; empty for n = 0.
std::vector<std::uint32_t> p_adic_digits(std::uint64_t n, Prime p);

/// binom(n, k) mod p as the digitwise product given by Lucas' theorem.
FpScalar lucas_binomial(std::uint64_t n, std::uint64_t k, Prime p);

/// Same as lucas_binomial but accepts signed arguments and returns 0 whenever
/// n < 0, k < 0 or k > n. This is the convention the Adem coefficient
/// formulas rely on.
std::uint32_t binomial_mod(std::int64_t n, std::int64_t k, Prime p);

} // namespace steenrod

#endif // STEENROD_FP_ARITH_HPP
