#include "steenrod/fp_arith.hpp"

#include <stdexcept>
#include <string>

namespace steenrod {

namespace {

bool is_prime(std::int64_t n)
{
    if (n < 2)
        return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

/// binom(n, k) for 0 <= n < p, computed exactly in F_p.
std::uint32_t small_binomial(std::uint32_t n, std::uint32_t k, Prime p)
{
    if (k > n)
        return 0;
    std::uint32_t num = 1, den = 1;
    for (std::uint32_t i = 0; i < k; ++i) {
        num = p.mul(num, n - i);
        den = p.mul(den, i + 1);
    }
    return p.mul(num, p.inv(den));
}

} // namespace

Prime::Prime(std::int64_t value)
{
    if (value >= (std::int64_t{1} << 31))
        throw std::invalid_argument("prime " + std::to_string(value) + " exceeds 2^31");
    if (!is_prime(value))
        throw std::invalid_argument(std::to_string(value) + " is not prime");
    p_ = static_cast<std::uint32_t>(value);
}

std::uint32_t Prime::pow(std::uint32_t a, std::uint64_t e) const
{
    std::uint32_t result = 1 % p_;
    while (e) {
        if (e & 1)
            result = mul(result, a);
        a = mul(a, a);
        e >>= 1;
    }
    return result;
}

std::uint32_t Prime::inv(std::uint32_t a) const
{
    if (a % p_ == 0)
        throw std::domain_error("inverse of zero in F_" + std::to_string(p_));
    return pow(a, p_ - 2);
}

std::ostream& operator<<(std::ostream& os, Prime p) { return os << p.value(); }

void FpScalar::check_same_field(FpScalar o) const
{
    if (!(prime_ == o.prime_))
        throw std::invalid_argument("mixing scalars from different prime fields");
}

FpScalar FpScalar::operator+(FpScalar o) const
{
    check_same_field(o);
    return {prime_.add(residue_, o.residue_), prime_};
}

FpScalar FpScalar::operator-(FpScalar o) const
{
    check_same_field(o);
    return {prime_.sub(residue_, o.residue_), prime_};
}

FpScalar FpScalar::operator*(FpScalar o) const
{
    check_same_field(o);
    return {prime_.mul(residue_, o.residue_), prime_};
}

std::ostream& operator<<(std::ostream& os, FpScalar x) { return os << x.residue(); }

std::vector<std::uint32_t> p_adic_digits(std::uint64_t n, Prime p)
{
    std::vector<std::uint32_t> digits;
    while (n > 0) {
        digits.push_back(static_cast<std::uint32_t>(n % p.value()));
        n /= p.value();
    }
    return digits;
}

FpScalar lucas_binomial(std::uint64_t n, std::uint64_t k, Prime p)
{
    if (k > n)
        return {0, p};
    std::uint32_t result = 1 % p.value();
    while (k > 0 && result != 0) {
        result = p.mul(result, small_binomial(static_cast<std::uint32_t>(n % p.value()),
                                              static_cast<std::uint32_t>(k % p.value()), p));
        n /= p.value();
        k /= p.value();
    }
    return {result, p};
}

std::uint32_t binomial_mod(std::int64_t n, std::int64_t k, Prime p)
{
    if (n < 0 || k < 0 || k > n)
        return 0;
    return lucas_binomial(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(k), p).residue();
}

} // namespace steenrod
