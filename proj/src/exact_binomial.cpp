#include "steenrod/exact_binomial.hpp"

namespace steenrod {

BigInt exact_binomial(std::uint64_t n, std::uint64_t k)
{
    if (k > n)
        return 0;
    if (k > n - k)
        k = n - k;
    BigInt num = 1, den = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        num *= n - k + i;
        den *= i;
        BigInt g = boost::multiprecision::gcd(num, den);
        if (g != 1) {
            num /= g;
            den /= g;
        }
    }
    // den divides num exactly once the product is complete
    return num / den;
}

std::uint32_t exact_binomial_mod(std::uint64_t n, std::uint64_t k, Prime p)
{
    BigInt r = exact_binomial(n, k) % p.value();
    return r.convert_to<std::uint32_t>();
}

} // namespace steenrod
