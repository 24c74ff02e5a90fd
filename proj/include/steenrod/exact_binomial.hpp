#ifndef STEENROD_EXACT_BINOMIAL_HPP
#define STEENROD_EXACT_BINOMIAL_HPP

#include <cstdint>

#include <boost/multiprecision/cpp_int.hpp>

#include "steenrod/fp_arith.hpp"

namespace steenrod {

using BigInt = boost::multiprecision::cpp_int;

/// Exact binom(n, k) by the multiplicative formula, cancelling the running
/// numerator/denominator by their gcd at every step. Zero when k > n.
///
/// Deliberately shares nothing with lucas_binomial so the two can serve as
/// independent routes to the same residue.
BigInt exact_binomial(std::uint64_t n, std::uint64_t k);

/// exact_binomial(n, k) reduced into [0, p).
std::uint32_t exact_binomial_mod(std::uint64_t n, std::uint64_t k, Prime p);

} // namespace steenrod

#endif // STEENROD_EXACT_BINOMIAL_HPP
