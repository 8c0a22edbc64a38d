#pragma once

#include "pouw/natural.hpp"

#include <cstdint>
#include <vector>

namespace pouw {

struct FermatResult {
    bool passed = false;
    Natural remainder; ///< 2^(q-1) mod q
};

/// 2^exponent mod modulus by left-to-right square-and-multiply. The
/// multiply step for base 2 is a shift and one conditional subtraction.
Natural pow2_mod(const Natural& exponent, const Natural& modulus);

/// Base-2 Fermat test. Requires q odd and q >= 3; throws std::invalid_argument
/// otherwise.
FermatResult fermat_probable_prime(const Natural& q);

/// Euler-Lagrange-Lifchitz test: r = 2^((q-1)/2) mod q must be 1 when
/// q mod 8 is 1 or 7, and q-1 when q mod 8 is 3 or 5. Requires q odd, q >= 5.
bool ell_probable_prime(const Natural& q);

/// Exact primality for word-size n (deterministic Miller-Rabin over the
/// first twelve prime bases). Used as the test oracle.
bool deterministic_is_prime(std::uint64_t n);

/// Natural overload; throws std::out_of_range for n >= 2^64.
bool deterministic_is_prime(const Natural& n);

/// All primes <= limit, ascending. Requires 2 <= limit <= 10^8.
std::vector<std::uint32_t> sieve_small_primes(std::uint64_t limit);

/// Primes below this bound are used for trial division ahead of the
/// probabilistic tests, which makes chain evaluation exact below bound^2.
inline constexpr std::uint32_t kTrialDivisionBound = 4096;

/// True if q has a prime factor p < kTrialDivisionBound with p != q.
bool has_small_factor(const Natural& q);

} // namespace pouw
