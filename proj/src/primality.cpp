#include "pouw/primality.hpp"

#include <array>
#include <stdexcept>

namespace pouw {

namespace {

__extension__ using u128 = unsigned __int128;

void require_odd_at_least(const Natural& q, std::uint64_t minimum, const char* who)
{
    if (q.is_even() || q < Natural(minimum))
        throw std::invalid_argument(std::string(who) + ": argument must be odd and >= " +
                                    std::to_string(minimum));
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m)
{
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m)
{
    std::uint64_t result = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1)
            result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

// Primes below kTrialDivisionBound packed into groups whose product fits in a
// word, so one multi-precision division serves several primes.
struct TrialGroup {
    std::uint64_t product;
    std::vector<std::uint32_t> primes;
};

const std::vector<TrialGroup>& trial_groups()
{
    static const std::vector<TrialGroup> groups = [] {
        std::vector<TrialGroup> out;
        for (std::uint32_t p : sieve_small_primes(kTrialDivisionBound - 1)) {
            if (p == 2)
                continue;
            if (out.empty() || out.back().product > UINT64_MAX / p)
                out.push_back({1, {}});
            out.back().product *= p;
            out.back().primes.push_back(p);
        }
        return out;
    }();
    return groups;
}

} // namespace

Natural pow2_mod(const Natural& exponent, const Natural& modulus)
{
    if (modulus.is_zero())
        throw std::domain_error("pow2_mod: zero modulus");
    const mpz_srcptr m = modulus.mpz().get_mpz_t();
    mpz_class acc = 1;
    mpz_class tmp;
    if (mpz_cmp_ui(m, 1) == 0)
        return Natural();
    const std::size_t bits = exponent.bit_length();
    const mpz_srcptr e = exponent.mpz().get_mpz_t();
    for (std::size_t i = bits; i-- > 0;) {
        mpz_mul(tmp.get_mpz_t(), acc.get_mpz_t(), acc.get_mpz_t());
        mpz_tdiv_r(acc.get_mpz_t(), tmp.get_mpz_t(), m);
        if (mpz_tstbit(e, i)) {
            mpz_mul_2exp(acc.get_mpz_t(), acc.get_mpz_t(), 1);
            if (mpz_cmp(acc.get_mpz_t(), m) >= 0)
                mpz_sub(acc.get_mpz_t(), acc.get_mpz_t(), m);
        }
    }
    return Natural(std::move(acc));
}

FermatResult fermat_probable_prime(const Natural& q)
{
    require_odd_at_least(q, 3, "fermat_probable_prime");
    Natural r = pow2_mod(q - Natural(1), q);
    const bool passed = r == Natural(1);
    return {passed, std::move(r)};
}

bool ell_probable_prime(const Natural& q)
{
    require_odd_at_least(q, 5, "ell_probable_prime");
    const Natural r = pow2_mod((q - Natural(1)) >> 1, q);
    switch (q.mod_word(8)) {
    case 1:
    case 7:
        return r == Natural(1);
    default:
        return r + Natural(1) == q;
    }
}

bool deterministic_is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    static constexpr std::array<std::uint64_t, 12> bases{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (std::uint64_t p : bases) {
        if (n % p == 0)
            return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : bases) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness)
            return false;
    }
    return true;
}

bool deterministic_is_prime(const Natural& n)
{
    if (!n.fits_u64())
        throw std::out_of_range("deterministic_is_prime: n >= 2^64");
    return deterministic_is_prime(n.to_u64());
}

std::vector<std::uint32_t> sieve_small_primes(std::uint64_t limit)
{
    if (limit < 2 || limit > 100'000'000)
        throw std::invalid_argument("sieve_small_primes: limit must be in [2, 1e8]");
    std::vector<bool> composite(limit + 1, false);
    std::vector<std::uint32_t> primes;
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i])
            continue;
        primes.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= limit; j += i)
            composite[j] = true;
    }
    return primes;
}

bool has_small_factor(const Natural& q)
{
    if (q.is_even())
        return q != Natural(2);
    const bool small = q.fits_u64();
    const std::uint64_t qv = small ? q.to_u64() : 0;
    for (const TrialGroup& group : trial_groups()) {
        const std::uint64_t residue = q.mod_word(group.product);
        for (std::uint32_t p : group.primes) {
            if (small && static_cast<u128>(p) * p > qv)
                return false;
            if (residue % p == 0 && !(small && qv == p))
                return true;
        }
    }
    return false;
}

} // namespace pouw
