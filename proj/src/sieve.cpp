#include "pouw/miner.hpp"

#include <stdexcept>

namespace pouw {

namespace {

__extension__ using u128 = unsigned __int128;

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t p)
{
    std::int64_t r0 = static_cast<std::int64_t>(p), r1 = static_cast<std::int64_t>(a % p);
    std::int64_t t0 = 0, t1 = 1;
    while (r1 != 0) {
        const std::int64_t q = r0 / r1;
        std::int64_t tmp = r0 - q * r1;
        r0 = r1;
        r1 = tmp;
        tmp = t0 - q * t1;
        t0 = t1;
        t1 = tmp;
    }
    if (t0 < 0)
        t0 += static_cast<std::int64_t>(p);
    return static_cast<std::uint64_t>(t0);
}

// Whether 2^step * hash * m + sign equals p. Only possible for tiny hashes.
bool element_is(std::uint64_t hash, unsigned step, std::uint64_t m, int sign, std::uint64_t p)
{
    if (m > (p + 1) / hash || step >= 40)
        return false;
    const u128 v = (static_cast<u128>(hash) * m) << step;
    if (v > p + 1)
        return false;
    return sign < 0 ? v - 1 == p : v + 1 == p;
}

} // namespace

std::vector<bool> sieve_candidates(const Natural& hash_int, std::uint64_t m_start, std::uint64_t m_end,
                                   ChainKind kind, int depth, std::span<const std::uint32_t> small_primes)
{
    if (m_end <= m_start)
        throw std::invalid_argument("sieve_candidates: empty window");
    if (depth < 1)
        throw std::invalid_argument("sieve_candidates: depth must be >= 1");

    std::vector<int> signs;
    switch (kind) {
    case ChainKind::Cunningham1:
        signs = {-1};
        break;
    case ChainKind::Cunningham2:
        signs = {+1};
        break;
    case ChainKind::BiTwin:
        signs = {-1, +1};
        break;
    }

    const std::uint64_t width = m_end - m_start;
    std::vector<bool> mask(width, true);
    const bool tiny_hash = hash_int.bit_length() <= 62;
    const std::uint64_t hash_word = tiny_hash ? hash_int.to_u64() : 0;

    for (const std::uint32_t p : small_primes) {
        std::uint64_t scaled = hash_int.mod_word(p); // 2^i * hash mod p
        const std::uint64_t start_residue = m_start % p;
        for (int i = 0; i < depth; ++i) {
            if (i > 0)
                scaled = (scaled * 2) % p;
            if (scaled == 0)
                break;
            const std::uint64_t inv = inverse_mod(scaled, p);
            for (int sign : signs) {
                // 2^i h m + sign == 0 (mod p)  <=>  m == -sign / (2^i h)
                const std::uint64_t residue = sign < 0 ? inv : (p - inv) % p;
                std::uint64_t m = m_start + (residue + p - start_residue) % p;
                for (; m < m_end; m += p) {
                    if (tiny_hash && element_is(hash_word, static_cast<unsigned>(i), m, sign, p))
                        continue;
                    mask[m - m_start] = false;
                }
            }
        }
    }
    return mask;
}

} // namespace pouw
