#pragma once

#include "pouw/block.hpp"
#include "pouw/validation.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace pouw {

struct BlockTemplate {
    BlockHeader parent;
    std::vector<std::uint8_t> payload;
    FixedLength target = FixedLength::from_parts(2, 0);
    std::uint64_t timestamp = 1;
    std::uint32_t version = 1;
};

struct MinerConfig {
    int worker_count = 1;
    std::uint64_t multiplier_range = 1u << 16; ///< multipliers per batch
    std::uint32_t sieve_prime_limit = 10'000;
    std::uint64_t max_batches = 10'000;
    std::uint64_t seed = 0;
};

struct MinerStats {
    std::uint64_t batches = 0;
    std::uint64_t sieved = 0;     ///< multipliers covered by the sieve
    std::uint64_t candidates = 0; ///< (multiplier, kind) pairs fully evaluated
};

struct MineOutcome {
    std::optional<Block> block; ///< empty when the budget ran out
    MinerStats stats;
};

/// Survivor mask over multipliers m in [m_start, m_end): bit (m - m_start) is
/// cleared when some listed prime p divides a chain element
/// 2^i (hash_int m) -+ 1 for i < depth and that element is not p itself.
/// Every m whose chain reaches integer length `depth` survives.
std::vector<bool> sieve_candidates(const Natural& hash_int, std::uint64_t m_start, std::uint64_t m_end,
                                   ChainKind kind, int depth, std::span<const std::uint32_t> small_primes);

/// Searches certificate multipliers for a chain meeting the template target.
/// Batches of `multiplier_range` multipliers are split into disjoint
/// contiguous slices, one per worker; the first qualifying slice result
/// wins and stops the others. With one worker the result depends only on
/// the template, the config and the binding mode.
MineOutcome mine_block(const BlockTemplate& tmpl, const MinerConfig& config,
                       BindingMode mode = BindingMode::Previous);

/// Throws std::invalid_argument for a non-positive worker count, an empty
/// batch range or a sieve limit outside [2, 1e8].
void check_miner_config(const MinerConfig& config);

/// Worker slice [begin, end) of a batch, exposed for tests.
std::pair<std::uint64_t, std::uint64_t> worker_slice(std::uint64_t batch_begin, std::uint64_t batch_size,
                                                     int worker, int worker_count);

/// Header for the template with kind and certificate still unset.
BlockHeader template_header(const BlockTemplate& tmpl, std::uint64_t nonce);

} // namespace pouw
