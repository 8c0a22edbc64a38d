#include "pouw/miner.hpp"

#include "pouw/primality.hpp"
#include "pouw/rng.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace pouw {

namespace {

struct Found {
    std::uint64_t multiplier;
    ChainKind kind;
};

// Sieves one slice for all three kinds and evaluates the survivors in
// multiplier order. Stops early once `stop` is raised.
std::optional<Found> search_slice(const Natural& base, std::uint64_t begin, std::uint64_t end, FixedLength target,
                                  int depth, std::span<const std::uint32_t> primes, const std::atomic<bool>& stop,
                                  std::uint64_t& candidates)
{
    const auto cc1 = sieve_candidates(base, begin, end, ChainKind::Cunningham1, depth, primes);
    const auto cc2 = sieve_candidates(base, begin, end, ChainKind::Cunningham2, depth, primes);
    for (std::uint64_t m = begin; m < end; ++m) {
        const std::size_t bit = m - begin;
        if (!cc1[bit] && !cc2[bit])
            continue;
        if (stop.load(std::memory_order_relaxed))
            return std::nullopt;
        const Natural origin = base * Natural(m);
        if (origin.is_odd())
            continue;
        const std::pair<ChainKind, bool> kinds[] = {
            {ChainKind::Cunningham1, cc1[bit]},
            {ChainKind::Cunningham2, cc2[bit]},
            {ChainKind::BiTwin, cc1[bit] && cc2[bit]},
        };
        for (const auto& [kind, survives] : kinds) {
            if (!survives)
                continue;
            ++candidates;
            if (meets_target(evaluate_chain(kind, origin), target))
                return Found{m, kind};
        }
    }
    return std::nullopt;
}

} // namespace

void check_miner_config(const MinerConfig& config)
{
    if (config.worker_count < 1)
        throw std::invalid_argument("miner: worker_count must be >= 1");
    if (config.multiplier_range < static_cast<std::uint64_t>(config.worker_count))
        throw std::invalid_argument("miner: multiplier_range must cover every worker");
    if (config.sieve_prime_limit < 2 || config.sieve_prime_limit > 100'000'000)
        throw std::invalid_argument("miner: sieve_prime_limit must be in [2, 1e8]");
}

std::pair<std::uint64_t, std::uint64_t> worker_slice(std::uint64_t batch_begin, std::uint64_t batch_size,
                                                     int worker, int worker_count)
{
    const auto w = static_cast<std::uint64_t>(worker);
    const auto n = static_cast<std::uint64_t>(worker_count);
    return {batch_begin + batch_size * w / n, batch_begin + batch_size * (w + 1) / n};
}

BlockHeader template_header(const BlockTemplate& tmpl, std::uint64_t nonce)
{
    BlockHeader h;
    h.version = tmpl.version;
    h.prev_hash = header_hash(tmpl.parent);
    h.payload_hash = sha256(tmpl.payload);
    h.timestamp = tmpl.timestamp;
    h.target = tmpl.target;
    h.nonce = nonce;
    return h;
}

MineOutcome mine_block(const BlockTemplate& tmpl, const MinerConfig& config, BindingMode mode)
{
    check_miner_config(config);
    MineOutcome outcome;
    if (config.max_batches == 0)
        return outcome;

    BlockHeader header = template_header(tmpl, config.seed);
    const Natural base = binding_base(header, mode);
    if (base.is_zero())
        throw std::invalid_argument("mine_block: binding hash is zero");

    const int depth = std::max<int>(1, static_cast<int>(tmpl.target.integer()));
    const std::vector<std::uint32_t> primes = sieve_small_primes(config.sieve_prime_limit);
    const std::uint64_t first_multiplier = 1 + (splitmix64(config.seed) & 0xFFFF);

    std::atomic<bool> stop{false};
    std::mutex result_mutex;
    std::optional<Found> result;
    std::vector<MinerStats> per_worker(static_cast<std::size_t>(config.worker_count));

    auto work = [&](int worker) {
        MinerStats& stats = per_worker[static_cast<std::size_t>(worker)];
        for (std::uint64_t b = 0; b < config.max_batches && !stop.load(); ++b) {
            const std::uint64_t batch_begin = first_multiplier + b * config.multiplier_range;
            const auto [lo, hi] = worker_slice(batch_begin, config.multiplier_range, worker, config.worker_count);
            ++stats.batches;
            stats.sieved += hi - lo;
            if (lo == hi)
                continue;
            if (auto found = search_slice(base, lo, hi, tmpl.target, depth, primes, stop, stats.candidates)) {
                std::lock_guard lock(result_mutex);
                if (!result)
                    result = found;
                stop.store(true);
                return;
            }
        }
    };

    if (config.worker_count == 1) {
        work(0);
    } else {
        std::vector<std::jthread> threads;
        for (int w = 0; w < config.worker_count; ++w)
            threads.emplace_back(work, w);
    }

    for (const MinerStats& s : per_worker) {
        outcome.stats.batches = std::max(outcome.stats.batches, s.batches);
        outcome.stats.sieved += s.sieved;
        outcome.stats.candidates += s.candidates;
    }
    if (!result)
        return outcome;

    header.kind = result->kind;
    header.certificate = Natural(result->multiplier);
    outcome.block = Block{header, tmpl.payload};
    return outcome;
}

} // namespace pouw
