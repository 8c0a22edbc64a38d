#pragma once

#include "pouw/block.hpp"
#include "pouw/miner.hpp"
#include "pouw/validation.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace pouw {

/// Exact pi(x) for 2 <= x <= 10^8 by a segmented odd-only sieve.
std::uint64_t prime_counting(std::uint64_t x);

struct DensityReport {
    std::uint64_t x = 0;
    std::uint64_t pi_x = 0;
    double pnt_estimate = 0.0; ///< x / ln x
    double ratio = 0.0;        ///< pi_x / pnt_estimate
};

/// Requires x >= 10.
DensityReport pnt_ratio(std::uint64_t x);

struct FrequencyReport {
    int bits = 0;
    int depth = 0;
    ChainKind kind = ChainKind::Cunningham1;
    std::uint64_t samples = 0;
    std::uint64_t hits = 0;
    double frequency = 0.0;
    double pnt_expectation = 0.0; ///< 2 / ln(2^bits), the odd-number prime density
};

/// Fraction of random even `bits`-bit origins whose chain reaches integer
/// length `depth`. Requires 16 <= bits <= 256, depth in {1,2,3}, samples >= 1000.
FrequencyReport chain_frequency(int bits, int depth, std::uint64_t samples, std::uint64_t seed,
                                ChainKind kind = ChainKind::Cunningham1);

struct AsymmetryReport {
    FixedLength target;
    int trials = 0;
    int skipped = 0; ///< trials whose mining budget ran out
    std::vector<double> mine_seconds;
    std::vector<double> verify_seconds;
    double median_mine = 0.0;
    double median_verify = 0.0;
    double ratio = 0.0; ///< median_verify / median_mine
    bool verdicts_consistent = true;
};

/// Mines `trials` blocks on top of genesis and validates each one, timing
/// both. A warm-up trial runs first and is discarded. Requires trials >= 5.
AsymmetryReport verification_asymmetry(FixedLength target, int trials, std::uint64_t seed,
                                       const MinerConfig& miner = {});

struct SpeedupEntry {
    FixedLength target;
    int workers = 1;
    std::uint64_t candidates = 0;
    double seconds = 0.0;
    double throughput = 0.0; ///< candidates per second
    double speedup = 1.0;    ///< relative to the first worker count
};

struct SpeedupReport {
    unsigned hardware_threads = 0;
    std::vector<SpeedupEntry> entries;
};

/// Throughput of full chain evaluation over a fixed list of sieved
/// candidates, split into contiguous disjoint slices per worker.
/// worker_counts must be ascending and start at 1.
SpeedupReport parallel_speedup(const std::vector<FixedLength>& targets, const std::vector<int>& worker_counts,
                               int trials, std::uint64_t seed, std::uint64_t candidates = 2000);

struct SensitivityReport {
    std::uint64_t mutations = 0;
    std::uint64_t false_valid = 0;     ///< full validation against the parent
    std::uint64_t pow_false_valid = 0; ///< proof-of-work rules alone, linkage ignored
    bool control_valid = false;
    std::map<std::string, std::uint64_t> reasons;
};

/// Flips one random prev_hash bit per mutation and revalidates the block's
/// proof of work against its own (unchanged) parent.
SensitivityReport sensitivity_sweep(const Block& block, const BlockHeader& parent, std::uint64_t mutations,
                                    std::uint64_t seed, const RetargetConfig& config = {},
                                    BindingMode mode = BindingMode::Previous);

/// A block mined on top of genesis with a single worker.
Block mine_fixture(FixedLength target, std::uint64_t seed, const MinerConfig& miner = {});

// One JSON record per measurement.
std::string to_record(const DensityReport& r);
std::string to_record(const FrequencyReport& r);
std::string to_record(const AsymmetryReport& r);
std::vector<std::string> to_records(const SpeedupReport& r);
std::string to_record(const SensitivityReport& r);

} // namespace pouw
