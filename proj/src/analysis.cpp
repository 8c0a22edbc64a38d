#include "pouw/analysis.hpp"

#include "pouw/primality.hpp"
#include "pouw/rng.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace pouw {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double median(std::vector<double> v)
{
    if (v.empty())
        return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

std::vector<std::uint8_t> text_bytes(const std::string& s) { return {s.begin(), s.end()}; }

Natural random_even_origin(Rng& rng, int bits)
{
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>((bits + 7) / 8));
    for (auto& b : bytes)
        b = static_cast<std::uint8_t>(rng.next());
    const int top = (bits - 1) % 8;
    bytes.back() &= static_cast<std::uint8_t>((1u << (top + 1)) - 1);
    bytes.back() |= static_cast<std::uint8_t>(1u << top);
    bytes.front() &= 0xFE;
    return Natural::from_bytes_le(bytes);
}

struct Candidate {
    Natural origin;
    ChainKind kind;
};

std::vector<Candidate> speedup_workload(FixedLength target, std::uint64_t seed, std::uint64_t count)
{
    const Natural base = sha256d(text_bytes("speedup-" + std::to_string(seed))).to_natural_le();
    const int depth = std::max<int>(1, static_cast<int>(target.integer()));
    const auto primes = sieve_small_primes(10'000);
    std::vector<Candidate> out;
    constexpr std::uint64_t window = 1u << 14;
    for (std::uint64_t start = 1; out.size() < count; start += window) {
        const auto cc1 = sieve_candidates(base, start, start + window, ChainKind::Cunningham1, depth, primes);
        const auto cc2 = sieve_candidates(base, start, start + window, ChainKind::Cunningham2, depth, primes);
        for (std::uint64_t i = 0; i < window && out.size() < count; ++i) {
            const Natural origin = base * Natural(start + i);
            if (origin.is_odd())
                continue;
            if (cc1[i])
                out.push_back({origin, ChainKind::Cunningham1});
            if (cc2[i] && out.size() < count)
                out.push_back({origin, ChainKind::Cunningham2});
        }
    }
    return out;
}

double evaluate_partitioned(const std::vector<Candidate>& work, int workers)
{
    std::vector<std::uint32_t> sink(static_cast<std::size_t>(workers), 0);
    const auto start = Clock::now();
    auto run = [&](int w) {
        const auto [lo, hi] = worker_slice(0, work.size(), w, workers);
        std::uint32_t acc = 0;
        for (std::uint64_t i = lo; i < hi; ++i)
            acc ^= evaluate_chain(work[i].kind, work[i].origin).raw;
        sink[static_cast<std::size_t>(w)] = acc;
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::jthread> threads;
        for (int w = 0; w < workers; ++w)
            threads.emplace_back(run, w);
    }
    return seconds_since(start);
}

} // namespace

std::uint64_t prime_counting(std::uint64_t x)
{
    if (x < 2 || x > 100'000'000)
        throw std::invalid_argument("prime_counting: x must be in [2, 1e8]");
    if (x < 3)
        return 1;
    const auto limit = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(x))) + 1;
    std::vector<std::uint32_t> base;
    for (std::uint32_t p : sieve_small_primes(std::max<std::uint64_t>(limit, 2)))
        if (p != 2)
            base.push_back(p);

    // Odd numbers only: index i stands for 2i + 1.
    constexpr std::uint64_t segment = 1u << 16;
    const std::uint64_t last_index = (x - 1) / 2;
    std::uint64_t count = 1; // the prime 2
    std::vector<std::uint8_t> composite(segment);
    for (std::uint64_t lo = 1; lo <= last_index; lo += segment) {
        const std::uint64_t hi = std::min(lo + segment - 1, last_index);
        std::fill(composite.begin(), composite.end(), 0);
        for (std::uint64_t p : base) {
            const std::uint64_t square = p * p;
            if (square > 2 * hi + 1)
                break;
            std::uint64_t first = std::max(square, ((2 * lo + 1 + p - 1) / p) * p);
            if (first % 2 == 0)
                first += p;
            for (std::uint64_t n = first; n <= 2 * hi + 1; n += 2 * p)
                composite[(n - 1) / 2 - lo] = 1;
        }
        for (std::uint64_t i = lo; i <= hi; ++i)
            count += composite[i - lo] == 0;
    }
    return count;
}

DensityReport pnt_ratio(std::uint64_t x)
{
    if (x < 10)
        throw std::invalid_argument("pnt_ratio: x must be >= 10");
    DensityReport r;
    r.x = x;
    r.pi_x = prime_counting(x);
    r.pnt_estimate = static_cast<double>(x) / std::log(static_cast<double>(x));
    r.ratio = static_cast<double>(r.pi_x) / r.pnt_estimate;
    return r;
}

FrequencyReport chain_frequency(int bits, int depth, std::uint64_t samples, std::uint64_t seed, ChainKind kind)
{
    if (bits < 16 || bits > 256)
        throw std::invalid_argument("chain_frequency: bits must be in [16, 256]");
    if (depth < 1 || depth > 3)
        throw std::invalid_argument("chain_frequency: depth must be 1, 2 or 3");
    if (samples < 1000)
        throw std::invalid_argument("chain_frequency: samples must be >= 1000");
    Rng rng(seed);
    FrequencyReport r;
    r.bits = bits;
    r.depth = depth;
    r.kind = kind;
    r.samples = samples;
    for (std::uint64_t i = 0; i < samples; ++i) {
        const Natural origin = random_even_origin(rng, bits);
        if (evaluate_chain(kind, origin).integer() >= static_cast<std::uint32_t>(depth))
            ++r.hits;
    }
    r.frequency = static_cast<double>(r.hits) / static_cast<double>(samples);
    r.pnt_expectation = 2.0 / (bits * std::log(2.0));
    return r;
}

Block mine_fixture(FixedLength target, std::uint64_t seed, const MinerConfig& miner)
{
    BlockTemplate tmpl;
    tmpl.parent = genesis_block().header;
    tmpl.payload = text_bytes("fixture-" + std::to_string(seed));
    tmpl.target = target;
    tmpl.timestamp = 1;
    MinerConfig mc = miner;
    mc.worker_count = 1;
    mc.seed = seed;
    MineOutcome out = mine_block(tmpl, mc);
    if (!out.block)
        throw std::runtime_error("mine_fixture: budget exhausted");
    return std::move(*out.block);
}

AsymmetryReport verification_asymmetry(FixedLength target, int trials, std::uint64_t seed, const MinerConfig& miner)
{
    if (trials < 5)
        throw std::invalid_argument("verification_asymmetry: trials must be >= 5");
    const RetargetConfig config;
    if (target < config.min_target)
        throw std::invalid_argument("verification_asymmetry: target below the consensus minimum");

    AsymmetryReport r;
    r.target = target;
    r.trials = trials;
    const BlockHeader& parent = genesis_block().header;
    for (int t = -1; t < trials; ++t) {
        BlockTemplate tmpl;
        tmpl.parent = parent;
        tmpl.payload = text_bytes("asymmetry-" + std::to_string(seed) + "-" + std::to_string(t));
        tmpl.target = target;
        tmpl.timestamp = 1;
        MinerConfig mc = miner;
        mc.worker_count = 1;
        mc.seed = splitmix64(seed + static_cast<std::uint64_t>(t + 1));

        const auto mine_start = Clock::now();
        MineOutcome out = mine_block(tmpl, mc);
        const double mine_time = seconds_since(mine_start);
        if (!out.block) {
            if (t >= 0)
                ++r.skipped;
            continue;
        }
        const auto verify_start = Clock::now();
        const Verdict first = validate_block(*out.block, parent, config);
        const double verify_time = seconds_since(verify_start);
        const Verdict second = validate_block(*out.block, parent, config);
        if (first != Verdict::Valid || second != first)
            r.verdicts_consistent = false;
        if (t < 0)
            continue; // warm-up
        r.mine_seconds.push_back(mine_time);
        r.verify_seconds.push_back(verify_time);
    }
    r.median_mine = median(r.mine_seconds);
    r.median_verify = median(r.verify_seconds);
    r.ratio = r.median_mine > 0.0 ? r.median_verify / r.median_mine : 0.0;
    return r;
}

SpeedupReport parallel_speedup(const std::vector<FixedLength>& targets, const std::vector<int>& worker_counts,
                               int trials, std::uint64_t seed, std::uint64_t candidates)
{
    if (worker_counts.empty() || worker_counts.front() != 1 ||
        !std::is_sorted(worker_counts.begin(), worker_counts.end()))
        throw std::invalid_argument("parallel_speedup: worker counts must be ascending and start at 1");
    if (trials < 1)
        throw std::invalid_argument("parallel_speedup: trials must be >= 1");
    SpeedupReport report;
    report.hardware_threads = std::thread::hardware_concurrency();
    for (FixedLength target : targets) {
        const auto work = speedup_workload(target, seed, candidates);
        evaluate_partitioned(work, 1); // warm-up
        double baseline = 0.0;
        for (int workers : worker_counts) {
            std::vector<double> times;
            for (int t = 0; t < trials; ++t)
                times.push_back(evaluate_partitioned(work, workers));
            SpeedupEntry e;
            e.target = target;
            e.workers = workers;
            e.candidates = work.size();
            e.seconds = median(times);
            e.throughput = static_cast<double>(work.size()) / e.seconds;
            if (workers == 1)
                baseline = e.throughput;
            e.speedup = e.throughput / baseline;
            report.entries.push_back(e);
        }
    }
    return report;
}

SensitivityReport sensitivity_sweep(const Block& block, const BlockHeader& parent, std::uint64_t mutations,
                                    std::uint64_t seed, const RetargetConfig& config, BindingMode mode)
{
    SensitivityReport r;
    r.mutations = mutations;
    r.control_valid = validate_block(block, parent, config, mode) == Verdict::Valid;
    Rng rng(seed);
    for (std::uint64_t i = 0; i < mutations; ++i) {
        Block mutated = block;
        mutated.header.prev_hash.flip_bit(static_cast<unsigned>(rng.uniform_int(0, 255)));
        const Verdict v = validate_block(mutated, parent, config, mode);
        if (v == Verdict::Valid)
            ++r.false_valid;
        if (check_proof_of_work(mutated.header, config, mode) == Verdict::Valid)
            ++r.pow_false_valid;
        ++r.reasons[std::string(reason_code(v))];
    }
    return r;
}

std::string to_record(const DensityReport& r)
{
    return json{{"record", "pnt"}, {"x", r.x}, {"pi_x", r.pi_x}, {"pnt_estimate", r.pnt_estimate}, {"ratio", r.ratio}}
        .dump();
}

std::string to_record(const FrequencyReport& r)
{
    return json{{"record", "density"},
                {"bits", r.bits},
                {"depth", r.depth},
                {"kind", std::string(to_string(r.kind))},
                {"samples", r.samples},
                {"hits", r.hits},
                {"frequency", r.frequency},
                {"pnt_expectation", r.pnt_expectation}}
        .dump();
}

std::string to_record(const AsymmetryReport& r)
{
    return json{{"record", "asymmetry"},
                {"target", to_string(r.target)},
                {"trials", r.trials},
                {"skipped", r.skipped},
                {"median_mine_s", r.median_mine},
                {"median_verify_s", r.median_verify},
                {"ratio", r.ratio},
                {"verdicts_consistent", r.verdicts_consistent}}
        .dump();
}

std::vector<std::string> to_records(const SpeedupReport& r)
{
    std::vector<std::string> out;
    for (const SpeedupEntry& e : r.entries) {
        out.push_back(json{{"record", "speedup"},
                           {"target", to_string(e.target)},
                           {"workers", e.workers},
                           {"hardware_threads", r.hardware_threads},
                           {"candidates", e.candidates},
                           {"seconds", e.seconds},
                           {"throughput", e.throughput},
                           {"speedup", e.speedup}}
                          .dump());
    }
    return out;
}

std::string to_record(const SensitivityReport& r)
{
    return json{{"record", "sensitivity"},
                {"mutations", r.mutations},
                {"false_valid", r.false_valid},
                {"pow_false_valid", r.pow_false_valid},
                {"control_valid", r.control_valid},
                {"reasons", r.reasons}}
        .dump();
}

} // namespace pouw
