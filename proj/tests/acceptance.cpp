// Acceptance suite: one PASS/FAIL/SKIP line per criterion, exit status 1 if
// anything failed.

#include "cli.hpp"
#include "pouw/analysis.hpp"
#include "pouw/netsim.hpp"
#include "pouw/primality.hpp"
#include "pouw/rng.hpp"

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace pouw;
using nlohmann::json;

namespace {

enum class Status { Pass, Fail, Skip };

struct Outcome {
    Status status;
    std::string detail;
};

Outcome verdict(bool ok, std::string detail) { return {ok ? Status::Pass : Status::Fail, std::move(detail)}; }

std::string fmt(const char* format, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

struct CliResult {
    int code;
    std::string out;
};

CliResult cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "pouw");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str()};
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::uint64_t brute_integer_length(ChainKind kind, std::uint64_t origin)
{
    std::uint64_t n = 0;
    for (;; ++n) {
        const std::uint64_t scaled = origin << n;
        const bool lo = deterministic_is_prime(scaled - 1);
        const bool hi = deterministic_is_prime(scaled + 1);
        const bool ok = kind == ChainKind::Cunningham1 ? lo : kind == ChainKind::Cunningham2 ? hi : lo && hi;
        if (!ok)
            return n;
    }
}

SimConfig honest_config(std::vector<double> shares, std::uint64_t blocks, std::uint64_t seed)
{
    SimConfig c;
    for (double s : shares)
        c.nodes.push_back({s, Strategy::Honest});
    c.blocks = blocks;
    c.seed = seed;
    return c;
}

SimConfig selfish_config(double alpha, std::uint64_t seed)
{
    SimConfig c;
    c.nodes.push_back({alpha, Strategy::Selfish});
    for (int i = 0; i < 3; ++i)
        c.nodes.push_back({(1.0 - alpha) / 3.0, Strategy::Honest});
    c.gamma = 1.0;
    c.blocks = 10'000;
    c.seed = seed;
    return c;
}

// ---- criteria -------------------------------------------------------------

Outcome worked_examples()
{
    auto ints = [](const std::vector<Natural>& v) {
        std::vector<std::uint64_t> out;
        for (const Natural& n : v)
            out.push_back(n.to_u64());
        return out;
    };
    using V = std::vector<std::uint64_t>;
    const bool cc1 = ints(chain_elements(ChainKind::Cunningham1, Natural(42), 3)) == V{41, 83, 167} &&
                     evaluate_chain(ChainKind::Cunningham1, Natural(42)).integer() == 3;
    const bool cc2 = ints(chain_elements(ChainKind::Cunningham2, Natural(6), 2)) == V{7, 13} &&
                     evaluate_chain(ChainKind::Cunningham2, Natural(6)).integer() == 2;
    const bool tw = ints(chain_elements(ChainKind::BiTwin, Natural(6), 2)) == V{5, 7, 11, 13} &&
                    evaluate_chain(ChainKind::BiTwin, Natural(6)).integer() == 2;
    return verdict(cc1 && cc2 && tw, fmt("CC1(42)=%s CC2(6)=%s BITWIN(6)=%s",
                                         to_string(evaluate_chain(ChainKind::Cunningham1, Natural(42))).c_str(),
                                         to_string(evaluate_chain(ChainKind::Cunningham2, Natural(6))).c_str(),
                                         to_string(evaluate_chain(ChainKind::BiTwin, Natural(6))).c_str()));
}

Outcome oracle_equivalence()
{
    std::uint64_t checked = 0, mismatches = 0;
    for (ChainKind kind : kAllChainKinds) {
        for (std::uint64_t o = 4; o <= 10'000; o += 2) {
            ++checked;
            if (evaluate_chain(kind, Natural(o)).integer() != brute_integer_length(kind, o))
                ++mismatches;
        }
    }
    return verdict(mismatches == 0, fmt("%llu (kind, origin) pairs, %llu mismatches", (unsigned long long)checked,
                                        (unsigned long long)mismatches));
}

Outcome pseudoprimes()
{
    const bool fools = fermat_probable_prime(Natural(341)).passed && !deterministic_is_prime(341);
    std::uint64_t primes = 0, false_negatives = 0;
    for (std::uint64_t q = 3; q < 1'000'000; q += 2) {
        if (!deterministic_is_prime(q))
            continue;
        ++primes;
        if (!fermat_probable_prime(Natural(q)).passed)
            ++false_negatives;
    }
    return verdict(fools && false_negatives == 0,
                   fmt("341 passes Fermat: %s; %llu odd primes < 1e6, %llu false negatives", fools ? "yes" : "no",
                       (unsigned long long)primes, (unsigned long long)false_negatives));
}

Outcome prime_number_theorem()
{
    const std::uint64_t pi = prime_counting(1'000'000);
    const std::uint64_t by_sieve = sieve_small_primes(1'000'000).size();
    std::uint64_t by_test = 0;
    for (std::uint64_t n = 2; n <= 1'000'000; ++n)
        by_test += deterministic_is_prime(n);
    std::vector<double> ratios;
    for (std::uint64_t x : {1000ull, 10'000ull, 100'000ull, 1'000'000ull})
        ratios.push_back(pnt_ratio(x).ratio);
    bool decreasing = true;
    for (std::size_t i = 1; i < ratios.size(); ++i)
        decreasing = decreasing && ratios[i] < ratios[i - 1];
    return verdict(pi == 78498 && by_sieve == pi && by_test == pi && decreasing,
                   fmt("pi(1e6)=%llu (sieve %llu, Miller-Rabin %llu); ratios %.4f > %.4f > %.4f > %.4f",
                       (unsigned long long)pi, (unsigned long long)by_sieve, (unsigned long long)by_test, ratios[0],
                       ratios[1], ratios[2], ratios[3]));
}

std::string g_mined_hex; // reused by the sensitivity criterion

Outcome mine_and_verify()
{
    std::string detail;
    bool ok = true;
    for (const auto& [target, limit] : {std::pair{"2.0", 60.0}, std::pair{"3.0", 600.0}}) {
        const auto start = std::chrono::steady_clock::now();
        const CliResult mined = cli({"mine", "--parent", "genesis", "--target", target, "--workers", "1", "--seed",
                                     "1", "--binding", "previous", "--payload", "acceptance"});
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const std::string hex = first_line(mined.out);
        const CliResult checked = cli({"verify", "--block", hex, "--parent", "genesis", "--binding", "previous"});
        const bool this_ok = mined.code == 0 && checked.code == 0 && secs < limit;
        ok = ok && this_ok;
        if (std::string(target) == "2.0")
            g_mined_hex = hex;
        detail += fmt("target %s: mine exit %d in %.3f s (limit %.0f s), verify exit %d; ", target, mined.code, secs,
                      limit, checked.code);
    }
    detail.resize(detail.size() - 2);
    return verdict(ok, detail);
}

Outcome sensitivity()
{
    const Block block = g_mined_hex.empty() ? mine_fixture(FixedLength::from_parts(2, 0), 1)
                                            : block_from_hex(g_mined_hex);
    const SensitivityReport r = sensitivity_sweep(block, genesis_block().header, 1000, 17);
    return verdict(r.control_valid && r.false_valid == 0 && r.pow_false_valid == 0,
                   fmt("%llu mutations: %llu false-valid (full rules), %llu false-valid (proof of work alone), "
                       "control %s",
                       (unsigned long long)r.mutations, (unsigned long long)r.false_valid,
                       (unsigned long long)r.pow_false_valid, r.control_valid ? "valid" : "INVALID"));
}

Outcome asymmetry()
{
    const AsymmetryReport r = verification_asymmetry(FixedLength::from_parts(3, 0), 7, 5);
    const bool enough = r.trials - r.skipped >= 5;
    return verdict(enough && r.verdicts_consistent && r.ratio <= 0.01,
                   fmt("%d blocks: median mine %.4f s, median verify %.6f s, ratio %.5f (limit 0.01)",
                       r.trials - r.skipped, r.median_mine, r.median_verify, r.ratio));
}

Outcome difficulty_regulation()
{
    SimConfig steady = honest_config({0.25, 0.25, 0.25, 0.25}, 1000, 21);
    steady.delay = {DelayModel::Kind::Uniform, 0, 10};
    steady.initial_target = FixedLength::from_parts(4, 0);
    const SimMetrics a = run_simulation(steady);
    const double spacing = static_cast<double>(steady.retarget.target_spacing);
    const double held = mean_interval(a, 200, std::min<std::uint64_t>(1000, a.best_chain_length));

    SimConfig doubled = steady;
    doubled.blocks = 1600;
    doubled.compute_changes = {{1000, 2.0}};
    const SimMetrics b = run_simulation(doubled);
    const double just_after = mean_interval(b, 1001, 1050);
    const double recovered = mean_interval(b, 1101, 1300);

    const bool ok = std::abs(held / spacing - 1.0) <= 0.20 && std::abs(recovered / spacing - 1.0) <= 0.20;
    return verdict(ok, fmt("mean interval blocks 200-1000: %.1f (spacing %.0f, +-20%%); after doubling at 1000: "
                           "%.1f over 1001-1050, %.1f over 1101-1300",
                           held, spacing, just_after, recovered));
}

Outcome proportional_rewards()
{
    const std::vector<double> shares{0.4, 0.3, 0.2, 0.1};
    const SimMetrics m = run_simulation(honest_config(shares, 2000, 1));
    double worst = 0.0;
    for (std::size_t i = 0; i < shares.size(); ++i)
        worst = std::max(worst, std::abs(m.revenue_share[i] - shares[i]));
    return verdict(worst <= 0.03 && m.in_best_chain[3] >= 1,
                   fmt("revenue %.3f %.3f %.3f %.3f, max deviation %.1f pp (limit 3), 10%% node won %llu blocks",
                       m.revenue_share[0], m.revenue_share[1], m.revenue_share[2], m.revenue_share[3], 100 * worst,
                       (unsigned long long)m.in_best_chain[3]));
}

Outcome selfish_mining()
{
    const auto start = std::chrono::steady_clock::now();
    const std::vector<double> alphas{0.1, 0.2, 0.3, 0.4, 0.45};
    std::vector<double> means;
    for (double alpha : alphas) {
        double sum = 0.0;
        for (std::uint64_t seed = 1; seed <= 5; ++seed)
            sum += run_simulation(selfish_config(alpha, seed)).revenue_share[0];
        means.push_back(sum / 5.0);
    }
    bool monotone = true;
    for (std::size_t i = 1; i < means.size(); ++i)
        monotone = monotone && means[i] >= means[i - 1];
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return verdict(means[3] > 0.4 && monotone && secs < 300,
                   fmt("mean selfish share at alpha .1/.2/.3/.4/.45: %.3f %.3f %.3f %.3f %.3f (alpha .4 must exceed "
                       "0.4, monotone); %.1f s",
                       means[0], means[1], means[2], means[3], means[4], secs));
}

Outcome parallel_speedup_check()
{
    const unsigned cores = std::thread::hardware_concurrency();
    const SpeedupReport r =
        parallel_speedup({FixedLength::from_parts(2, 0), FixedLength::from_parts(3, 0)}, {1, 4}, 3, 1, 2000);
    double worst = 1e9;
    for (const SpeedupEntry& e : r.entries)
        if (e.workers == 4)
            worst = std::min(worst, e.speedup);
    const std::string detail = fmt("%u hardware threads; speedup at 4 workers %.2fx (need 2.5x)", cores, worst);
    if (cores < 4)
        return {Status::Skip, detail + "; needs a machine with at least 4 cores"};
    return verdict(worst >= 2.5, detail);
}

Outcome serialization_and_determinism()
{
    Rng rng(2024);
    std::uint64_t mismatches = 0;
    for (int i = 0; i < 10'000; ++i) {
        BlockHeader h;
        h.version = static_cast<std::uint32_t>(rng.next());
        for (auto& b : h.prev_hash.bytes)
            b = static_cast<std::uint8_t>(rng.next());
        for (auto& b : h.payload_hash.bytes)
            b = static_cast<std::uint8_t>(rng.next());
        h.timestamp = rng.next();
        h.target.raw = static_cast<std::uint32_t>(rng.next());
        h.nonce = rng.next();
        h.kind = kAllChainKinds[rng.uniform_int(0, 2)];
        std::vector<std::uint8_t> cert(rng.uniform_int(0, 48));
        for (auto& b : cert)
            b = static_cast<std::uint8_t>(rng.next());
        h.certificate = Natural::from_bytes_le(cert);
        const auto bytes = encode_header(h);
        if (!(decode_header(bytes) == h) || encode_header(decode_header(bytes)) != bytes)
            ++mismatches;
    }

    const std::vector<std::string> mine{"mine", "--seed", "42", "--target", "2.5", "--payload", "determinism"};
    const bool mining_same = cli(mine).out == cli(mine).out;

    std::vector<SimConfig> sims{honest_config({0.4, 0.3, 0.2, 0.1}, 2000, 3), selfish_config(0.4, 3)};
    SimConfig delayed = honest_config({0.5, 0.5}, 1500, 4);
    delayed.delay = {DelayModel::Kind::Uniform, 5, 300};
    delayed.compute_changes = {{700, 2.0}};
    sims.push_back(delayed);
    SimConfig real = honest_config({0.5, 0.5}, 20, 5);
    real.mining = MiningModel::Real;
    real.delay = {DelayModel::Kind::Fixed, 10, 10};
    sims.push_back(real);
    int sims_same = 0;
    for (const SimConfig& c : sims)
        sims_same += sim_metrics_to_json(run_simulation(c)) == sim_metrics_to_json(run_simulation(c));

    return verdict(mismatches == 0 && mining_same && sims_same == static_cast<int>(sims.size()),
                   fmt("10000 random headers, %llu round-trip mismatches; seeded mining repeatable: %s; "
                       "%d/%zu simulations repeatable",
                       (unsigned long long)mismatches, mining_same ? "yes" : "no", sims_same, sims.size()));
}

struct Criterion {
    int id;
    const char* name;
    double time_limit; ///< seconds, 0 for none
    std::function<Outcome()> run;
};

} // namespace

int main()
{
    const std::vector<Criterion> criteria{
        {1, "worked chain examples", 1.0, worked_examples},
        {2, "oracle equivalence, origins 4..1e4", 60.0, oracle_equivalence},
        {3, "pseudoprime behaviour", 60.0, pseudoprimes},
        {4, "prime counting and x/ln x", 30.0, prime_number_theorem},
        {5, "end-to-end mine and verify", 660.0, mine_and_verify},
        {6, "prev_hash bit sensitivity", 300.0, sensitivity},
        {7, "verification asymmetry", 0.0, asymmetry},
        {8, "difficulty regulation", 0.0, difficulty_regulation},
        {9, "proportional rewards", 0.0, proportional_rewards},
        {10, "selfish mining", 300.0, selfish_mining},
        {11, "parallel speedup", 0.0, parallel_speedup_check},
        {12, "serialization and determinism", 0.0, serialization_and_determinism},
    };

    int failed = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {Status::Fail, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit > 0 && secs > c.time_limit && o.status == Status::Pass)
            o = {Status::Fail, o.detail + fmt("; took %.1f s, limit %.0f s", secs, c.time_limit)};
        const char* label = o.status == Status::Pass ? "PASS" : o.status == Status::Fail ? "FAIL" : "SKIP";
        failed += o.status == Status::Fail;
        std::printf("%s  [%2d] %s: %s (%.2f s)\n", label, c.id, c.name, o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
