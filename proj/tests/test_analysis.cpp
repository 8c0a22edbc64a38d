#include "pouw/analysis.hpp"
#include "pouw/primality.hpp"

#include <catch_amalgamated.hpp>

#include "json.hpp"

using namespace pouw;
using nlohmann::json;

TEST_CASE("prime counting known values")
{
    CHECK(prime_counting(2) == 1);
    CHECK(prime_counting(3) == 2);
    CHECK(prime_counting(10) == 4);
    CHECK(prime_counting(100) == 25);
    CHECK(prime_counting(10'000) == 1229);
    CHECK(prime_counting(100'000) == 9592);
    CHECK(prime_counting(1'000'000) == 78498);
    CHECK_THROWS_AS(prime_counting(1), std::invalid_argument);
}

TEST_CASE("segmented count agrees with the plain sieve across segment edges")
{
    const auto primes = sieve_small_primes(300'000);
    for (std::uint64_t x : {131071ull, 131072ull, 131073ull, 131074ull, 262143ull, 262144ull, 299999ull, 65535ull,
                            65536ull, 65537ull}) {
        const auto expected = std::upper_bound(primes.begin(), primes.end(), x) - primes.begin();
        CHECK(prime_counting(x) == static_cast<std::uint64_t>(expected));
    }
}

TEST_CASE("pi(x) ln x / x falls toward one")
{
    double last = 10.0;
    for (std::uint64_t x : {1000ull, 10'000ull, 100'000ull, 1'000'000ull}) {
        const DensityReport r = pnt_ratio(x);
        CHECK(r.ratio > 1.0);
        CHECK(r.ratio < last);
        last = r.ratio;
    }
    CHECK_THROWS(pnt_ratio(9));
}

TEST_CASE("chain frequency tracks the prime density")
{
    const FrequencyReport a = chain_frequency(64, 1, 20'000, 3);
    const FrequencyReport b = chain_frequency(64, 1, 20'000, 3);
    CHECK(a.hits == b.hits);
    CHECK(a.frequency == Catch::Approx(a.pnt_expectation).epsilon(0.15));
    const FrequencyReport deeper = chain_frequency(64, 2, 20'000, 3);
    CHECK(deeper.hits < a.hits);
    CHECK_THROWS(chain_frequency(8, 1, 20'000, 3));
    CHECK_THROWS(chain_frequency(64, 4, 20'000, 3));
    CHECK_THROWS(chain_frequency(64, 1, 10, 3));
}

TEST_CASE("sensitivity sweep on a mined fixture")
{
    const Block block = mine_fixture(FixedLength::from_parts(3, 0), 4);
    const SensitivityReport r = sensitivity_sweep(block, genesis_block().header, 200, 9);
    CHECK(r.control_valid);
    CHECK(r.false_valid == 0);
    std::uint64_t total = 0;
    for (const auto& [reason, count] : r.reasons)
        total += count;
    CHECK(total == 200);
    CHECK(r.reasons.count("VALID") == 0);
}

TEST_CASE("asymmetry report at the floor target")
{
    const AsymmetryReport r = verification_asymmetry(FixedLength::from_parts(2, 0), 5, 1);
    CHECK(r.verdicts_consistent);
    CHECK(r.mine_seconds.size() == 5);
    CHECK(r.median_verify < r.median_mine);
    CHECK_THROWS(verification_asymmetry(FixedLength::from_parts(2, 0), 4, 1));
}

TEST_CASE("speedup report shape")
{
    const SpeedupReport r = parallel_speedup({FixedLength::from_parts(2, 0)}, {1, 2}, 1, 1, 200);
    REQUIRE(r.entries.size() == 2);
    CHECK(r.entries[0].speedup == 1.0);
    CHECK(r.entries[0].candidates == 200);
    CHECK(r.entries[1].workers == 2);
    CHECK_THROWS(parallel_speedup({FixedLength::from_parts(2, 0)}, {2, 4}, 1, 1, 200));
    const auto records = to_records(r);
    REQUIRE(records.size() == 2);
    CHECK(json::parse(records[1])["workers"] == 2);
}

TEST_CASE("records are single-line JSON")
{
    const std::string rec = to_record(pnt_ratio(1000));
    CHECK(rec.find('\n') == std::string::npos);
    const json j = json::parse(rec);
    CHECK(j["record"] == "pnt");
    CHECK(j["pi_x"] == 168);
}
