#include "cli.hpp"

#include <catch_amalgamated.hpp>

#include "json.hpp"

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <sys/wait.h>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;

    std::vector<std::string> lines() const
    {
        std::vector<std::string> v;
        std::istringstream in(out);
        for (std::string line; std::getline(in, line);)
            v.push_back(line);
        return v;
    }
    json last_record() const { return json::parse(lines().back()); }
};

Result run(std::vector<std::string> args)
{
    args.insert(args.begin(), "pouw");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    Result r;
    r.code = pouw::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string config(const char* name) { return std::string(POUW_CONFIG_DIR) + "/" + name; }

fs::path scratch(const char* name)
{
    const fs::path p = fs::temp_directory_path() / name;
    fs::remove(p);
    return p;
}

} // namespace

TEST_CASE("mine on genesis, then verify the result")
{
    const Result mined = run({"mine", "--parent", "genesis", "--target", "2.0", "--seed", "3", "--payload", "hi"});
    REQUIRE(mined.code == 0);
    const auto lines = mined.lines();
    REQUIRE(lines.size() == 2);
    CHECK(mined.last_record()["status"] == "FOUND");

    const Result ok = run({"verify", "--block", lines[0]});
    CHECK(ok.code == 0);
    CHECK(ok.last_record()["verdict"] == "VALID");

    // Hex digit 9 is the low nibble of the first prev_hash byte.
    std::string bad = lines[0];
    bad[9] = "0123456789abcdef"[std::stoi(bad.substr(9, 1), nullptr, 16) ^ 1];
    const Result rejected = run({"verify", "--block", bad});
    CHECK(rejected.code == 1);
    CHECK(rejected.last_record()["verdict"] != "VALID");

    CHECK(run({"verify", "--block", lines[0].substr(0, 40)}).code == 2);
}

TEST_CASE("mining output is reproducible")
{
    const std::vector<std::string> args{"mine", "--seed", "12", "--payload", "same", "--target", "2.5"};
    const Result a = run(args), b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("mine error paths")
{
    CHECK(run({"mine", "--parent", "/no/such/file"}).code == 2);
    CHECK(run({"mine", "--budget", "0"}).code == 3);
    CHECK(run({"mine", "--binding", "sideways"}).code == 2);
    CHECK(run({"mine", "--workers", "0"}).code == 2);
    CHECK(run({"mine", "--target", "300"}).code == 2);
}

TEST_CASE("chain files: mine twice, then replay")
{
    const fs::path chain = scratch("pouw_cli_chain.txt");
    REQUIRE(run({"mine", "--chain", chain.string(), "--seed", "1"}).code == 0);
    REQUIRE(run({"mine", "--chain", chain.string(), "--seed", "2"}).code == 0);
    const Result replay = run({"replay", "--chain", chain.string()});
    CHECK(replay.code == 0);
    CHECK(replay.last_record()["height"] == 2);

    // Parent given as the chain file: its last block.
    const Result next = run({"mine", "--parent", chain.string(), "--seed", "3"});
    CHECK(next.code == 0);
    fs::remove(chain);
}

TEST_CASE("replay rejects a tampered chain")
{
    const fs::path chain = scratch("pouw_cli_bad_chain.txt");
    REQUIRE(run({"mine", "--chain", chain.string(), "--seed", "1"}).code == 0);
    // A block mined off-chain at a different target breaks the prescribed-target rule.
    const Result stray = run({"mine", "--parent", chain.string(), "--seed", "5", "--target", "2.5"});
    REQUIRE(stray.code == 0);
    std::FILE* f = std::fopen(chain.string().c_str(), "a");
    std::fputs((stray.lines()[0] + "\n").c_str(), f);
    std::fclose(f);
    const Result replay = run({"replay", "--chain", chain.string()});
    CHECK(replay.code == 1);
    CHECK(replay.last_record()["verdict"] == "TARGET_MISMATCH");
    fs::remove(chain);
}

TEST_CASE("simulate sample configs")
{
    const Result honest = run({"simulate", "--config", config("honest-4-node.json")});
    REQUIRE(honest.code == 0);
    for (double share : honest.last_record()["revenue_share"])
        CHECK(share == Catch::Approx(0.25).margin(0.03));

    const Result selfish = run({"simulate", "--config", config("selfish-0.4.json"), "--seed", "2"});
    REQUIRE(selfish.code == 0);
    CHECK(selfish.last_record()["revenue_share"][0].get<double>() > 0.4);

    CHECK(run({"simulate", "--config", "/no/such/config.json"}).code == 2);
    CHECK(run({"simulate"}).code == 2);
}

TEST_CASE("simulate writes to a file and repeats itself")
{
    const fs::path out = scratch("pouw_cli_metrics.json");
    const Result a = run({"simulate", "--config", config("compute-doubling.json"), "--out", out.string()});
    REQUIRE(a.code == 0);
    CHECK(a.out.empty());
    CHECK(fs::file_size(out) > 0);
    const Result b = run({"simulate", "--config", config("compute-doubling.json")});
    const Result c = run({"simulate", "--config", config("compute-doubling.json")});
    CHECK(b.out == c.out);
    fs::remove(out);
}

TEST_CASE("analyze subcommands")
{
    const Result pnt = run({"analyze", "pnt", "--x", "1000000"});
    REQUIRE(pnt.code == 0);
    CHECK(pnt.last_record()["pi_x"] == 78498);

    const Result sens = run({"analyze", "sensitivity", "--mutations", "1000"});
    REQUIRE(sens.code == 0);
    CHECK(sens.last_record()["false_valid"] == 0);

    const Result dens = run({"analyze", "density", "--bits", "32", "--samples", "2000"});
    CHECK(dens.code == 0);

    CHECK(run({"analyze", "nothing"}).code == 2);
    CHECK(run({"analyze"}).code == 2);
    CHECK(run({"analyze", "pnt", "--x", "5"}).code == 2);
    CHECK(run({"analyze", "density", "--kind", "CC9"}).code == 2);
}

TEST_CASE("help exits cleanly, bad usage does not")
{
    CHECK(run({"--help"}).code == 0);
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
}

TEST_CASE("the installed binary keeps records and diagnostics apart")
{
    const std::string cmd = std::string(POUW_BINARY) + " mine --seed 4 2>/dev/null";
    std::FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[512];
    while (std::fgets(buf, sizeof buf, p))
        out += buf;
    const int status = pclose(p);
    CHECK(WEXITSTATUS(status) == 0);
    std::istringstream in(out);
    std::string hex, record;
    std::getline(in, hex);
    std::getline(in, record);
    CHECK(json::parse(record)["record"] == "mine");

    const int budget = std::system((std::string(POUW_BINARY) + " mine --budget 0 >/dev/null 2>&1").c_str());
    CHECK(WEXITSTATUS(budget) == 3);
}
