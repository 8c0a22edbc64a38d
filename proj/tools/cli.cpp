#include "cli.hpp"

#include "pouw/analysis.hpp"
#include "pouw/chain_state.hpp"
#include "pouw/miner.hpp"
#include "pouw/netsim.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace pouw::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw UsageError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool looks_like_hex(std::string_view s)
{
    if (s.empty())
        return false;
    for (char c : s)
        if (!std::isxdigit(static_cast<unsigned char>(c)) && !std::isspace(static_cast<unsigned char>(c)))
            return false;
    return true;
}

/// "genesis", a file holding one block or a whole chain (last block wins),
/// or a hex string.
Block read_block_arg(const std::string& arg, const char* what)
{
    if (arg == "genesis")
        return genesis_block();
    std::error_code ec;
    if (fs::is_regular_file(arg, ec)) {
        const std::string text = read_file(arg);
        std::istringstream lines(text);
        std::string line, last;
        while (std::getline(lines, line))
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                last = line;
        if (last.empty())
            throw DecodeError(std::string(what) + ": empty file");
        return block_from_hex(last);
    }
    if (looks_like_hex(arg))
        return block_from_hex(arg);
    throw UsageError(std::string(what) + ": '" + arg + "' is neither a readable file nor block hex");
}

BindingMode parse_binding(const std::string& name)
{
    if (auto mode = binding_mode_from_string(name))
        return *mode;
    throw UsageError("unknown binding mode '" + name + "'");
}

FixedLength parse_target(double value)
{
    if (!(value >= 0.0 && value < 256.0))
        throw UsageError("target must be in [0, 256)");
    return FixedLength::from_double(value);
}

std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

json block_summary(const Block& block, BindingMode mode)
{
    const BlockHeader& h = block.header;
    json j{{"hash", header_hash(h).hex()},
           {"prev_hash", h.prev_hash.hex()},
           {"timestamp", h.timestamp},
           {"target", to_string(h.target)},
           {"kind", std::string(to_string(h.kind))},
           {"certificate", h.certificate.to_decimal()}};
    if (!h.certificate.is_zero() && !binding_base(h, mode).is_zero())
        j["length"] = to_string(evaluate_chain(h.kind, origin_of(h, mode)));
    return j;
}

// ---- mine ---------------------------------------------------------------

struct MineArgs {
    std::string parent = "genesis";
    std::string chain;
    std::string payload = "";
    std::string payload_file;
    double target = -1.0;
    int workers = 1;
    std::uint64_t seed = 0;
    std::string binding = "previous";
    std::uint64_t budget = MinerConfig{}.max_batches;
    std::uint64_t range = MinerConfig{}.multiplier_range;
    std::int64_t timestamp = -1;
    std::string out;
};

int cmd_mine(const MineArgs& a, std::ostream& out, std::ostream& err)
{
    const BindingMode mode = parse_binding(a.binding);
    const RetargetConfig retarget;
    BlockTemplate tmpl;
    std::optional<FixedLength> prescribed;
    if (!a.chain.empty()) {
        std::vector<Block> chain;
        if (fs::exists(a.chain))
            chain = load_chain_file(a.chain);
        if (chain.empty()) {
            chain.push_back(genesis_block());
            append_chain_file(a.chain, genesis_block());
        }
        ChainState state(chain.front().header);
        for (std::size_t i = 1; i < chain.size(); ++i)
            state.insert(chain[i].header, i);
        tmpl.parent = state.tip_entry().header;
        prescribed = state.next_target(state.tip(), retarget);
    } else {
        tmpl.parent = read_block_arg(a.parent, "parent").header;
    }
    if (!a.payload_file.empty())
        tmpl.payload = bytes_of(read_file(a.payload_file));
    else
        tmpl.payload = bytes_of(a.payload);
    tmpl.target = a.target >= 0.0 ? parse_target(a.target) : prescribed.value_or(FixedLength::from_parts(2, 0));
    tmpl.timestamp = a.timestamp >= 0 ? static_cast<std::uint64_t>(a.timestamp)
                                      : tmpl.parent.timestamp + retarget.target_spacing;

    MinerConfig config;
    config.worker_count = a.workers;
    config.seed = a.seed;
    config.max_batches = a.budget;
    config.multiplier_range = a.range;
    check_miner_config(config);

    const auto start = std::chrono::steady_clock::now();
    const MineOutcome outcome = mine_block(tmpl, config, mode);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    err << "mined in " << seconds << " s, " << outcome.stats.batches << " batches, " << outcome.stats.candidates
        << " candidates\n";

    json record{{"record", "mine"},
                {"batches", outcome.stats.batches},
                {"sieved", outcome.stats.sieved},
                {"candidates", outcome.stats.candidates}};
    if (!outcome.block) {
        record["status"] = "BUDGET_EXHAUSTED";
        out << record.dump() << '\n';
        return kBudgetExhausted;
    }
    const Block& block = *outcome.block;
    record["status"] = "FOUND";
    record["block"] = block_summary(block, mode);
    out << block_to_hex(block) << '\n' << record.dump() << '\n';
    if (!a.out.empty()) {
        std::ofstream f(a.out, std::ios::trunc);
        if (!f)
            throw UsageError("cannot write " + a.out);
        f << block_to_hex(block) << '\n';
    }
    if (!a.chain.empty())
        append_chain_file(a.chain, block);
    return kSuccess;
}

// ---- verify -------------------------------------------------------------

struct VerifyArgs {
    std::string block;
    std::string parent = "genesis";
    std::string binding = "previous";
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream&)
{
    const BindingMode mode = parse_binding(a.binding);
    const Block block = read_block_arg(a.block, "block");
    const Block parent = read_block_arg(a.parent, "parent");
    const Verdict v = validate_block(block, parent.header, RetargetConfig{}, mode);
    json record{{"record", "verify"}, {"verdict", std::string(reason_code(v))}, {"block", block_summary(block, mode)}};
    out << record.dump() << '\n';
    return v == Verdict::Valid ? kSuccess : kInvalid;
}

// ---- replay -------------------------------------------------------------

struct ReplayArgs {
    std::string chain;
    std::string binding = "previous";
};

int cmd_replay(const ReplayArgs& a, std::ostream& out, std::ostream&)
{
    const BindingMode mode = parse_binding(a.binding);
    if (!fs::is_regular_file(a.chain))
        throw UsageError("cannot read " + a.chain);
    const std::vector<Block> chain = load_chain_file(a.chain);
    if (chain.empty() || chain.front() != genesis_block())
        throw DecodeError("chain file must start with the genesis block");
    const RetargetConfig config;
    ChainState state(chain.front().header);
    for (std::size_t i = 1; i < chain.size(); ++i) {
        const Digest256 parent_hash = chain[i].header.prev_hash;
        const ChainEntry* parent = state.find(parent_hash);
        Verdict v = Verdict::PrevHashMismatch;
        if (parent)
            v = validate_block(chain[i], parent->header, config, mode, state.next_target(parent_hash, config));
        if (v != Verdict::Valid) {
            out << json{{"record", "replay"}, {"height", i}, {"verdict", std::string(reason_code(v))}}.dump() << '\n';
            return kInvalid;
        }
        state.insert(chain[i].header, i);
    }
    const ChainEntry& tip = state.tip_entry();
    out << json{{"record", "replay"},
                {"verdict", "VALID"},
                {"blocks", chain.size()},
                {"height", tip.height},
                {"tip", tip.hash.hex()},
                {"cumulative_work", tip.cumulative_work.to_decimal()},
                {"next_target", to_string(state.next_target(tip.hash, config))}}
               .dump()
        << '\n';
    return kSuccess;
}

// ---- simulate -----------------------------------------------------------

struct SimulateArgs {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> blocks;
    std::string out;
    bool pretty = false;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err)
{
    SimConfig config = sim_config_from_json(read_file(a.config));
    if (a.seed)
        config.seed = *a.seed;
    if (a.blocks)
        config.blocks = *a.blocks;
    config.check();
    const SimMetrics metrics = run_simulation(config);
    const std::string record = sim_metrics_to_json(metrics);
    if (!a.out.empty()) {
        std::ofstream f(a.out, std::ios::trunc);
        if (!f)
            throw UsageError("cannot write " + a.out);
        f << record << '\n';
        err << "metrics written to " << a.out << '\n';
    }
    if (a.pretty)
        out << sim_metrics_table(metrics, config);
    else if (a.out.empty())
        out << record << '\n';
    return kSuccess;
}

// ---- genesis ------------------------------------------------------------

int cmd_genesis(std::ostream& out)
{
    const Block& g = genesis_block();
    out << block_to_hex(g) << '\n'
        << json{{"record", "genesis"}, {"block", block_summary(g, BindingMode::Previous)}}.dump() << '\n';
    return kSuccess;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Prime-chain proof-of-work toolkit"};
    app.require_subcommand(1);
    bool pretty = false;

    MineArgs mine;
    auto* mine_cmd = app.add_subcommand("mine", "Mine a block on top of a parent");
    mine_cmd->add_option("--parent", mine.parent, "genesis, a block or chain file, or block hex");
    mine_cmd->add_option("--chain", mine.chain, "Chain file: mine on its tip and append the result");
    mine_cmd->add_option("--payload", mine.payload, "Payload text");
    mine_cmd->add_option("--payload-file", mine.payload_file, "Payload file")->check(CLI::ExistingFile);
    mine_cmd->add_option("--target", mine.target, "Target chain length, e.g. 2.5");
    mine_cmd->add_option("--workers", mine.workers, "Worker threads")->check(CLI::PositiveNumber);
    mine_cmd->add_option("--seed", mine.seed, "Nonce and multiplier seed");
    mine_cmd->add_option("--binding", mine.binding, "previous or header");
    mine_cmd->add_option("--budget", mine.budget, "Maximum sieve batches, 0 gives up at once");
    mine_cmd->add_option("--range", mine.range, "Multipliers per batch")->check(CLI::PositiveNumber);
    mine_cmd->add_option("--timestamp", mine.timestamp, "Block timestamp (default parent + 600)");
    mine_cmd->add_option("--out", mine.out, "Also write the block hex to this file");

    VerifyArgs verify;
    auto* verify_cmd = app.add_subcommand("verify", "Validate a block against its parent");
    verify_cmd->add_option("--block", verify.block, "Block file or hex")->required();
    verify_cmd->add_option("--parent", verify.parent, "genesis, a block or chain file, or block hex");
    verify_cmd->add_option("--binding", verify.binding, "previous or header");

    ReplayArgs replay;
    auto* replay_cmd = app.add_subcommand("replay", "Validate a whole chain file with retargeting");
    replay_cmd->add_option("--chain", replay.chain, "Chain file")->required();
    replay_cmd->add_option("--binding", replay.binding, "previous or header");

    SimulateArgs simulate;
    auto* sim_cmd = app.add_subcommand("simulate", "Run a network simulation");
    sim_cmd->add_option("--config", simulate.config, "JSON config file")->required();
    sim_cmd->add_option("--seed", simulate.seed, "Override the config seed");
    sim_cmd->add_option("--blocks", simulate.blocks, "Override the block count");
    sim_cmd->add_option("--out", simulate.out, "Write the metrics record here");

    auto* genesis_cmd = app.add_subcommand("genesis", "Print the genesis block");

    auto* analyze_cmd = app.add_subcommand("analyze", "Measurements");
    analyze_cmd->require_subcommand(1);

    std::uint64_t pnt_x = 1'000'000;
    std::vector<std::uint64_t> pnt_xs;
    auto* pnt_cmd = analyze_cmd->add_subcommand("pnt", "Prime counting against x / ln x");
    pnt_cmd->add_option("--x", pnt_xs, "One or more bounds (default 1e6)")->check(CLI::Range(10ull, 100'000'000ull));

    int density_bits = 64, density_depth = 1;
    std::uint64_t density_samples = 10'000, density_seed = 1;
    std::string density_kind = "CC1";
    auto* density_cmd = analyze_cmd->add_subcommand("density", "Chain frequency among random origins");
    density_cmd->add_option("--bits", density_bits, "Origin size in bits")->check(CLI::Range(16, 256));
    density_cmd->add_option("--depth", density_depth, "Required integer length")->check(CLI::Range(1, 3));
    density_cmd->add_option("--samples", density_samples, "Origins to test")->check(CLI::Range(1000ull, ~0ull));
    density_cmd->add_option("--seed", density_seed);
    density_cmd->add_option("--kind", density_kind, "CC1, CC2 or BITWIN");

    double asym_target = 3.0;
    int asym_trials = 5;
    std::uint64_t asym_seed = 1;
    auto* asym_cmd = analyze_cmd->add_subcommand("asymmetry", "Mining versus verification time");
    asym_cmd->add_option("--target", asym_target);
    asym_cmd->add_option("--trials", asym_trials)->check(CLI::Range(5, 1000));
    asym_cmd->add_option("--seed", asym_seed);

    std::vector<double> speed_targets{2.0, 3.0};
    std::vector<int> speed_workers{1, 2, 4};
    int speed_trials = 3;
    std::uint64_t speed_seed = 1, speed_candidates = 2000;
    auto* speed_cmd = analyze_cmd->add_subcommand("speedup", "Candidate evaluation throughput per worker count");
    speed_cmd->add_option("--targets", speed_targets)->delimiter(',');
    speed_cmd->add_option("--workers", speed_workers)->delimiter(',');
    speed_cmd->add_option("--trials", speed_trials)->check(CLI::PositiveNumber);
    speed_cmd->add_option("--seed", speed_seed);
    speed_cmd->add_option("--candidates", speed_candidates)->check(CLI::PositiveNumber);

    std::uint64_t sens_mutations = 1000, sens_seed = 1;
    double sens_target = 3.0;
    std::string sens_block, sens_parent = "genesis", sens_binding = "previous";
    auto* sens_cmd = analyze_cmd->add_subcommand("sensitivity", "Single-bit prev_hash mutations");
    sens_cmd->add_option("--mutations", sens_mutations)->check(CLI::PositiveNumber);
    sens_cmd->add_option("--seed", sens_seed);
    sens_cmd->add_option("--target", sens_target, "Fixture target when no block is given");
    sens_cmd->add_option("--block", sens_block, "Block file or hex (default: mine a fixture)");
    sens_cmd->add_option("--parent", sens_parent);
    sens_cmd->add_option("--binding", sens_binding);

    for (CLI::App* sub : {mine_cmd, verify_cmd, replay_cmd, sim_cmd, genesis_cmd, pnt_cmd, density_cmd, asym_cmd,
                          speed_cmd, sens_cmd})
        sub->add_flag("--pretty", pretty, "Human-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsage;
    }
    simulate.pretty = pretty;

    try {
        if (*mine_cmd)
            return cmd_mine(mine, out, err);
        if (*verify_cmd)
            return cmd_verify(verify, out, err);
        if (*replay_cmd)
            return cmd_replay(replay, out, err);
        if (*sim_cmd)
            return cmd_simulate(simulate, out, err);
        if (*genesis_cmd)
            return cmd_genesis(out);

        if (*pnt_cmd) {
            if (pnt_xs.empty())
                pnt_xs.push_back(pnt_x);
            for (std::uint64_t x : pnt_xs) {
                const DensityReport r = pnt_ratio(x);
                if (pretty)
                    out << "x=" << r.x << " pi(x)=" << r.pi_x << " x/ln x=" << r.pnt_estimate << " ratio=" << r.ratio
                        << '\n';
                else
                    out << to_record(r) << '\n';
            }
            return kSuccess;
        }
        if (*density_cmd) {
            const auto kind = chain_kind_from_string(density_kind);
            if (!kind)
                throw UsageError("unknown chain kind '" + density_kind + "'");
            const FrequencyReport r = chain_frequency(density_bits, density_depth, density_samples, density_seed, *kind);
            out << to_record(r) << '\n';
            return kSuccess;
        }
        if (*asym_cmd) {
            const AsymmetryReport r = verification_asymmetry(parse_target(asym_target), asym_trials, asym_seed);
            out << to_record(r) << '\n';
            return kSuccess;
        }
        if (*speed_cmd) {
            std::vector<FixedLength> targets;
            for (double t : speed_targets)
                targets.push_back(parse_target(t));
            const SpeedupReport r = parallel_speedup(targets, speed_workers, speed_trials, speed_seed, speed_candidates);
            for (const std::string& line : to_records(r))
                out << line << '\n';
            return kSuccess;
        }
        if (*sens_cmd) {
            const BindingMode mode = parse_binding(sens_binding);
            Block block;
            BlockHeader parent = genesis_block().header;
            if (sens_block.empty()) {
                block = mine_fixture(parse_target(sens_target), sens_seed);
            } else {
                block = read_block_arg(sens_block, "block");
                parent = read_block_arg(sens_parent, "parent").header;
            }
            const SensitivityReport r = sensitivity_sweep(block, parent, sens_mutations, sens_seed, {}, mode);
            out << to_record(r) << '\n';
            return r.control_valid ? kSuccess : kInvalid;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const DecodeError& e) {
        err << "decode error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}

} // namespace pouw::cli
