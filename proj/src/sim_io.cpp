#include "pouw/netsim.hpp"

#include "json.hpp"

#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>

namespace pouw {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const char* where)
{
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items()) {
        if (!keys.count(key))
            throw std::invalid_argument(std::string(where) + ": unknown key '" + key + "'");
    }
}

std::string lower(std::string s)
{
    for (char& c : s)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

SimConfig parse(const json& j)
{
    if (!j.is_object())
        throw std::invalid_argument("config: expected a JSON object");
    reject_unknown(j,
                   {"nodes", "delay", "gamma", "blocks", "target_spacing", "retarget", "initial_target", "seed",
                    "mining", "compute_changes"},
                   "config");
    SimConfig c;
    for (const json& n : j.at("nodes")) {
        reject_unknown(n, {"share", "strategy"}, "node");
        NodeConfig node;
        node.share = n.at("share").get<double>();
        const std::string strategy = lower(n.value("strategy", std::string("honest")));
        if (strategy == "honest")
            node.strategy = Strategy::Honest;
        else if (strategy == "selfish")
            node.strategy = Strategy::Selfish;
        else
            throw std::invalid_argument("node: unknown strategy '" + strategy + "'");
        c.nodes.push_back(node);
    }
    if (j.contains("delay")) {
        const json& d = j.at("delay");
        reject_unknown(d, {"kind", "ticks", "min", "max"}, "delay");
        const std::string kind = lower(d.value("kind", std::string("fixed")));
        if (kind == "fixed") {
            c.delay.kind = DelayModel::Kind::Fixed;
            c.delay.min_ticks = c.delay.max_ticks = d.value("ticks", std::uint64_t{0});
        } else if (kind == "uniform") {
            c.delay.kind = DelayModel::Kind::Uniform;
            c.delay.min_ticks = d.at("min").get<std::uint64_t>();
            c.delay.max_ticks = d.at("max").get<std::uint64_t>();
        } else {
            throw std::invalid_argument("delay: unknown kind '" + kind + "'");
        }
    }
    c.gamma = j.value("gamma", 0.0);
    c.blocks = j.value("blocks", std::uint64_t{1000});
    c.retarget.target_spacing = j.value("target_spacing", std::uint64_t{600});
    if (j.contains("retarget")) {
        const json& r = j.at("retarget");
        reject_unknown(r, {"enabled", "window", "max_step", "min_target"}, "retarget");
        c.retarget_enabled = r.value("enabled", true);
        c.retarget.window = r.value("window", c.retarget.window);
        if (r.contains("max_step"))
            c.retarget.max_step = FixedLength::from_double(r.at("max_step").get<double>());
        if (r.contains("min_target"))
            c.retarget.min_target = FixedLength::from_double(r.at("min_target").get<double>());
    }
    if (j.contains("initial_target"))
        c.initial_target = FixedLength::from_double(j.at("initial_target").get<double>());
    c.seed = j.value("seed", std::uint64_t{1});
    const std::string mining = lower(j.value("mining", std::string("abstract")));
    if (mining == "abstract")
        c.mining = MiningModel::Abstract;
    else if (mining == "real")
        c.mining = MiningModel::Real;
    else
        throw std::invalid_argument("config: unknown mining model '" + mining + "'");
    if (j.contains("compute_changes")) {
        for (const json& ch : j.at("compute_changes")) {
            reject_unknown(ch, {"at_block", "factor"}, "compute_changes");
            c.compute_changes.push_back({ch.at("at_block").get<std::uint64_t>(), ch.at("factor").get<double>()});
        }
    }
    c.check();
    return c;
}

} // namespace

SimConfig sim_config_from_json(const std::string& text)
{
    try {
        return parse(json::parse(text));
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
}

std::string sim_config_to_json(const SimConfig& c)
{
    json j;
    for (const NodeConfig& n : c.nodes)
        j["nodes"].push_back({{"share", n.share}, {"strategy", n.strategy == Strategy::Honest ? "honest" : "selfish"}});
    if (c.delay.kind == DelayModel::Kind::Fixed)
        j["delay"] = {{"kind", "fixed"}, {"ticks", c.delay.min_ticks}};
    else
        j["delay"] = {{"kind", "uniform"}, {"min", c.delay.min_ticks}, {"max", c.delay.max_ticks}};
    j["gamma"] = c.gamma;
    j["blocks"] = c.blocks;
    j["target_spacing"] = c.retarget.target_spacing;
    j["retarget"] = {{"enabled", c.retarget_enabled},
                     {"window", c.retarget.window},
                     {"max_step", c.retarget.max_step.to_double()},
                     {"min_target", c.retarget.min_target.to_double()}};
    j["initial_target"] = c.initial_target.to_double();
    j["seed"] = c.seed;
    j["mining"] = c.mining == MiningModel::Abstract ? "abstract" : "real";
    j["compute_changes"] = json::array();
    for (const ComputeChange& ch : c.compute_changes)
        j["compute_changes"].push_back({{"at_block", ch.at_block}, {"factor", ch.factor}});
    return j.dump();
}

std::string sim_metrics_to_json(const SimMetrics& m)
{
    json j;
    j["record"] = "sim_metrics";
    j["produced"] = m.produced;
    j["in_best_chain"] = m.in_best_chain;
    j["revenue_share"] = m.revenue_share;
    j["total_produced"] = m.total_produced;
    j["best_chain_length"] = m.best_chain_length;
    j["orphans"] = m.orphans;
    j["mean_interval"] = m.mean_interval;
    j["stddev_interval"] = m.stddev_interval;
    json reorgs = json::object();
    for (const auto& [depth, count] : m.reorg_depths)
        reorgs[std::to_string(depth)] = count;
    j["reorg_depths"] = reorgs;
    return j.dump();
}

std::string sim_metrics_table(const SimMetrics& m, const SimConfig& c)
{
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof line, "%-6s %-8s %8s %10s %10s %10s\n", "node", "strategy", "share", "produced",
                  "in_chain", "revenue");
    out << line;
    for (std::size_t i = 0; i < m.produced.size(); ++i) {
        std::snprintf(line, sizeof line, "%-6zu %-8s %8.4f %10llu %10llu %10.4f\n", i,
                      c.nodes[i].strategy == Strategy::Honest ? "honest" : "selfish", c.nodes[i].share,
                      static_cast<unsigned long long>(m.produced[i]),
                      static_cast<unsigned long long>(m.in_best_chain[i]), m.revenue_share[i]);
        out << line;
    }
    std::snprintf(line, sizeof line, "blocks produced %llu, best chain %llu, orphans %llu\n",
                  static_cast<unsigned long long>(m.total_produced),
                  static_cast<unsigned long long>(m.best_chain_length), static_cast<unsigned long long>(m.orphans));
    out << line;
    std::snprintf(line, sizeof line, "interval mean %.1f ticks, stddev %.1f (spacing %llu)\n", m.mean_interval,
                  m.stddev_interval, static_cast<unsigned long long>(c.retarget.target_spacing));
    out << line;
    for (const auto& [depth, count] : m.reorg_depths) {
        std::snprintf(line, sizeof line, "reorg depth %llu: %llu\n", static_cast<unsigned long long>(depth),
                      static_cast<unsigned long long>(count));
        out << line;
    }
    return out.str();
}

} // namespace pouw
