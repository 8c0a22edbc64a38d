#include "pouw/netsim.hpp"

#include "pouw/chain_state.hpp"
#include "pouw/miner.hpp"
#include "pouw/rng.hpp"
#include "pouw/selfish.hpp"
#include "pouw/validation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace pouw {

void SimConfig::check() const
{
    if (nodes.empty())
        throw std::invalid_argument("simulation needs at least one node");
    double total = 0.0;
    for (const NodeConfig& n : nodes) {
        if (!(n.share >= 0.0 && n.share <= 1.0))
            throw std::invalid_argument("node share must be in [0, 1]");
        total += n.share;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("node shares must sum to 1");
    if (!(gamma >= 0.0 && gamma <= 1.0))
        throw std::invalid_argument("gamma must be in [0, 1]");
    if (delay.kind == DelayModel::Kind::Uniform && delay.max_ticks < delay.min_ticks)
        throw std::invalid_argument("uniform delay needs min <= max");
    if (blocks == 0)
        throw std::invalid_argument("blocks must be >= 1");
    retarget.check();
    if (initial_target < retarget.min_target)
        throw std::invalid_argument("initial target below the retarget floor");
    for (const ComputeChange& c : compute_changes) {
        if (!(c.factor > 0.0))
            throw std::invalid_argument("compute change factor must be positive");
    }
}

namespace {

struct SimBlock {
    Block block;
    Digest256 hash;
    int producer = -1;
};

enum class EventType { Deliver = 0, Find = 1 };

struct Event {
    std::uint64_t time;
    EventType type; // deliveries at a tick are handled before finds
    std::uint64_t seq;
    int node;
    SimBlockId block;
    std::uint64_t version;
};

struct EventLater {
    bool operator()(const Event& a, const Event& b) const
    {
        return std::tie(a.time, a.type, a.seq) > std::tie(b.time, b.type, b.seq);
    }
};

struct Node {
    Node(int idx, const NodeConfig& cfg, const BlockHeader& genesis, std::uint64_t seed)
        : index(idx), strategy(cfg.strategy), share(cfg.share), view(genesis), mining_tip(view.tip()),
          rng(splitmix64(seed ^ (0x1000u + static_cast<std::uint64_t>(idx))))
    {
    }

    int index;
    Strategy strategy;
    double share;
    ChainState view; ///< blocks this node has accepted (public ones only for a selfish node)
    Digest256 mining_tip;
    std::uint64_t version = 0;
    Rng rng;
    std::map<Digest256, std::vector<SimBlockId>> waiting; ///< keyed by missing parent
    SelfishState selfish;
};

class Simulation {
public:
    explicit Simulation(const SimConfig& cfg)
        : cfg_(cfg), genesis_(make_genesis(cfg)), tree_(genesis_), observer_(genesis_),
          delay_rng_(splitmix64(cfg.seed ^ 0xde1a7ull)), produced_by_(cfg.nodes.size(), 0)
    {
        nodes_.reserve(cfg.nodes.size());
        for (std::size_t i = 0; i < cfg.nodes.size(); ++i)
            nodes_.emplace_back(static_cast<int>(i), cfg.nodes[i], genesis_, cfg.seed);
    }

    SimMetrics run()
    {
        for (Node& n : nodes_)
            schedule_find(n);
        while (produced_ < cfg_.blocks && !events_.empty()) {
            const Event ev = events_.top();
            events_.pop();
            now_ = ev.time;
            Node& node = nodes_[static_cast<std::size_t>(ev.node)];
            if (ev.type == EventType::Find) {
                if (ev.version == node.version)
                    on_find(node);
            } else {
                on_deliver(node, ev.block);
            }
        }
        return metrics();
    }

private:
    static BlockHeader make_genesis(const SimConfig& cfg)
    {
        BlockHeader g = genesis_block().header;
        g.target = cfg.initial_target;
        return g;
    }

    FixedLength target_after(const Digest256& parent) const
    {
        if (cfg_.retarget_enabled)
            return tree_.next_target(parent, cfg_.retarget);
        return tree_.find(parent)->header.target;
    }

    void push(std::uint64_t time, EventType type, int node, SimBlockId block, std::uint64_t version)
    {
        events_.push({time, type, seq_++, node, block, version});
    }

    void schedule_find(Node& node)
    {
        ++node.version;
        if (node.share <= 0.0)
            return;
        const double length = target_after(node.mining_tip).to_double();
        const double difficulty = std::exp2(length - cfg_.initial_target.to_double());
        const double mean = static_cast<double>(cfg_.retarget.target_spacing) * difficulty / (node.share * power_);
        const auto delta = std::max<std::int64_t>(1, std::llround(node.rng.exponential(mean)));
        push(now_ + static_cast<std::uint64_t>(delta), EventType::Find, node.index, 0, node.version);
    }

    Block build_block(Node& node, const Digest256& parent_hash)
    {
        const ChainEntry& parent = *tree_.find(parent_hash);
        const std::uint64_t serial = blocks_.size();
        std::vector<std::uint8_t> payload(12);
        for (int i = 0; i < 4; ++i)
            payload[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(node.index >> (8 * i));
        for (int i = 0; i < 8; ++i)
            payload[static_cast<std::size_t>(4 + i)] = static_cast<std::uint8_t>(serial >> (8 * i));
        const std::uint64_t timestamp = std::max(now_, parent.header.timestamp + 1);
        const FixedLength target = target_after(parent_hash);

        if (cfg_.mining == MiningModel::Real) {
            BlockTemplate tmpl{parent.header, payload, target, timestamp, 1};
            MinerConfig mc;
            mc.multiplier_range = 1u << 12;
            mc.max_batches = 1'000'000;
            mc.seed = splitmix64(cfg_.seed * 1'000'003ull + serial);
            MineOutcome out = mine_block(tmpl, mc, BindingMode::Previous);
            if (!out.block)
                throw std::runtime_error("simulation: real miner exhausted its budget");
            return std::move(*out.block);
        }

        BlockHeader h;
        h.prev_hash = parent_hash;
        h.timestamp = timestamp;
        h.target = target;
        h.nonce = serial;
        h.kind = ChainKind::Cunningham1;
        h.certificate = Natural(serial + 1);
        return make_block(h, std::move(payload));
    }

    void on_find(Node& node)
    {
        Block block = build_block(node, node.mining_tip);
        const SimBlockId id = blocks_.size();
        const Digest256 hash = header_hash(block.header);
        tree_.insert(block.header, now_);
        blocks_.push_back({std::move(block), hash, node.index});
        ids_.emplace(hash, id);
        ++produced_;
        ++produced_by_[static_cast<std::size_t>(node.index)];

        node.mining_tip = hash;
        if (node.strategy == Strategy::Honest) {
            publish(node, id);
        } else {
            apply(node, selfish_step(node.selfish, OwnBlockFound{id}));
        }
        schedule_find(node);
        apply_compute_changes();
    }

    void apply_compute_changes()
    {
        bool changed = false;
        while (next_change_ < cfg_.compute_changes.size() &&
               produced_ >= cfg_.compute_changes[next_change_].at_block) {
            power_ *= cfg_.compute_changes[next_change_].factor;
            ++next_change_;
            changed = true;
        }
        if (changed) {
            for (Node& n : nodes_)
                schedule_find(n);
        }
    }

    void publish(Node& from, SimBlockId id)
    {
        accept(from, id);
        const SimBlock& b = blocks_[id];
        const InsertResult r = observer_.insert(b.block.header, now_);
        if (r.status == InsertStatus::MissingParent)
            throw std::logic_error("simulation: published block with unpublished parent");
        if (r.reorg_depth > 0)
            ++reorgs_[r.reorg_depth];
        for (Node& n : nodes_) {
            if (n.index == from.index)
                continue;
            push(now_ + sample_delay(), EventType::Deliver, n.index, id, 0);
        }
    }

    std::uint64_t sample_delay()
    {
        if (cfg_.delay.kind == DelayModel::Kind::Fixed)
            return cfg_.delay.min_ticks;
        return delay_rng_.uniform_int(cfg_.delay.min_ticks, cfg_.delay.max_ticks);
    }

    bool acceptable(const Node& node, const SimBlock& b) const
    {
        if (cfg_.mining != MiningModel::Real)
            return true;
        const ChainEntry* parent = node.view.find(b.block.header.prev_hash);
        const FixedLength prescribed = cfg_.retarget_enabled ? node.view.next_target(parent->hash, cfg_.retarget)
                                                             : parent->header.target;
        return validate_block(b.block, parent->header, cfg_.retarget, BindingMode::Previous, prescribed) ==
               Verdict::Valid;
    }

    // Inserts a block (and any buffered descendants) into a node's view.
    std::vector<SimBlockId> accept(Node& node, SimBlockId id)
    {
        std::vector<SimBlockId> inserted;
        const SimBlock& first = blocks_[id];
        if (node.view.contains(first.hash))
            return inserted;
        if (!node.view.contains(first.block.header.prev_hash)) {
            node.waiting[first.block.header.prev_hash].push_back(id);
            return inserted;
        }
        std::vector<SimBlockId> pending{id};
        while (!pending.empty()) {
            const SimBlockId cur = pending.back();
            pending.pop_back();
            const SimBlock& b = blocks_[cur];
            if (node.view.contains(b.hash) || !acceptable(node, b))
                continue;
            node.view.insert(b.block.header, now_);
            inserted.push_back(cur);
            if (auto it = node.waiting.find(b.hash); it != node.waiting.end()) {
                pending.insert(pending.end(), it->second.begin(), it->second.end());
                node.waiting.erase(it);
            }
        }
        return inserted;
    }

    void on_deliver(Node& node, SimBlockId id)
    {
        const std::vector<SimBlockId> inserted = accept(node, id);
        if (inserted.empty())
            return;
        if (node.strategy == Strategy::Selfish) {
            apply(node, selfish_step(node.selfish, RivalBlockArrived{node.view.tip_entry().height}));
            return;
        }

        const ChainEntry* current = node.view.find(node.mining_tip);
        const ChainEntry& best = node.view.tip_entry();
        std::optional<Digest256> next;
        if (best.cumulative_work > current->cumulative_work) {
            next = best.hash;
        } else {
            for (SimBlockId x : inserted) {
                const SimBlock& b = blocks_[x];
                const ChainEntry* e = node.view.find(b.hash);
                const bool selfish_side = cfg_.nodes[static_cast<std::size_t>(b.producer)].strategy == Strategy::Selfish;
                if (e->cumulative_work == current->cumulative_work && e->hash != current->hash && selfish_side &&
                    node.rng.bernoulli(cfg_.gamma)) {
                    next = e->hash;
                    break;
                }
            }
        }
        if (next && *next != node.mining_tip) {
            node.mining_tip = *next;
            schedule_find(node);
        }
    }

    void apply(Node& node, const SelfishAction& action)
    {
        switch (action.kind) {
        case SelfishAction::Kind::Withhold:
            return;
        case SelfishAction::Kind::Publish:
            for (SimBlockId id : action.publish)
                publish(node, id);
            return;
        case SelfishAction::Kind::Adopt:
            if (node.mining_tip != node.view.tip()) {
                node.mining_tip = node.view.tip();
                schedule_find(node);
            }
            return;
        }
    }

    SimMetrics metrics() const
    {
        SimMetrics m;
        const std::size_t n = nodes_.size();
        m.produced = produced_by_;
        m.in_best_chain.assign(n, 0);
        m.total_produced = produced_;
        const auto path = observer_.path_to(observer_.tip());
        m.best_chain_length = path.size() - 1;
        m.best_chain_timestamps.reserve(path.size());
        for (const ChainEntry* e : path) {
            m.best_chain_timestamps.push_back(e->header.timestamp);
            if (e->height == 0)
                continue;
            const int producer = blocks_[ids_.at(e->hash)].producer;
            ++m.in_best_chain[static_cast<std::size_t>(producer)];
            m.best_chain_producers.push_back(producer);
            m.best_chain_targets.push_back(e->header.target.to_double());
        }
        m.orphans = m.total_produced - m.best_chain_length;
        m.revenue_share = revenue_share(m);
        if (m.best_chain_length > 0) {
            m.mean_interval = mean_interval(m, 1, m.best_chain_length);
            double sq = 0.0;
            for (std::size_t h = 1; h < m.best_chain_timestamps.size(); ++h) {
                const double d = static_cast<double>(m.best_chain_timestamps[h] - m.best_chain_timestamps[h - 1]) -
                                 m.mean_interval;
                sq += d * d;
            }
            m.stddev_interval = std::sqrt(sq / static_cast<double>(m.best_chain_length));
        }
        m.reorg_depths = reorgs_;
        return m;
    }

    const SimConfig& cfg_;
    BlockHeader genesis_;
    ChainState tree_;     ///< every block produced, private ones included
    ChainState observer_; ///< every published block, zero delay
    std::vector<SimBlock> blocks_;
    std::unordered_map<Digest256, SimBlockId, DigestHasher> ids_;
    std::vector<Node> nodes_;
    std::priority_queue<Event, std::vector<Event>, EventLater> events_;
    std::uint64_t now_ = 0;
    std::uint64_t seq_ = 0;
    std::uint64_t produced_ = 0;
    Rng delay_rng_;
    std::size_t next_change_ = 0;
    double power_ = 1.0;
    std::vector<std::uint64_t> produced_by_;
    std::map<std::uint64_t, std::uint64_t> reorgs_;
};

} // namespace

SimMetrics run_simulation(const SimConfig& config)
{
    config.check();
    SimConfig sorted = config;
    std::stable_sort(sorted.compute_changes.begin(), sorted.compute_changes.end(),
                     [](const ComputeChange& a, const ComputeChange& b) { return a.at_block < b.at_block; });
    Simulation sim(sorted);
    return sim.run();
}

std::vector<double> revenue_share(const SimMetrics& metrics)
{
    std::vector<double> out(metrics.in_best_chain.size(), 0.0);
    const std::uint64_t total =
        std::accumulate(metrics.in_best_chain.begin(), metrics.in_best_chain.end(), std::uint64_t{0});
    if (total == 0)
        throw std::invalid_argument("revenue_share: best chain is empty");
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = static_cast<double>(metrics.in_best_chain[i]) / static_cast<double>(total);
    return out;
}

double mean_interval(const SimMetrics& metrics, std::uint64_t from_height, std::uint64_t to_height)
{
    const auto& ts = metrics.best_chain_timestamps;
    if (from_height < 1 || to_height < from_height || to_height >= ts.size())
        throw std::out_of_range("mean_interval: height range outside the best chain");
    return static_cast<double>(ts[to_height] - ts[from_height - 1]) /
           static_cast<double>(to_height - from_height + 1);
}

} // namespace pouw
