#include "pouw/chain_state.hpp"

#include <algorithm>
#include <stdexcept>

namespace pouw {

ChainState::ChainState(const BlockHeader& genesis)
{
    ChainEntry entry;
    entry.header = genesis;
    entry.hash = header_hash(genesis);
    entry.height = 0;
    entry.cumulative_work = block_work(genesis);
    genesis_ = entry.hash;
    tip_ = entry.hash;
    entries_.emplace(entry.hash, std::move(entry));
}

const ChainEntry* ChainState::find(const Digest256& hash) const
{
    auto it = entries_.find(hash);
    return it == entries_.end() ? nullptr : &it->second;
}

bool ChainState::better(const ChainEntry& a, const ChainEntry& b) const
{
    if (const auto c = a.cumulative_work <=> b.cumulative_work; c != 0)
        return c > 0;
    if (a.arrival_time != b.arrival_time)
        return a.arrival_time < b.arrival_time;
    return a.hash < b.hash;
}

InsertResult ChainState::insert(const BlockHeader& header, std::uint64_t arrival_time)
{
    const Digest256 hash = header_hash(header);
    if (entries_.count(hash))
        return {InsertStatus::Duplicate, false, 0};
    const ChainEntry* parent = find(header.prev_hash);
    if (!parent)
        return {InsertStatus::MissingParent, false, 0};

    ChainEntry entry;
    entry.header = header;
    entry.hash = hash;
    entry.height = parent->height + 1;
    entry.cumulative_work = parent->cumulative_work + block_work(header);
    entry.arrival_time = arrival_time;
    const ChainEntry& stored = entries_.emplace(hash, std::move(entry)).first->second;

    InsertResult result;
    const ChainEntry& old_tip = tip_entry();
    if (better(stored, old_tip)) {
        const ChainEntry& fork = common_ancestor(old_tip.hash, stored.hash);
        result.reorg_depth = old_tip.height - fork.height;
        result.tip_changed = true;
        tip_ = stored.hash;
    }
    return result;
}

std::vector<std::uint64_t> ChainState::recent_intervals(const Digest256& hash, int window) const
{
    std::vector<std::uint64_t> out;
    const ChainEntry* cur = find(hash);
    if (!cur)
        throw std::out_of_range("recent_intervals: unknown block");
    while (cur->height > 0 && static_cast<int>(out.size()) < window) {
        const ChainEntry& parent = entries_.at(cur->header.prev_hash);
        out.push_back(cur->header.timestamp - parent.header.timestamp);
        cur = &parent;
    }
    return out;
}

FixedLength ChainState::next_target(const Digest256& parent, const RetargetConfig& config) const
{
    const ChainEntry* p = find(parent);
    if (!p)
        throw std::out_of_range("next_target: unknown parent");
    const auto intervals = recent_intervals(parent, config.window);
    return retarget(intervals, p->header.target, config);
}

std::vector<const ChainEntry*> ChainState::path_to(const Digest256& hash) const
{
    std::vector<const ChainEntry*> path;
    const ChainEntry* cur = find(hash);
    if (!cur)
        throw std::out_of_range("path_to: unknown block");
    path.reserve(cur->height + 1);
    while (true) {
        path.push_back(cur);
        if (cur->height == 0)
            break;
        cur = &entries_.at(cur->header.prev_hash);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

const ChainEntry& ChainState::common_ancestor(const Digest256& a, const Digest256& b) const
{
    const ChainEntry* x = &entries_.at(a);
    const ChainEntry* y = &entries_.at(b);
    while (x->height > y->height)
        x = &entries_.at(x->header.prev_hash);
    while (y->height > x->height)
        y = &entries_.at(y->header.prev_hash);
    while (x->hash != y->hash) {
        x = &entries_.at(x->header.prev_hash);
        y = &entries_.at(y->header.prev_hash);
    }
    return *x;
}

} // namespace pouw
