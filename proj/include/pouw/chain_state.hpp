#pragma once

#include "pouw/block.hpp"
#include "pouw/retarget.hpp"

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace pouw {

struct ChainEntry {
    BlockHeader header;
    Digest256 hash;
    std::uint64_t height = 0;
    Natural cumulative_work; ///< sum of target.raw from genesis (genesis included)
    std::uint64_t arrival_time = 0;
};

enum class InsertStatus { Added, Duplicate, MissingParent };

struct InsertResult {
    InsertStatus status = InsertStatus::Added;
    bool tip_changed = false;
    std::uint64_t reorg_depth = 0; ///< blocks disconnected from the old tip
};

/// Block work under the linear difficulty model.
inline Natural block_work(const BlockHeader& header) { return Natural(header.target.raw); }

/// A node's block tree. The tip is the entry with the greatest cumulative
/// work, ties going to the earliest arrival time and then to the
/// lexicographically smaller hash. Single writer.
class ChainState {
public:
    explicit ChainState(const BlockHeader& genesis);

    /// Inserts a header whose parent is already known.
    InsertResult insert(const BlockHeader& header, std::uint64_t arrival_time);

    const Digest256& tip() const { return tip_; }
    const ChainEntry& tip_entry() const { return entries_.at(tip_); }
    const ChainEntry& genesis() const { return entries_.at(genesis_); }
    const ChainEntry* find(const Digest256& hash) const;
    bool contains(const Digest256& hash) const { return entries_.count(hash) != 0; }
    std::size_t size() const { return entries_.size(); }

    /// True if `a` is preferred over `b` by the fork-choice order.
    bool better(const ChainEntry& a, const ChainEntry& b) const;

    /// Up to `window` timestamp deltas ending at `hash`, newest first.
    std::vector<std::uint64_t> recent_intervals(const Digest256& hash, int window) const;

    /// Target prescribed for a child of `parent`.
    FixedLength next_target(const Digest256& parent, const RetargetConfig& config) const;

    /// Entries from genesis to `hash`, inclusive.
    std::vector<const ChainEntry*> path_to(const Digest256& hash) const;

    const ChainEntry& common_ancestor(const Digest256& a, const Digest256& b) const;

private:
    std::unordered_map<Digest256, ChainEntry, DigestHasher> entries_;
    Digest256 genesis_;
    Digest256 tip_;
};

/// Best tip of the tree.
inline Digest256 fork_choice(const ChainState& state) { return state.tip(); }

} // namespace pouw
