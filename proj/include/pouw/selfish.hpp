#pragma once

#include <cstdint>
#include <deque>
#include <variant>
#include <vector>

namespace pouw {

using SimBlockId = std::uint64_t;

/// Withholding miner bookkeeping. Heights are absolute block heights; the
/// lead is private_height - public_height.
struct SelfishState {
    std::deque<SimBlockId> unpublished; ///< private blocks, oldest first
    std::uint64_t private_height = 0;
    std::uint64_t public_height = 0;
    bool racing = false; ///< a 1-1 fork race with our published block is open

    std::int64_t lead() const
    {
        return static_cast<std::int64_t>(private_height) - static_cast<std::int64_t>(public_height);
    }
};

struct OwnBlockFound {
    SimBlockId block;
};
/// A rival block was accepted; `public_height` is the public best height now.
struct RivalBlockArrived {
    std::uint64_t public_height;
};
struct Tick {};

using SelfishEvent = std::variant<OwnBlockFound, RivalBlockArrived, Tick>;

struct SelfishAction {
    enum class Kind {
        Withhold, ///< keep mining on the private tip
        Publish,  ///< broadcast `publish` in order, keep private tip
        Adopt,    ///< abandon the private branch and mine on the public tip
    };
    Kind kind = Kind::Withhold;
    std::vector<SimBlockId> publish;
};

/// Lead-based selfish-mining state machine. Own finds extend the secret
/// branch (and settle an open race); a rival find is answered by adopting
/// (lead 0), racing (lead 1), overriding (lead 2), or revealing just enough
/// to match the public height (lead > 2).
SelfishAction selfish_step(SelfishState& state, const SelfishEvent& event);

} // namespace pouw
