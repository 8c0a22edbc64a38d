#include "pouw/selfish.hpp"

namespace pouw {

namespace {

SelfishAction publish_all(SelfishState& s)
{
    SelfishAction a{SelfishAction::Kind::Publish, {s.unpublished.begin(), s.unpublished.end()}};
    s.unpublished.clear();
    return a;
}

SelfishAction on_own_find(SelfishState& s, const OwnBlockFound& e)
{
    const std::int64_t before = s.lead();
    s.unpublished.push_back(e.block);
    ++s.private_height;
    if (s.racing && before == 0) {
        // We were tied with our published block; the new one settles the race.
        s.racing = false;
        s.public_height = s.private_height;
        return publish_all(s);
    }
    return {};
}

SelfishAction on_rival(SelfishState& s, const RivalBlockArrived& e)
{
    if (e.public_height <= s.public_height)
        return {};
    s.public_height = e.public_height;
    const std::int64_t lead = s.lead();

    if (lead < 0) {
        s.unpublished.clear();
        s.private_height = s.public_height;
        s.racing = false;
        return {SelfishAction::Kind::Adopt, {}};
    }
    if (lead == 0) {
        s.racing = true;
        return publish_all(s);
    }
    if (lead == 1) {
        s.racing = false;
        s.public_height = s.private_height;
        return publish_all(s);
    }
    // Reveal the private blocks up to the public height, keep the rest.
    SelfishAction a{SelfishAction::Kind::Publish, {}};
    std::uint64_t height = s.private_height - s.unpublished.size();
    while (!s.unpublished.empty() && height + 1 <= s.public_height) {
        a.publish.push_back(s.unpublished.front());
        s.unpublished.pop_front();
        ++height;
    }
    s.racing = false;
    return a;
}

} // namespace

SelfishAction selfish_step(SelfishState& state, const SelfishEvent& event)
{
    if (const auto* own = std::get_if<OwnBlockFound>(&event))
        return on_own_find(state, *own);
    if (const auto* rival = std::get_if<RivalBlockArrived>(&event))
        return on_rival(state, *rival);
    return {};
}

} // namespace pouw
