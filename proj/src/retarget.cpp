#include "pouw/retarget.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pouw {

void RetargetConfig::check() const
{
    if (target_spacing < 1)
        throw std::invalid_argument("retarget: target_spacing must be >= 1");
    if (window < 1)
        throw std::invalid_argument("retarget: window must be >= 1");
    if (min_target.integer() < 2)
        throw std::invalid_argument("retarget: min_target must be >= 2.0");
}

FixedLength retarget(std::span<const std::uint64_t> recent_intervals, FixedLength current,
                     const RetargetConfig& config)
{
    if (recent_intervals.empty())
        return current;
    const double total = std::accumulate(recent_intervals.begin(), recent_intervals.end(), 0.0,
                                         [](double acc, std::uint64_t v) { return acc + static_cast<double>(v); });
    const double mean = std::max(total / static_cast<double>(recent_intervals.size()), 1e-9);
    const double ratio = static_cast<double>(config.target_spacing) / mean;

    const auto limit = static_cast<std::int64_t>(config.max_step.raw);
    const auto step = std::clamp<std::int64_t>(
        std::llround(FixedLength::kOne * std::log2(ratio) / config.window), -limit, limit);

    const std::int64_t next = std::clamp<std::int64_t>(static_cast<std::int64_t>(current.raw) + step,
                                                       config.min_target.raw, 0xFFFFFFFFll);
    return {static_cast<std::uint32_t>(next)};
}

} // namespace pouw
