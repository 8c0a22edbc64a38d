#pragma once

#include "pouw/chains.hpp"

#include <cstdint>
#include <span>

namespace pouw {

struct RetargetConfig {
    std::uint64_t target_spacing = 600;                      ///< ticks per block
    int window = 8;                                          ///< smoothing window N
    FixedLength max_step{FixedLength::kOne / 4};             ///< per-block clamp
    FixedLength min_target = FixedLength::from_parts(2, 0);  ///< difficulty floor

    /// Throws std::invalid_argument unless spacing >= 1, window >= 1 and the
    /// floor's integer part is at least 2.
    void check() const;
};

/// Per-block smoothed retarget:
///   raw' = raw + clamp(round(2^24 log2(spacing / mean) / N), +-max_step)
/// floored at min_target and saturating at the top of the 8.24 range.
/// An empty interval list leaves the target unchanged.
FixedLength retarget(std::span<const std::uint64_t> recent_intervals, FixedLength current,
                     const RetargetConfig& config);

} // namespace pouw
