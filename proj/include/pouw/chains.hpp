#pragma once

#include "pouw/natural.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pouw {

/// Prime chain kinds with their stable wire codes.
enum class ChainKind : std::uint8_t {
    Cunningham1 = 0, ///< p_{i+1} = 2 p_i + 1, elements 2^i o - 1
    Cunningham2 = 1, ///< p_{i+1} = 2 p_i - 1, elements 2^i o + 1
    BiTwin = 2,      ///< pairs 2^i o - 1, 2^i o + 1
};

inline constexpr std::array<ChainKind, 3> kAllChainKinds{
    ChainKind::Cunningham1, ChainKind::Cunningham2, ChainKind::BiTwin};

std::string_view to_string(ChainKind kind);
std::optional<ChainKind> chain_kind_from_code(std::uint8_t code);
std::optional<ChainKind> chain_kind_from_string(std::string_view name);

/// Chain length in 8.24 fixed point.
struct FixedLength {
    static constexpr unsigned kFractionBits = 24;
    static constexpr std::uint32_t kOne = 1u << kFractionBits;
    static constexpr std::uint32_t kFractionMask = kOne - 1;

    std::uint32_t raw = 0;

    static constexpr FixedLength from_parts(std::uint32_t integer, std::uint32_t fraction)
    {
        return {(integer << kFractionBits) | (fraction & kFractionMask)};
    }
    /// Nearest representable value; throws std::out_of_range outside [0, 256).
    static FixedLength from_double(double length);

    constexpr std::uint32_t integer() const { return raw >> kFractionBits; }
    constexpr std::uint32_t fraction() const { return raw & kFractionMask; }
    double to_double() const { return static_cast<double>(raw) / kOne; }

    friend constexpr auto operator<=>(FixedLength, FixedLength) = default;
};

std::string to_string(FixedLength length);

struct PrimeChain {
    ChainKind kind = ChainKind::Cunningham1;
    Natural origin;
    FixedLength length;
};

/// First `count` elements (2 * count numbers for bi-twin) of the chain
/// anchored at an even origin >= 4. count must be in [1, 64].
std::vector<Natural> chain_elements(ChainKind kind, const Natural& origin, int count);

/// Fixed-point length: the number of leading elements (pairs for bi-twin)
/// that are probable primes, plus floor(2^24 (q - r) / q) for the first
/// failing element q with Fermat remainder r.
FixedLength evaluate_chain(ChainKind kind, const Natural& origin);

PrimeChain make_chain(ChainKind kind, const Natural& origin);

constexpr bool meets_target(FixedLength length, FixedLength target) { return length.raw >= target.raw; }

} // namespace pouw
