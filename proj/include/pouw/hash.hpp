#pragma once

#include "pouw/natural.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pouw {

/// 256-bit digest, stored in the byte order the hash function emits.
struct Digest256 {
    std::array<std::uint8_t, 32> bytes{};

    bool is_zero() const;
    /// Digest bytes read as a little-endian integer.
    Natural to_natural_le() const;
    std::string hex() const;
    static std::optional<Digest256> from_hex(std::string_view text);

    void flip_bit(unsigned bit) { bytes[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8)); }

    friend auto operator<=>(const Digest256&, const Digest256&) = default;
};

Digest256 sha256(std::span<const std::uint8_t> data);
Digest256 sha256d(std::span<const std::uint8_t> data);

std::string to_hex(std::span<const std::uint8_t> data);
std::optional<std::vector<std::uint8_t>> from_hex(std::string_view text);

struct DigestHasher {
    std::size_t operator()(const Digest256& d) const noexcept
    {
        std::size_t h = 0;
        for (int i = 0; i < 8; ++i)
            h = (h << 8) | d.bytes[i];
        return h;
    }
};

} // namespace pouw
