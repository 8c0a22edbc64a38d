#include "pouw/hash.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <stdexcept>

namespace pouw {

bool Digest256::is_zero() const
{
    return std::all_of(bytes.begin(), bytes.end(), [](std::uint8_t b) { return b == 0; });
}

Natural Digest256::to_natural_le() const { return Natural::from_bytes_le(bytes); }

std::string Digest256::hex() const { return to_hex(bytes); }

std::optional<Digest256> Digest256::from_hex(std::string_view text)
{
    auto raw = pouw::from_hex(text);
    if (!raw || raw->size() != 32)
        return std::nullopt;
    Digest256 d;
    std::copy(raw->begin(), raw->end(), d.bytes.begin());
    return d;
}

Digest256 sha256(std::span<const std::uint8_t> data)
{
    Digest256 out;
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.bytes.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != out.bytes.size())
        throw std::runtime_error("sha256: EVP_Digest failed");
    return out;
}

Digest256 sha256d(std::span<const std::uint8_t> data)
{
    const Digest256 first = sha256(data);
    return sha256(first.bytes);
}

std::string to_hex(std::span<const std::uint8_t> data)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xF]);
    }
    return out;
}

std::optional<std::vector<std::uint8_t>> from_hex(std::string_view text)
{
    if (text.size() % 2 != 0)
        return std::nullopt;
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9')
            return c - '0';
        if (c >= 'a' && c <= 'f')
            return c - 'a' + 10;
        if (c >= 'A' && c <= 'F')
            return c - 'A' + 10;
        return -1;
    };
    std::vector<std::uint8_t> out(text.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int hi = nibble(text[2 * i]);
        const int lo = nibble(text[2 * i + 1]);
        if (hi < 0 || lo < 0)
            return std::nullopt;
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

} // namespace pouw
