#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pouw {

/// Arbitrary-precision non-negative integer.
///
/// Thin value type over GMP's mpz_class that refuses to go negative. The
/// canonical byte form is minimal-length little-endian: no trailing zero
/// bytes, and zero encodes as an empty array.
class Natural {
public:
    Natural() = default;
    Natural(std::uint64_t value); // NOLINT(google-explicit-constructor)
    explicit Natural(mpz_class value);

    static Natural from_bytes_le(std::span<const std::uint8_t> bytes);
    static Natural from_decimal(std::string_view text);

    std::vector<std::uint8_t> to_bytes_le() const;
    std::string to_decimal() const;

    const mpz_class& mpz() const { return value_; }

    bool is_zero() const { return sgn(value_) == 0; }
    bool is_odd() const { return mpz_odd_p(value_.get_mpz_t()) != 0; }
    bool is_even() const { return !is_odd(); }
    std::size_t bit_length() const;
    bool fits_u64() const { return bit_length() <= 64; }
    std::uint64_t to_u64() const;

    /// Residue modulo a word-size divisor.
    std::uint64_t mod_word(std::uint64_t divisor) const;

    Natural& operator+=(const Natural& rhs);
    Natural& operator*=(const Natural& rhs);
    /// Throws std::domain_error if the result would be negative.
    Natural& operator-=(const Natural& rhs);

    friend Natural operator+(Natural lhs, const Natural& rhs) { return lhs += rhs; }
    friend Natural operator*(Natural lhs, const Natural& rhs) { return lhs *= rhs; }
    friend Natural operator-(Natural lhs, const Natural& rhs) { return lhs -= rhs; }
    friend Natural operator<<(const Natural& lhs, unsigned shift);
    friend Natural operator>>(const Natural& lhs, unsigned shift);
    friend Natural operator%(const Natural& lhs, const Natural& rhs);
    friend Natural operator/(const Natural& lhs, const Natural& rhs);

    friend bool operator==(const Natural& a, const Natural& b) { return cmp(a.value_, b.value_) == 0; }
    friend std::strong_ordering operator<=>(const Natural& a, const Natural& b)
    {
        const int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

private:
    mpz_class value_;
};

} // namespace pouw
