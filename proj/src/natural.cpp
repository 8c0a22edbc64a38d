#include "pouw/natural.hpp"

#include <stdexcept>

namespace pouw {

static_assert(sizeof(unsigned long) == sizeof(std::uint64_t), "LP64 platform required");

Natural::Natural(std::uint64_t value) : value_(static_cast<unsigned long>(value)) {}

Natural::Natural(mpz_class value) : value_(std::move(value))
{
    if (sgn(value_) < 0)
        throw std::domain_error("Natural: negative value");
}

Natural Natural::from_bytes_le(std::span<const std::uint8_t> bytes)
{
    Natural n;
    if (!bytes.empty())
        mpz_import(n.value_.get_mpz_t(), bytes.size(), -1, 1, 0, 0, bytes.data());
    return n;
}

Natural Natural::from_decimal(std::string_view text)
{
    if (text.empty() || text.find_first_not_of("0123456789") != std::string_view::npos)
        throw std::invalid_argument("Natural: not a decimal number");
    return Natural(mpz_class(std::string(text), 10));
}

std::vector<std::uint8_t> Natural::to_bytes_le() const
{
    if (is_zero())
        return {};
    std::vector<std::uint8_t> out((mpz_sizeinbase(value_.get_mpz_t(), 2) + 7) / 8);
    std::size_t written = 0;
    mpz_export(out.data(), &written, -1, 1, 0, 0, value_.get_mpz_t());
    out.resize(written);
    return out;
}

std::string Natural::to_decimal() const { return value_.get_str(10); }

std::size_t Natural::bit_length() const
{
    return is_zero() ? 0 : mpz_sizeinbase(value_.get_mpz_t(), 2);
}

std::uint64_t Natural::to_u64() const
{
    if (!fits_u64())
        throw std::overflow_error("Natural: value exceeds 64 bits");
    return mpz_get_ui(value_.get_mpz_t());
}

std::uint64_t Natural::mod_word(std::uint64_t divisor) const
{
    if (divisor == 0)
        throw std::domain_error("Natural: division by zero");
    return mpz_fdiv_ui(value_.get_mpz_t(), divisor);
}

Natural& Natural::operator+=(const Natural& rhs)
{
    value_ += rhs.value_;
    return *this;
}

Natural& Natural::operator*=(const Natural& rhs)
{
    value_ *= rhs.value_;
    return *this;
}

Natural& Natural::operator-=(const Natural& rhs)
{
    if (cmp(value_, rhs.value_) < 0)
        throw std::domain_error("Natural: subtraction underflow");
    value_ -= rhs.value_;
    return *this;
}

Natural operator<<(const Natural& lhs, unsigned shift)
{
    Natural r;
    mpz_mul_2exp(r.value_.get_mpz_t(), lhs.value_.get_mpz_t(), shift);
    return r;
}

Natural operator>>(const Natural& lhs, unsigned shift)
{
    Natural r;
    mpz_fdiv_q_2exp(r.value_.get_mpz_t(), lhs.value_.get_mpz_t(), shift);
    return r;
}

Natural operator%(const Natural& lhs, const Natural& rhs)
{
    if (rhs.is_zero())
        throw std::domain_error("Natural: division by zero");
    Natural r;
    mpz_fdiv_r(r.value_.get_mpz_t(), lhs.value_.get_mpz_t(), rhs.value_.get_mpz_t());
    return r;
}

Natural operator/(const Natural& lhs, const Natural& rhs)
{
    if (rhs.is_zero())
        throw std::domain_error("Natural: division by zero");
    Natural r;
    mpz_fdiv_q(r.value_.get_mpz_t(), lhs.value_.get_mpz_t(), rhs.value_.get_mpz_t());
    return r;
}

} // namespace pouw
