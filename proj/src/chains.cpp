#include "pouw/chains.hpp"

#include "pouw/primality.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace pouw {

namespace {

constexpr std::uint32_t kMaxIntegerLength = 255;

void require_origin(const Natural& origin)
{
    if (origin.is_odd() || origin < Natural(4))
        throw std::invalid_argument("chain origin must be even and >= 4");
}

Natural element(const Natural& origin, unsigned step, int sign)
{
    Natural scaled = origin << step;
    return sign < 0 ? scaled - Natural(1) : scaled + Natural(1);
}

// Tests one chain element. Returns the Fermat remainder of q when it fails,
// nothing when it passes.
std::optional<Natural> failing_remainder(const Natural& q, unsigned step)
{
    if (has_small_factor(q))
        return pow2_mod(q - Natural(1), q);
    if (step == 0) {
        FermatResult fermat = fermat_probable_prime(q);
        if (fermat.passed)
            return std::nullopt;
        return std::move(fermat.remainder);
    }
    if (ell_probable_prime(q))
        return std::nullopt;
    const Natural half = pow2_mod((q - Natural(1)) >> 1, q);
    return (half * half) % q;
}

std::uint32_t fraction_of(const Natural& q, const Natural& remainder)
{
    const Natural scaled = ((q - remainder) << FixedLength::kFractionBits) / q;
    return static_cast<std::uint32_t>(scaled.to_u64());
}

} // namespace

std::string_view to_string(ChainKind kind)
{
    switch (kind) {
    case ChainKind::Cunningham1:
        return "CC1";
    case ChainKind::Cunningham2:
        return "CC2";
    case ChainKind::BiTwin:
        return "BITWIN";
    }
    return "?";
}

std::optional<ChainKind> chain_kind_from_code(std::uint8_t code)
{
    if (code > 2)
        return std::nullopt;
    return static_cast<ChainKind>(code);
}

std::optional<ChainKind> chain_kind_from_string(std::string_view name)
{
    for (ChainKind k : kAllChainKinds) {
        if (to_string(k) == name)
            return k;
    }
    return std::nullopt;
}

FixedLength FixedLength::from_double(double length)
{
    if (!(length >= 0.0) || length >= 256.0)
        throw std::out_of_range("FixedLength: value outside [0, 256)");
    const double scaled = std::round(length * kOne);
    return {scaled >= 4294967295.0 ? 0xFFFFFFFFu : static_cast<std::uint32_t>(scaled)};
}

std::string to_string(FixedLength length)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%u.%06u", length.integer(),
                  static_cast<unsigned>(static_cast<std::uint64_t>(length.fraction()) * 1000000 /
                                        FixedLength::kOne));
    return buf;
}

std::vector<Natural> chain_elements(ChainKind kind, const Natural& origin, int count)
{
    require_origin(origin);
    if (count < 1 || count > 64)
        throw std::invalid_argument("chain_elements: count must be in [1, 64]");
    std::vector<Natural> out;
    out.reserve(kind == ChainKind::BiTwin ? 2 * count : count);
    for (int i = 0; i < count; ++i) {
        const auto step = static_cast<unsigned>(i);
        switch (kind) {
        case ChainKind::Cunningham1:
            out.push_back(element(origin, step, -1));
            break;
        case ChainKind::Cunningham2:
            out.push_back(element(origin, step, +1));
            break;
        case ChainKind::BiTwin:
            out.push_back(element(origin, step, -1));
            out.push_back(element(origin, step, +1));
            break;
        }
    }
    return out;
}

FixedLength evaluate_chain(ChainKind kind, const Natural& origin)
{
    require_origin(origin);
    std::vector<int> signs;
    switch (kind) {
    case ChainKind::Cunningham1:
        signs = {-1};
        break;
    case ChainKind::Cunningham2:
        signs = {+1};
        break;
    case ChainKind::BiTwin:
        signs = {-1, +1};
        break;
    }

    for (std::uint32_t length = 0; length < kMaxIntegerLength; ++length) {
        for (int sign : signs) {
            const Natural q = element(origin, length, sign);
            if (auto remainder = failing_remainder(q, length))
                return FixedLength::from_parts(length, fraction_of(q, *remainder));
        }
    }
    return FixedLength::from_parts(kMaxIntegerLength, 0);
}

PrimeChain make_chain(ChainKind kind, const Natural& origin)
{
    return {kind, origin, evaluate_chain(kind, origin)};
}

} // namespace pouw
