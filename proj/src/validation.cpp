#include "pouw/validation.hpp"

#include <stdexcept>

namespace pouw {

std::string_view to_string(BindingMode mode)
{
    return mode == BindingMode::Previous ? "previous" : "header";
}

std::optional<BindingMode> binding_mode_from_string(std::string_view name)
{
    if (name == "previous")
        return BindingMode::Previous;
    if (name == "header")
        return BindingMode::Header;
    return std::nullopt;
}

Natural binding_base(const BlockHeader& header, BindingMode mode)
{
    if (mode == BindingMode::Previous)
        return header.prev_hash.to_natural_le();
    BlockHeader stripped = header;
    stripped.kind = ChainKind::Cunningham1;
    stripped.certificate = Natural();
    return header_hash(stripped).to_natural_le();
}

Natural origin_of(const BlockHeader& header, BindingMode mode)
{
    if (header.certificate.is_zero())
        throw std::invalid_argument("origin_of: certificate must be >= 1");
    Natural base = binding_base(header, mode);
    if (base.is_zero())
        throw std::invalid_argument("origin_of: binding hash is zero");
    return base * header.certificate;
}

std::string_view reason_code(Verdict verdict)
{
    switch (verdict) {
    case Verdict::Valid:
        return "VALID";
    case Verdict::PayloadHashMismatch:
        return "PAYLOAD_HASH_MISMATCH";
    case Verdict::TargetBelowMinimum:
        return "TARGET_BELOW_MINIMUM";
    case Verdict::ZeroCertificate:
        return "ZERO_CERTIFICATE";
    case Verdict::UnbindableHash:
        return "UNBINDABLE_HASH";
    case Verdict::OddOrigin:
        return "ODD_ORIGIN";
    case Verdict::ChainTooShort:
        return "CHAIN_TOO_SHORT";
    case Verdict::PrevHashMismatch:
        return "PREV_HASH_MISMATCH";
    case Verdict::TimestampNotIncreasing:
        return "TIMESTAMP_NOT_INCREASING";
    case Verdict::TargetMismatch:
        return "TARGET_MISMATCH";
    }
    return "UNKNOWN";
}

Verdict check_proof_of_work(const BlockHeader& header, const RetargetConfig& config, BindingMode mode)
{
    if (header.target < config.min_target)
        return Verdict::TargetBelowMinimum;
    if (header.certificate.is_zero())
        return Verdict::ZeroCertificate;
    const Natural base = binding_base(header, mode);
    if (base.is_zero())
        return Verdict::UnbindableHash;
    const Natural origin = base * header.certificate;
    if (origin.is_odd())
        return Verdict::OddOrigin;
    if (!meets_target(evaluate_chain(header.kind, origin), header.target))
        return Verdict::ChainTooShort;
    return Verdict::Valid;
}

Verdict validate_block(const Block& block, const BlockHeader& parent, const RetargetConfig& config,
                       BindingMode mode, std::optional<FixedLength> prescribed_target)
{
    const BlockHeader& h = block.header;
    if (sha256(block.payload) != h.payload_hash)
        return Verdict::PayloadHashMismatch;
    if (const Verdict pow = check_proof_of_work(h, config, mode); pow != Verdict::Valid)
        return pow;
    if (h.prev_hash != header_hash(parent))
        return Verdict::PrevHashMismatch;
    if (h.timestamp <= parent.timestamp)
        return Verdict::TimestampNotIncreasing;
    if (prescribed_target && h.target != *prescribed_target)
        return Verdict::TargetMismatch;
    return Verdict::Valid;
}

} // namespace pouw
