#pragma once

#include "pouw/block.hpp"
#include "pouw/retarget.hpp"

#include <optional>
#include <string_view>

namespace pouw {

/// What the chain origin is bound to.
enum class BindingMode {
    Previous, ///< origin = int_LE(prev_hash) * certificate
    Header,   ///< origin = int_LE(sha256d(header, kind and certificate zeroed)) * certificate
};

std::string_view to_string(BindingMode mode);
std::optional<BindingMode> binding_mode_from_string(std::string_view name);

/// The hash integer the certificate multiplies. Zero means the block is
/// unbindable.
Natural binding_base(const BlockHeader& header, BindingMode mode);

/// binding_base * certificate. Throws std::invalid_argument when the
/// certificate or the base is zero.
Natural origin_of(const BlockHeader& header, BindingMode mode = BindingMode::Previous);

enum class Verdict {
    Valid,
    PayloadHashMismatch,
    TargetBelowMinimum,
    ZeroCertificate,
    UnbindableHash,
    OddOrigin,
    ChainTooShort,
    PrevHashMismatch,
    TimestampNotIncreasing,
    TargetMismatch,
};

/// Stable machine-readable reason code, e.g. "CHAIN_TOO_SHORT".
std::string_view reason_code(Verdict verdict);

/// Header-only proof-of-work rules: target floor, certificate binding,
/// origin parity and chain length.
Verdict check_proof_of_work(const BlockHeader& header, const RetargetConfig& config, BindingMode mode);

/// Full block validation against its parent. Context-free rules run before
/// the contextual ones (linkage, timestamp, prescribed target). When
/// `prescribed_target` is empty the retarget rule is not checked, which is
/// the case for standalone verification without chain history.
Verdict validate_block(const Block& block, const BlockHeader& parent, const RetargetConfig& config,
                       BindingMode mode = BindingMode::Previous,
                       std::optional<FixedLength> prescribed_target = std::nullopt);

} // namespace pouw
