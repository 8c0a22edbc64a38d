#pragma once

#include "pouw/chains.hpp"
#include "pouw/hash.hpp"
#include "pouw/natural.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pouw {

struct BlockHeader {
    std::uint32_t version = 1;
    Digest256 prev_hash;
    Digest256 payload_hash;
    std::uint64_t timestamp = 0;
    FixedLength target;
    std::uint64_t nonce = 0;
    ChainKind kind = ChainKind::Cunningham1;
    Natural certificate; ///< origin multiplier m

    friend bool operator==(const BlockHeader&, const BlockHeader&) = default;
};

struct Block {
    BlockHeader header;
    std::vector<std::uint8_t> payload;

    friend bool operator==(const Block&, const Block&) = default;
};

class DecodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fixed part of the header layout, everything but the certificate bytes.
inline constexpr std::size_t kHeaderFixedSize = 4 + 32 + 32 + 8 + 4 + 8 + 1 + 2;

/// Canonical header bytes, all integers little-endian:
/// version(4) prev_hash(32) payload_hash(32) timestamp(8) target(4)
/// nonce(8) kind(1) cert_len(2) certificate(cert_len).
std::vector<std::uint8_t> encode_header(const BlockHeader& header);

/// Decodes a header from the front of `bytes`; `consumed` receives its length.
/// Rejects truncation, unknown kinds and non-minimal certificates.
BlockHeader decode_header(std::span<const std::uint8_t> bytes, std::size_t* consumed = nullptr);

/// Double SHA-256 of the canonical header bytes.
Digest256 header_hash(const BlockHeader& header);

/// Header bytes, then payload length (u32 LE), then payload.
std::vector<std::uint8_t> encode_block(const Block& block);
Block decode_block(std::span<const std::uint8_t> bytes);

std::string block_to_hex(const Block& block);
Block block_from_hex(std::string_view hex);

/// Builds a block, filling in payload_hash.
Block make_block(BlockHeader header, std::vector<std::uint8_t> payload);

/// Fixed genesis: zero prev_hash, certificate 0, target 2.0, timestamp 0.
const Block& genesis_block();

/// Chain persistence: one lowercase-hex block per line, genesis first.
std::vector<Block> load_chain_file(const std::filesystem::path& path);
void append_chain_file(const std::filesystem::path& path, const Block& block);

} // namespace pouw
