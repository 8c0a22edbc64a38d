#include "pouw/block.hpp"

#include <algorithm>
#include <fstream>
#include <limits>

namespace pouw {

namespace {

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value)
{
    for (std::size_t i = 0; i < sizeof(T); ++i)
        out.push_back(static_cast<std::uint8_t>(static_cast<std::uint64_t>(value) >> (8 * i)));
}

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::span<const std::uint8_t> take(std::size_t n)
    {
        if (bytes_.size() - pos_ < n)
            throw DecodeError("truncated input");
        auto out = bytes_.subspan(pos_, n);
        pos_ += n;
        return out;
    }

    template <typename T>
    T le()
    {
        auto raw = take(sizeof(T));
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i)
            v |= static_cast<std::uint64_t>(raw[i]) << (8 * i);
        return static_cast<T>(v);
    }

    Digest256 digest()
    {
        Digest256 d;
        auto raw = take(32);
        std::copy(raw.begin(), raw.end(), d.bytes.begin());
        return d;
    }

    std::size_t position() const { return pos_; }
    std::size_t remaining() const { return bytes_.size() - pos_; }

private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

std::vector<std::uint8_t> genesis_payload()
{
    const std::string_view text = "genesis";
    return {text.begin(), text.end()};
}

} // namespace

std::vector<std::uint8_t> encode_header(const BlockHeader& header)
{
    const std::vector<std::uint8_t> cert = header.certificate.to_bytes_le();
    if (cert.size() > std::numeric_limits<std::uint16_t>::max())
        throw std::length_error("certificate too large to encode");
    std::vector<std::uint8_t> out;
    out.reserve(kHeaderFixedSize + cert.size());
    put_le(out, header.version);
    out.insert(out.end(), header.prev_hash.bytes.begin(), header.prev_hash.bytes.end());
    out.insert(out.end(), header.payload_hash.bytes.begin(), header.payload_hash.bytes.end());
    put_le(out, header.timestamp);
    put_le(out, header.target.raw);
    put_le(out, header.nonce);
    out.push_back(static_cast<std::uint8_t>(header.kind));
    put_le(out, static_cast<std::uint16_t>(cert.size()));
    out.insert(out.end(), cert.begin(), cert.end());
    return out;
}

BlockHeader decode_header(std::span<const std::uint8_t> bytes, std::size_t* consumed)
{
    Reader in(bytes);
    BlockHeader h;
    h.version = in.le<std::uint32_t>();
    h.prev_hash = in.digest();
    h.payload_hash = in.digest();
    h.timestamp = in.le<std::uint64_t>();
    h.target.raw = in.le<std::uint32_t>();
    h.nonce = in.le<std::uint64_t>();
    const auto kind = chain_kind_from_code(in.le<std::uint8_t>());
    if (!kind)
        throw DecodeError("unknown chain kind");
    h.kind = *kind;
    const auto cert_len = in.le<std::uint16_t>();
    const auto cert = in.take(cert_len);
    if (!cert.empty() && cert.back() == 0)
        throw DecodeError("certificate is not minimally encoded");
    h.certificate = Natural::from_bytes_le(cert);
    if (consumed)
        *consumed = in.position();
    return h;
}

Digest256 header_hash(const BlockHeader& header) { return sha256d(encode_header(header)); }

std::vector<std::uint8_t> encode_block(const Block& block)
{
    std::vector<std::uint8_t> out = encode_header(block.header);
    if (block.payload.size() > std::numeric_limits<std::uint32_t>::max())
        throw std::length_error("payload too large to encode");
    put_le(out, static_cast<std::uint32_t>(block.payload.size()));
    out.insert(out.end(), block.payload.begin(), block.payload.end());
    return out;
}

Block decode_block(std::span<const std::uint8_t> bytes)
{
    std::size_t used = 0;
    Block b;
    b.header = decode_header(bytes, &used);
    Reader in(bytes.subspan(used));
    const auto len = in.le<std::uint32_t>();
    const auto payload = in.take(len);
    if (in.remaining() != 0)
        throw DecodeError("trailing bytes after block");
    b.payload.assign(payload.begin(), payload.end());
    return b;
}

std::string block_to_hex(const Block& block) { return to_hex(encode_block(block)); }

Block block_from_hex(std::string_view hex)
{
    while (!hex.empty() && (hex.back() == '\n' || hex.back() == '\r' || hex.back() == ' '))
        hex.remove_suffix(1);
    auto raw = from_hex(hex);
    if (!raw)
        throw DecodeError("malformed hex");
    return decode_block(*raw);
}

Block make_block(BlockHeader header, std::vector<std::uint8_t> payload)
{
    header.payload_hash = sha256(payload);
    return {std::move(header), std::move(payload)};
}

const Block& genesis_block()
{
    static const Block genesis = [] {
        BlockHeader h;
        h.version = 1;
        h.timestamp = 0;
        h.target = FixedLength::from_parts(2, 0);
        h.nonce = 0;
        h.kind = ChainKind::Cunningham1;
        return make_block(h, genesis_payload());
    }();
    return genesis;
}

std::vector<Block> load_chain_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open chain file " + path.string());
    std::vector<Block> blocks;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        blocks.push_back(block_from_hex(line));
    }
    return blocks;
}

void append_chain_file(const std::filesystem::path& path, const Block& block)
{
    std::ofstream out(path, std::ios::app);
    if (!out)
        throw std::runtime_error("cannot open chain file " + path.string());
    out << block_to_hex(block) << '\n';
}

} // namespace pouw
