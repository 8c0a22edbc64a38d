#include "pouw/block.hpp"
#include "pouw/miner.hpp"
#include "pouw/rng.hpp"
#include "pouw/validation.hpp"

#include <catch_amalgamated.hpp>

#include <filesystem>

using namespace pouw;

namespace {

std::vector<std::uint8_t> bytes_of(std::string_view s) { return {s.begin(), s.end()}; }

BlockHeader sample_header()
{
    BlockHeader h;
    h.version = 7;
    for (int i = 0; i < 32; ++i)
        h.prev_hash.bytes[i] = static_cast<std::uint8_t>(i);
    h.payload_hash = sha256(bytes_of("abc"));
    h.timestamp = 1234567890123;
    h.target.raw = 0x03ABCDEF;
    h.nonce = 0xDEADBEEFCAFEF00Dull;
    h.kind = ChainKind::BiTwin;
    h.certificate = Natural(1234567);
    return h;
}

BlockHeader random_header(Rng& rng)
{
    BlockHeader h;
    h.version = static_cast<std::uint32_t>(rng.next());
    for (auto& b : h.prev_hash.bytes)
        b = static_cast<std::uint8_t>(rng.next());
    for (auto& b : h.payload_hash.bytes)
        b = static_cast<std::uint8_t>(rng.next());
    h.timestamp = rng.next();
    h.target.raw = static_cast<std::uint32_t>(rng.next());
    h.nonce = rng.next();
    h.kind = kAllChainKinds[rng.uniform_int(0, 2)];
    std::vector<std::uint8_t> cert(rng.uniform_int(0, 40));
    for (auto& b : cert)
        b = static_cast<std::uint8_t>(rng.next());
    h.certificate = Natural::from_bytes_le(cert);
    return h;
}

const Block& mined_fixture()
{
    static const Block block = [] {
        BlockTemplate tmpl;
        tmpl.parent = genesis_block().header;
        tmpl.payload = bytes_of("fixture");
        tmpl.timestamp = 600;
        return *mine_block(tmpl, MinerConfig{}).block;
    }();
    return block;
}

} // namespace

TEST_CASE("SHA-256 known answers")
{
    CHECK(sha256(bytes_of("abc")).hex() == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256d(bytes_of("")).hex() == "5df6e0e2761359d30a8275058e299fcc0381534545f55cf43e41983f5d4c9456");
}

TEST_CASE("golden header bytes and hash")
{
    const BlockHeader h = sample_header();
    CHECK(to_hex(encode_header(h)) ==
          "07000000000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1fba7816bf8f01cfea414140de5dae2223b0"
          "0361a396177a9cb410ff61f20015adcb04fb711f010000efcdab030df0fecaefbeadde02030087d612");
    CHECK(header_hash(h).hex() == "07c89eb35d92a54d559ef7eb64f444a681198e716a818452355a448f65f92f59");
}

TEST_CASE("golden genesis block")
{
    const Block& g = genesis_block();
    CHECK(block_to_hex(g) ==
          "010000000000000000000000000000000000000000000000000000000000000000000000aeebad4a796fcc2e15dc4c6061b45ed9b37"
          "3f26adfc798ca7d2d8cc58182718e00000000000000000000000200000000000000000000000700000067656e65736973");
    CHECK(header_hash(g.header).hex() == "8e5a516e344bacea35ce17e676b59ace61fc19268af4941f2ff845d7c8dc4a8b");
    CHECK(g.header.certificate.is_zero());
    CHECK(g.header.target == FixedLength::from_parts(2, 0));
}

TEST_CASE("random headers round trip bit-exactly")
{
    Rng rng(21);
    for (int i = 0; i < 2000; ++i) {
        const BlockHeader h = random_header(rng);
        const auto bytes = encode_header(h);
        REQUIRE(bytes.size() == kHeaderFixedSize + h.certificate.to_bytes_le().size());
        std::size_t used = 0;
        const BlockHeader back = decode_header(bytes, &used);
        REQUIRE(back == h);
        REQUIRE(used == bytes.size());
        REQUIRE(encode_header(back) == bytes);
    }
}

TEST_CASE("blocks round trip through hex")
{
    Rng rng(22);
    for (int i = 0; i < 200; ++i) {
        std::vector<std::uint8_t> payload(rng.uniform_int(0, 300));
        for (auto& b : payload)
            b = static_cast<std::uint8_t>(rng.next());
        const Block b = make_block(random_header(rng), payload);
        REQUIRE(block_from_hex(block_to_hex(b)) == b);
    }
}

TEST_CASE("decoder rejects malformed input")
{
    const auto good = encode_block(mined_fixture());
    SECTION("every truncation")
    {
        for (std::size_t n = 0; n < good.size(); ++n)
            CHECK_THROWS_AS(decode_block(std::span(good).first(n)), DecodeError);
    }
    SECTION("trailing bytes")
    {
        auto extra = good;
        extra.push_back(0);
        CHECK_THROWS_AS(decode_block(extra), DecodeError);
    }
    SECTION("unknown chain kind")
    {
        auto bad = good;
        bad[88] = 3;
        CHECK_THROWS_AS(decode_block(bad), DecodeError);
    }
    SECTION("non-minimal certificate")
    {
        BlockHeader h = sample_header();
        auto bytes = encode_header(h);
        bytes.push_back(0);
        bytes[89] = static_cast<std::uint8_t>(bytes[89] + 1);
        CHECK_THROWS_AS(decode_header(bytes), DecodeError);
    }
    SECTION("bad hex")
    {
        CHECK_THROWS_AS(block_from_hex("zz"), DecodeError);
        CHECK_THROWS_AS(block_from_hex("abc"), DecodeError);
    }
}

TEST_CASE("mined block validates")
{
    const Block& b = mined_fixture();
    CHECK(validate_block(b, genesis_block().header, RetargetConfig{}) == Verdict::Valid);
    CHECK(validate_block(b, genesis_block().header, RetargetConfig{}, BindingMode::Previous,
                         FixedLength::from_parts(2, 0)) == Verdict::Valid);
    const Natural origin = origin_of(b.header);
    CHECK(origin == b.header.prev_hash.to_natural_le() * b.header.certificate);
    CHECK(meets_target(evaluate_chain(b.header.kind, origin), b.header.target));
}

TEST_CASE("each rule has its own reason")
{
    const Block& good = mined_fixture();
    const BlockHeader& parent = genesis_block().header;
    const RetargetConfig config;
    auto verdict = [&](const Block& b) { return validate_block(b, parent, config); };

    Block b = good;
    b.payload.push_back('!');
    CHECK(verdict(b) == Verdict::PayloadHashMismatch);

    b = good;
    b.header.target = FixedLength::from_parts(1, 0xFFFFFF);
    CHECK(verdict(b) == Verdict::TargetBelowMinimum);

    b = good;
    b.header.certificate = Natural(0);
    CHECK(verdict(b) == Verdict::ZeroCertificate);

    b = good;
    b.header.prev_hash = Digest256{};
    CHECK(verdict(b) == Verdict::UnbindableHash);

    b = good;
    b.header.certificate = b.header.certificate + Natural(1);
    const Verdict shifted = verdict(b);
    CHECK((shifted == Verdict::OddOrigin || shifted == Verdict::ChainTooShort));

    b = good;
    b.header.target = FixedLength::from_parts(40, 0);
    CHECK(verdict(b) == Verdict::ChainTooShort);

    b = good;
    b.header.timestamp = 0;
    CHECK(verdict(b) == Verdict::TimestampNotIncreasing);

    CHECK(validate_block(good, parent, config, BindingMode::Previous, FixedLength::from_parts(2, 1)) ==
          Verdict::TargetMismatch);

    BlockHeader other_parent = parent;
    other_parent.timestamp = 1;
    CHECK(validate_block(good, other_parent, config) == Verdict::PrevHashMismatch);
}

TEST_CASE("an odd hash with an odd certificate gives an odd origin")
{
    Block b = mined_fixture();
    b.header.prev_hash.bytes[0] |= 1;
    b.header.certificate = Natural(3);
    CHECK(check_proof_of_work(b.header, RetargetConfig{}, BindingMode::Previous) == Verdict::OddOrigin);
}

TEST_CASE("context-free checks come first")
{
    Block b = mined_fixture();
    b.header.certificate = Natural(0);
    b.header.timestamp = 0;
    CHECK(validate_block(b, genesis_block().header, RetargetConfig{}) == Verdict::ZeroCertificate);
}

TEST_CASE("header binding commits to the rest of the header")
{
    BlockTemplate tmpl;
    tmpl.parent = genesis_block().header;
    tmpl.payload = bytes_of("header-bound");
    tmpl.timestamp = 600;
    const Block b = *mine_block(tmpl, MinerConfig{}, BindingMode::Header).block;
    const BlockHeader& parent = genesis_block().header;
    CHECK(validate_block(b, parent, RetargetConfig{}, BindingMode::Header) == Verdict::Valid);

    BlockHeader zeroed = b.header;
    zeroed.kind = ChainKind::Cunningham1;
    zeroed.certificate = Natural(0);
    CHECK(binding_base(b.header, BindingMode::Header) == header_hash(zeroed).to_natural_le());

    // A sibling with a new payload no longer carries a valid certificate.
    Block sibling = make_block(b.header, bytes_of("other payload"));
    CHECK(validate_block(sibling, parent, RetargetConfig{}, BindingMode::Header) != Verdict::Valid);
}

TEST_CASE("binding mode names")
{
    CHECK(binding_mode_from_string("previous") == BindingMode::Previous);
    CHECK(binding_mode_from_string("header") == BindingMode::Header);
    CHECK_FALSE(binding_mode_from_string("both").has_value());
    CHECK(reason_code(Verdict::Valid) == "VALID");
    CHECK(reason_code(Verdict::ChainTooShort) == "CHAIN_TOO_SHORT");
}

TEST_CASE("chain file appends one line per block")
{
    const auto path = std::filesystem::temp_directory_path() / "pouw_chain_file_test.txt";
    std::filesystem::remove(path);
    append_chain_file(path, genesis_block());
    append_chain_file(path, mined_fixture());
    const auto blocks = load_chain_file(path);
    REQUIRE(blocks.size() == 2);
    CHECK(blocks[0] == genesis_block());
    CHECK(blocks[1] == mined_fixture());
    std::filesystem::remove(path);
}
