#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "stegosonic/errors.hpp"
#include "stegosonic/mp3_codec.hpp"
#include "stegosonic/payload.hpp"
#include "testutil.hpp"

using namespace stegosonic;
using stegotest::Mp3Oracle;
using stegotest::Mp3Spec;
using stegotest::fabricate_sealed;
using stegotest::make_mp3;

namespace {

Errc code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return Errc::IoError;
}

// 16 x 96-byte frames (32 kbps, 48 kHz) + 64-byte ID3v2 = exactly 1600 bytes.
Mp3Spec small_file_spec() {
    return {.bitrate_idx = 1, .samplerate_idx = 1, .frame_count = 16, .id3v2_total = 64};
}

} // namespace

TEST_CASE("1/16 cap: a 1600-byte file contributes a 100-byte bound") {
    auto bytes = make_mp3(small_file_spec());
    REQUIRE(bytes.size() == 1600);
    Mp3Stream stream = parse_mp3(bytes);
    REQUIRE(stream.frames.size() == 16);
    // skip 0 selects 15 frames x 60 data bytes = 900 bits -> 112 bytes,
    // so the file-size bound of 100 wins.
    CHECK(capacity_mp3(stream, {.skip = 0}) == 100);
    CHECK(capacity_mp3(stream, {.skip = 0}) == Mp3Oracle::capacity(stream, 0));
}

TEST_CASE("the LSB bit bound wins when it is smaller") {
    // Two frames only: skip 0 selects one 60-byte data field -> 7 bytes,
    // far below file/16.
    auto bytes = make_mp3({.bitrate_idx = 1, .samplerate_idx = 1, .frame_count = 2,
                           .id3v2_total = 1000});
    Mp3Stream stream = parse_mp3(bytes);
    CHECK(capacity_mp3(stream, {.skip = 0}) == 7);
    CHECK(capacity_mp3(stream, {.skip = 0}) == Mp3Oracle::capacity(stream, 0));
}

TEST_CASE("a skip too large to select any frame gives zero capacity") {
    Mp3Stream stream = parse_mp3(make_mp3({.frame_count = 8}));
    CHECK(capacity_mp3(stream, {.skip = 8}) == 0);
    CHECK(capacity_mp3(stream, {.skip = 100}) == 0);
    CHECK(capacity_mp3(stream, {.skip = 7}) == 0); // stride 8 -> selects none of 8 frames
    CHECK(capacity_mp3(stream, {.skip = 6}) > 0);  // stride 7 -> selects frame 7
}

TEST_CASE("capacity matches the oracle across skips") {
    stegotest::Rng rng(51);
    for (uint32_t skip = 0; skip <= 6; ++skip) {
        Mp3Spec spec;
        spec.frame_count = 2 + rng.below(40);
        spec.channel_mode = static_cast<int>(rng.below(4));
        spec.crc = rng.below(4) == 0;
        spec.seed = rng.next();
        Mp3Stream stream = parse_mp3(make_mp3(spec));
        CHECK(capacity_mp3(stream, {.skip = skip}) == Mp3Oracle::capacity(stream, skip));
    }
}

TEST_CASE("fewer than two frames raises TooFewFrames") {
    Mp3Stream stream = parse_mp3(make_mp3({.frame_count = 1}));
    CHECK(code_of([&] { capacity_mp3(stream, {}); }) == Errc::TooFewFrames);
}

TEST_CASE("round trip across random streams and skips") {
    stegotest::Rng rng(52);
    for (int i = 0; i < 25; ++i) {
        Mp3Spec spec;
        spec.version = rng.below(2) ? MpegVersion::V1 : MpegVersion::V2;
        spec.bitrate_idx = 5 + static_cast<int>(rng.below(9));
        spec.samplerate_idx = static_cast<int>(rng.below(3));
        spec.frame_count = 10 + rng.below(60);
        spec.channel_mode = static_cast<int>(rng.below(4));
        spec.id3v2_total = rng.below(2) ? 0 : 10 + rng.below(200);
        spec.id3v1 = rng.below(3) == 0;
        spec.seed = rng.next();
        auto bytes = make_mp3(spec);
        Mp3Stream stream = parse_mp3(bytes);

        Mp3EmbedConfig cfg{.skip = static_cast<uint32_t>(rng.below(4))};
        uint64_t cap = capacity_mp3(stream, cfg);
        if (cap < kSealedOverhead)
            continue;
        size_t size = kSealedOverhead + rng.below(cap - kSealedOverhead + 1);
        auto sealed = fabricate_sealed(size, rng, PayloadKind::Text,
                                       static_cast<CompressionLevel>(rng.below(4)));

        Mp3Stream encoded = embed_mp3(stream, sealed, cfg);
        CHECK(encoded.raw_bytes.size() == bytes.size());
        CHECK(extract_mp3(encoded, cfg).serialize() == sealed.serialize());
    }
}

TEST_CASE("edits stay inside selected frames' data fields; structure survives") {
    stegotest::Rng rng(53);
    Mp3Spec spec{.frame_count = 24, .crc = true, .id3v2_total = 50, .seed = 8};
    auto bytes = make_mp3(spec);
    Mp3Stream stream = parse_mp3(bytes);
    Mp3EmbedConfig cfg{.skip = 2};

    size_t size = 200;
    REQUIRE(capacity_mp3(stream, cfg) >= size);
    Mp3Stream encoded = embed_mp3(stream, fabricate_sealed(size, rng, PayloadKind::Text), cfg);
    auto out = write_mp3(encoded);

    auto diff = stegotest::bit_diff(bytes, out);
    CHECK(diff.lsb_only);
    auto allowed = Mp3Oracle::record_offsets(stream);
    auto payload = Mp3Oracle::payload_offsets(stream, cfg.skip, size);
    allowed.insert(allowed.end(), payload.begin(), payload.end());
    std::sort(allowed.begin(), allowed.end());
    for (size_t off : diff.byte_offsets)
        CHECK(std::binary_search(allowed.begin(), allowed.end(), off));

    // Re-parse: identical frame boundaries, headers and side info.
    Mp3Stream reparsed = parse_mp3(out);
    REQUIRE(reparsed.frames.size() == stream.frames.size());
    for (size_t i = 0; i < stream.frames.size(); ++i) {
        CHECK(reparsed.frames[i].offset == stream.frames[i].offset);
        CHECK(reparsed.frames[i].length == stream.frames[i].length);
        CHECK(reparsed.frames[i].data_offset == stream.frames[i].data_offset);
        CHECK(std::equal(out.begin() + reparsed.frames[i].offset,
                         out.begin() + reparsed.frames[i].offset + stream.frames[i].data_offset,
                         bytes.begin() + stream.frames[i].offset));
    }
}

TEST_CASE("skip 0 uses every frame after the first") {
    stegotest::Rng rng(54);
    Mp3Stream stream = parse_mp3(make_mp3({.frame_count = 6, .seed = 4}));
    auto selected = mp3_selected_frames(stream.frames.size(), 0);
    REQUIRE(selected.size() == 5);
    for (size_t i = 0; i < 5; ++i)
        CHECK(selected[i] == i + 1);

    // A payload spanning multiple frames really lands in frames 1 and 2.
    size_t per_frame_bits = stream.frames[1].data_length();
    size_t size = (per_frame_bits + per_frame_bits / 2) / 8;
    Mp3Stream encoded = embed_mp3(stream, fabricate_sealed(size, rng, PayloadKind::Text), {.skip = 0});
    auto diff = stegotest::bit_diff(write_mp3(stream), write_mp3(encoded));
    bool touched_frame2 = false;
    for (size_t off : diff.byte_offsets)
        if (off >= stream.frames[2].data_span().offset && off < stream.frames[2].data_span().end())
            touched_frame2 = true;
    CHECK(touched_frame2);
}

TEST_CASE("only text payloads are allowed") {
    stegotest::Rng rng(55);
    Mp3Stream stream = parse_mp3(make_mp3({.frame_count = 20}));
    for (PayloadKind kind : {PayloadKind::Doc, PayloadKind::Pdf, PayloadKind::Raw})
        CHECK(code_of([&] { embed_mp3(stream, fabricate_sealed(50, rng, kind), {}); }) ==
              Errc::NotTextPayload);
}

TEST_CASE("capacity is the exact embed/fail boundary") {
    stegotest::Rng rng(56);
    Mp3Stream stream = parse_mp3(make_mp3({.frame_count = 30, .seed = 5}));
    Mp3EmbedConfig cfg{.skip = 1};
    uint64_t cap = capacity_mp3(stream, cfg);
    REQUIRE(cap >= kSealedOverhead);
    CHECK_NOTHROW(embed_mp3(stream, fabricate_sealed(cap, rng, PayloadKind::Text), cfg));
    CHECK(code_of([&] {
              embed_mp3(stream, fabricate_sealed(cap + 1, rng, PayloadKind::Text), cfg);
          }) == Errc::PayloadTooLarge);
}

TEST_CASE("a wrong skip value never yields silent wrong plaintext") {
    stegotest::Rng rng(57);
    auto opt = stegotest::fast_seal_options();
    std::vector<uint8_t> message = rng.bytes(300);
    SealedPayload sealed = seal(message, "pw", CompressionLevel::Medium, PayloadKind::Text, opt);

    Mp3Stream stream = parse_mp3(make_mp3({.frame_count = 40, .seed = 6}));
    const uint32_t embed_skip = 2;
    Mp3Stream encoded = embed_mp3(stream, sealed, {.skip = embed_skip});

    for (uint32_t skip = 0; skip <= 8; ++skip) {
        if (skip == embed_skip) {
            auto back = extract_mp3(encoded, {.skip = skip});
            CHECK(open(back, "pw", opt) == message);
            continue;
        }
        bool safe = false;
        try {
            auto back = extract_mp3(encoded, {.skip = skip});
            try {
                auto plain = open(back, "pw", opt);
                CHECK(plain == message); // only acceptable if it IS the message
                safe = plain == message;
            } catch (const Error& e) {
                safe = e.code() == Errc::AuthenticationFailed ||
                       e.code() == Errc::DecompressionFailed;
            }
        } catch (const Error& e) {
            safe = e.code() == Errc::NoHiddenData;
        }
        CHECK(safe);
    }
}

TEST_CASE("pristine streams report NoHiddenData or fail downstream auth") {
    SUBCASE("silent data fields") {
        Mp3Stream stream = parse_mp3(make_mp3({.frame_count = 12, .zero_data = true}));
        CHECK(code_of([&] { extract_mp3(stream, {}); }) == Errc::NoHiddenData);
    }
    SUBCASE("random data fields") {
        auto opt = stegotest::fast_seal_options();
        for (uint64_t seed = 100; seed < 110; ++seed) {
            Mp3Stream stream = parse_mp3(make_mp3({.frame_count = 12, .seed = seed}));
            bool safe = false;
            try {
                auto sealed = extract_mp3(stream, {});
                try {
                    open(sealed, "pw", opt);
                } catch (const Error& e) {
                    safe = e.code() == Errc::AuthenticationFailed;
                }
            } catch (const Error& e) {
                safe = e.code() == Errc::NoHiddenData;
            }
            CHECK(safe);
        }
    }
}
