#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stegosonic/errors.hpp"
#include "stegosonic/mpeg_frame.hpp"
#include "testutil.hpp"

using namespace stegosonic;
using stegotest::Mp3Spec;
using stegotest::make_mp3;

TEST_CASE("frame length formula: 128 kbps, 44.1 kHz MPEG-1 Layer III") {
    // floor(144 * 128000 / 44100) = 417
    CHECK(stegotest::oracle_frame_length({.bitrate_idx = 9, .samplerate_idx = 0}) == 417);
    CHECK(mp3_frame_length(128, 44100, false, MpegVersion::V1) == 417);
    CHECK(mp3_frame_length(128, 44100, true, MpegVersion::V1) == 418);

    Mp3Spec spec{.bitrate_idx = 9, .samplerate_idx = 0, .frame_count = 3};
    Mp3Stream stream = parse_mp3(make_mp3(spec));
    REQUIRE(stream.frames.size() == 3);
    CHECK(stream.frames[0].length == 417);

    spec.padding = true;
    stream = parse_mp3(make_mp3(spec));
    CHECK(stream.frames[0].length == 418);
}

TEST_CASE("N frames tile the stream and reassemble byte-exactly") {
    for (size_t n : {1u, 2u, 7u, 40u}) {
        auto bytes = make_mp3({.frame_count = n, .seed = n});
        Mp3Stream stream = parse_mp3(bytes);
        CHECK(stream.frames.size() == n);
        CHECK(stream.leading_span.length == 0);
        CHECK(stream.trailing_span.length == 0);
        CHECK(write_mp3(stream) == bytes);
    }
}

TEST_CASE("reassembly identity over randomized streams") {
    stegotest::Rng rng(11);
    for (int i = 0; i < 40; ++i) {
        Mp3Spec spec;
        spec.version = rng.below(2) ? MpegVersion::V1 : MpegVersion::V2;
        spec.bitrate_idx = 1 + static_cast<int>(rng.below(14));
        spec.samplerate_idx = static_cast<int>(rng.below(3));
        spec.frame_count = 1 + rng.below(30);
        spec.padding = rng.below(2);
        spec.channel_mode = static_cast<int>(rng.below(4));
        spec.crc = rng.below(4) == 0;
        spec.id3v2_total = rng.below(3) ? 0 : 10 + rng.below(100);
        spec.id3v1 = rng.below(4) == 0;
        spec.seed = rng.next();

        auto bytes = make_mp3(spec);
        Mp3Stream stream = parse_mp3(bytes);
        CHECK(stream.frames.size() == spec.frame_count);
        CHECK(write_mp3(stream) == bytes);
        size_t tiled = stream.leading_span.length + stream.trailing_span.length;
        for (const auto& f : stream.frames)
            tiled += f.length;
        CHECK(tiled == bytes.size());
    }
}

TEST_CASE("ID3v2 prefix lands in leading_span, ID3v1 in trailing_span") {
    auto bytes = make_mp3({.frame_count = 4, .id3v2_total = 90, .id3v1 = true});
    Mp3Stream stream = parse_mp3(bytes);
    CHECK(stream.leading_span.length == 90);
    CHECK(stream.frames.size() == 4);
    CHECK(stream.trailing_span.length == 128);
    CHECK(write_mp3(stream) == bytes);
}

TEST_CASE("data field excludes header, CRC and side information") {
    SUBCASE("MPEG-1 stereo") {
        Mp3Stream s = parse_mp3(make_mp3({.channel_mode = 0}));
        CHECK(s.frames[0].data_offset == 4 + 32);
    }
    SUBCASE("MPEG-1 mono") {
        Mp3Stream s = parse_mp3(make_mp3({.channel_mode = 3}));
        CHECK(s.frames[0].data_offset == 4 + 17);
    }
    SUBCASE("MPEG-1 stereo with CRC") {
        Mp3Stream s = parse_mp3(make_mp3({.channel_mode = 0, .crc = true}));
        CHECK(s.frames[0].data_offset == 4 + 2 + 32);
        CHECK_FALSE(s.diagnostics.empty()); // CRC warning
    }
    SUBCASE("MPEG-2 stereo") {
        Mp3Stream s = parse_mp3(make_mp3({.version = MpegVersion::V2}));
        CHECK(s.frames[0].data_offset == 4 + 17);
    }
    SUBCASE("MPEG-2 mono") {
        Mp3Stream s = parse_mp3(make_mp3({.version = MpegVersion::V2, .channel_mode = 3}));
        CHECK(s.frames[0].data_offset == 4 + 9);
    }
}

TEST_CASE("truncated final frame is kept as trailing bytes with a diagnostic") {
    auto bytes = make_mp3({.frame_count = 5});
    bytes.resize(bytes.size() - 100); // cut into the last frame
    Mp3Stream stream = parse_mp3(bytes);
    CHECK(stream.frames.size() == 4);
    CHECK(stream.trailing_span.length == 417 - 100);
    REQUIRE_FALSE(stream.diagnostics.empty());
    CHECK(stream.diagnostics.back().find("truncated") != std::string::npos);
    CHECK(write_mp3(stream) == bytes);
}

TEST_CASE("free-bitrate frames are not parseable") {
    auto bytes = make_mp3({.frame_count = 2});
    bytes[2] = static_cast<uint8_t>(bytes[2] & 0x0F); // bitrate index 0 on frame 1
    // The scan skips the unusable header; the second frame still parses.
    Mp3Stream stream = parse_mp3(bytes);
    CHECK(stream.frames.size() == 1);
    CHECK(stream.frames[0].offset == 417);
}

TEST_CASE("streams with no frames raise NoFramesFound") {
    std::vector<uint8_t> junk(300, 0x41);
    try {
        parse_mp3(junk);
        FAIL("expected NoFramesFound");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NoFramesFound);
    }
    CHECK_THROWS_AS(parse_mp3({}), Error);
}

TEST_CASE("one data LSB flip re-emits exactly one differing byte inside that frame") {
    auto bytes = make_mp3({.frame_count = 6, .seed = 3});
    Mp3Stream stream = parse_mp3(bytes);
    const size_t k = 4;
    stream.frame_data(k)[7] ^= 1;
    auto out = write_mp3(stream);
    CHECK(out.size() == bytes.size());
    auto diff = stegotest::bit_diff(bytes, out);
    REQUIRE(diff.byte_offsets.size() == 1);
    CHECK(diff.bit_count == 1);
    CHECK(diff.lsb_only);
    size_t off = diff.byte_offsets[0];
    CHECK(off >= stream.frames[k].data_span().offset);
    CHECK(off < stream.frames[k].data_span().end());
}
