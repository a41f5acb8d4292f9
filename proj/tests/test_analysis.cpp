#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "stegosonic/analysis.hpp"
#include "stegosonic/errors.hpp"
#include "stegosonic/lsb_codec.hpp"
#include "testutil.hpp"

using namespace stegosonic;
using stegotest::make_wav;

namespace {

// Naive reference diff for cross-checking.
DiffReport reference_diff(std::span<const uint8_t> a, std::span<const uint8_t> b) {
    DiffReport rep;
    size_t n = std::max(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) {
        bool a_has = i < a.size();
        bool b_has = i < b.size();
        uint8_t x = a_has && b_has ? static_cast<uint8_t>(a[i] ^ b[i]) : 0xFF;
        int bits = 0;
        if (a_has && b_has) {
            for (int k = 0; k < 8; ++k)
                bits += (x >> k) & 1;
        } else {
            bits = 8;
        }
        if ((a_has != b_has) || x) {
            if (rep.identical)
                rep.first_diff_offset = i;
            rep.identical = false;
            rep.differing_byte_count += 1;
            rep.differing_bit_count += static_cast<size_t>(bits);
        }
    }
    return rep;
}

bool same_report(const DiffReport& x, const DiffReport& y) {
    if (x.identical != y.identical)
        return false;
    if (x.identical)
        return true;
    return x.first_diff_offset == y.first_diff_offset &&
           x.differing_byte_count == y.differing_byte_count &&
           x.differing_bit_count == y.differing_bit_count;
}

} // namespace

TEST_CASE("identical inputs compare identical") {
    stegotest::Rng rng(71);
    auto x = rng.bytes(1000);
    DiffReport rep = compare_files(x, x);
    CHECK(rep.identical);
    CHECK(rep.differing_byte_count == 0);
    CHECK(rep.differing_bit_count == 0);
}

TEST_CASE("a single flipped bit is counted exactly") {
    stegotest::Rng rng(72);
    auto x = rng.bytes(500);
    auto y = x;
    y[123] ^= 0x10;
    DiffReport rep = compare_files(x, y);
    CHECK_FALSE(rep.identical);
    CHECK(rep.first_diff_offset == 123);
    CHECK(rep.differing_byte_count == 1);
    CHECK(rep.differing_bit_count == 1);
}

TEST_CASE("compare matches a naive reference, symmetrically") {
    stegotest::Rng rng(73);
    for (int i = 0; i < 40; ++i) {
        auto a = rng.bytes(rng.below(300));
        std::vector<uint8_t> b;
        if (rng.below(4) == 0) {
            b = rng.bytes(rng.below(300)); // unrelated buffers
        } else {
            b = a;
            size_t flips = rng.below(20);
            for (size_t f = 0; f < flips && !b.empty(); ++f)
                b[rng.below(b.size())] ^= static_cast<uint8_t>(1 + rng.below(255));
            if (rng.below(3) == 0)
                b.resize(rng.below(b.size() + 10)); // length mismatch
        }
        DiffReport mine = compare_files(a, b);
        CHECK(same_report(mine, reference_diff(a, b)));
        CHECK(same_report(compare_files(b, a), reference_diff(b, a)));
        CHECK(compare_files(a, b).identical == compare_files(b, a).identical);
        CHECK(compare_files(a, b).differing_bit_count ==
              compare_files(b, a).differing_bit_count);
    }
}

TEST_CASE("Method I encoded carriers stay within the diff bound") {
    stegotest::Rng rng(74);
    auto bytes = make_wav({.channels = 2, .bits = 16, .data_bytes = 8000, .seed = 2});
    WavFile wav = parse_wav(bytes);
    size_t sealed_len = 150;
    WavFile encoded = embed_lsb(wav, stegotest::fabricate_sealed(sealed_len, rng), true);
    DiffReport rep = compare_files(bytes, encoded.raw_bytes);
    CHECK(rep.differing_bit_count <= 40 + 8 * sealed_len);
}

TEST_CASE("distortion on identical files is all zero") {
    auto bytes = make_wav({.data_bytes = 1000});
    WavFile wav = parse_wav(bytes);
    DistortionReport rep = distortion(wav, wav);
    CHECK(rep.max_sample_delta == 0);
    CHECK(rep.rms_delta == 0.0);
    CHECK(rep.modified_sample_fraction == 0.0);
}

TEST_CASE("Method I distortion never exceeds one quantization step") {
    stegotest::Rng rng(75);
    for (uint16_t bits : {uint16_t(8), uint16_t(16), uint16_t(24), uint16_t(32)}) {
        auto bytes = make_wav({.channels = 2, .bits = bits, .data_bytes = 16000,
                               .seed = rng.next()});
        WavFile wav = parse_wav(bytes);
        WavFile encoded = embed_lsb(wav, stegotest::fabricate_sealed(300, rng), true);
        DistortionReport rep = distortion(wav, encoded);
        CHECK(rep.max_sample_delta <= 1);
        CHECK(rep.modified_sample_fraction > 0.0);
        CHECK(rep.modified_sample_fraction < 1.0);
        CHECK(rep.rms_delta <= 1.0);
    }
}

TEST_CASE("distortion grows with the edited fraction") {
    stegotest::Rng rng(76);
    auto bytes = make_wav({.channels = 1, .bits = 16, .data_bytes = 60000, .seed = 11});
    WavFile wav = parse_wav(bytes);
    WavFile small = embed_lsb(wav, stegotest::fabricate_sealed(100, rng), true);
    WavFile large = embed_lsb(wav, stegotest::fabricate_sealed(3000, rng), true);
    CHECK(distortion(wav, small).rms_delta < distortion(wav, large).rms_delta);
}

TEST_CASE("format mismatches are rejected") {
    auto a = parse_wav(make_wav({.channels = 2, .bits = 16, .data_bytes = 100}));
    SUBCASE("different channel count") {
        auto b = parse_wav(make_wav({.channels = 1, .bits = 16, .data_bytes = 100}));
        CHECK_THROWS_AS(distortion(a, b), Error);
    }
    SUBCASE("different data length") {
        auto b = parse_wav(make_wav({.channels = 2, .bits = 16, .data_bytes = 104}));
        CHECK_THROWS_AS(distortion(a, b), Error);
    }
    SUBCASE("non-PCM input") {
        auto bytes = make_wav({.channels = 2, .bits = 16, .data_bytes = 100});
        bytes[20] = 2;
        auto b = parse_wav(bytes);
        try {
            distortion(a, b);
            FAIL("expected FormatMismatch");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::FormatMismatch);
        }
    }
}

TEST_CASE("sample decoding respects width and signedness") {
    // Two 16-bit samples differing by -1 across the sign boundary.
    auto base = make_wav({.channels = 1, .bits = 16, .data_bytes = 4, .zero_data = true});
    WavFile a = parse_wav(base);
    WavFile b = a;
    // Sample 0: a = 0, b = -1 (0xFFFF)
    b.raw_bytes[b.data_span.offset] = 0xFF;
    b.raw_bytes[b.data_span.offset + 1] = 0xFF;
    DistortionReport rep = distortion(a, b);
    CHECK(rep.max_sample_delta == 1);
    CHECK(rep.modified_sample_fraction == 0.5);

    // 8-bit samples are unsigned: 0x00 -> 0x01 is a delta of one.
    auto base8 = make_wav({.channels = 1, .bits = 8, .data_bytes = 2, .zero_data = true});
    WavFile a8 = parse_wav(base8);
    WavFile b8 = a8;
    b8.raw_bytes[b8.data_span.offset] = 0x01;
    CHECK(distortion(a8, b8).max_sample_delta == 1);
}
