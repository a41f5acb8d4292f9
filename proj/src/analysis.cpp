#include "stegosonic/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>

#include "stegosonic/errors.hpp"

namespace stegosonic {

namespace {

// Signed sample value at word offset p for the given width.
int64_t decode_sample(const uint8_t* p, size_t width) {
    switch (width) {
    case 1:
        return p[0]; // 8-bit PCM is unsigned
    case 2:
        return static_cast<int16_t>(p[0] | (p[1] << 8));
    case 3: {
        int32_t v = p[0] | (p[1] << 8) | (p[2] << 16);
        if (v & 0x800000)
            v |= ~0xFFFFFF;
        return v;
    }
    default:
        return static_cast<int32_t>(static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
                                    (static_cast<uint32_t>(p[2]) << 16) |
                                    (static_cast<uint32_t>(p[3]) << 24));
    }
}

} // namespace

DiffReport compare_files(std::span<const uint8_t> a, std::span<const uint8_t> b) {
    DiffReport rep;
    size_t common = std::min(a.size(), b.size());
    bool found_first = false;
    for (size_t i = 0; i < common; ++i) {
        uint8_t x = static_cast<uint8_t>(a[i] ^ b[i]);
        if (x) {
            if (!found_first) {
                rep.first_diff_offset = i;
                found_first = true;
            }
            ++rep.differing_byte_count;
            rep.differing_bit_count += std::popcount(x);
        }
    }
    size_t excess = std::max(a.size(), b.size()) - common;
    if (excess) {
        if (!found_first) {
            rep.first_diff_offset = common;
            found_first = true;
        }
        rep.differing_byte_count += excess;
        rep.differing_bit_count += 8 * excess;
    }
    rep.identical = !found_first;
    return rep;
}

DistortionReport distortion(const WavFile& original, const WavFile& encoded) {
    if (!original.format.is_pcm() || !encoded.format.is_pcm())
        raise(Errc::FormatMismatch, "both files must be PCM");
    if (original.format != encoded.format)
        raise(Errc::FormatMismatch, "format fields differ");
    if (original.data_span.length != encoded.data_span.length)
        raise(Errc::FormatMismatch, "data lengths differ");

    size_t width = original.format.bytes_per_sample();
    if (width == 0 || width > 4)
        raise(Errc::FormatMismatch, "unsupported sample width");
    size_t samples = original.data_span.length / width;

    DistortionReport rep;
    if (samples == 0)
        return rep;

    const uint8_t* pa = original.raw_bytes.data() + original.data_span.offset;
    const uint8_t* pb = encoded.raw_bytes.data() + encoded.data_span.offset;
    double sum_sq = 0.0;
    size_t modified = 0;
    for (size_t i = 0; i < samples; ++i, pa += width, pb += width) {
        int64_t delta = decode_sample(pb, width) - decode_sample(pa, width);
        if (delta != 0) {
            ++modified;
            rep.max_sample_delta = std::max(rep.max_sample_delta, std::abs(delta));
            sum_sq += static_cast<double>(delta) * static_cast<double>(delta);
        }
    }
    rep.rms_delta = std::sqrt(sum_sq / static_cast<double>(samples));
    rep.modified_sample_fraction = static_cast<double>(modified) / static_cast<double>(samples);
    return rep;
}

} // namespace stegosonic
