#include "stegosonic/riff_wav.hpp"

#include <cstring>

#include "stegosonic/byteio.hpp"
#include "stegosonic/errors.hpp"

namespace stegosonic {

namespace {

bool fourcc_is(const uint8_t* p, const char* id) {
    return std::memcmp(p, id, 4) == 0;
}

bool typical_rate(uint32_t rate) {
    return rate == 44100 || rate == 48000 || rate == 88200 || rate == 96000;
}

WavFormat parse_fmt_chunk(const uint8_t* body, uint32_t size) {
    if (size < 16)
        raise(Errc::MalformedRiff, "fmt chunk shorter than 16 bytes");
    WavFormat fmt;
    fmt.audio_format = read_u16le(body + 0);
    fmt.num_channels = read_u16le(body + 2);
    fmt.sample_rate = read_u32le(body + 4);
    // bytes 8..11: avg bytes/sec, informational only
    fmt.block_align = read_u16le(body + 12);
    fmt.bits_per_sample = read_u16le(body + 14);
    return fmt;
}

} // namespace

WavFile parse_wav(std::span<const uint8_t> bytes) {
    if (bytes.empty())
        raise(Errc::MalformedRiff, "empty input");
    if (bytes.size() < 12 || !fourcc_is(bytes.data(), "RIFF"))
        raise(Errc::MalformedRiff, "missing RIFF magic");
    if (!fourcc_is(bytes.data() + 8, "WAVE"))
        raise(Errc::MalformedRiff, "missing WAVE form type");

    WavFile file;
    bool have_fmt = false;
    size_t pos = 12;

    // Chunk walk up to the data chunk. Everything after the data payload is
    // opaque trailing bytes; we never validate or re-walk it.
    for (;;) {
        if (pos == bytes.size())
            raise(Errc::MalformedRiff, "missing data chunk");
        if (pos + 8 > bytes.size())
            raise(Errc::MalformedRiff, "truncated chunk header");

        const uint8_t* id = bytes.data() + pos;
        uint32_t chunk_size = read_u32le(bytes.data() + pos + 4);

        if (fourcc_is(id, "data")) {
            if (!have_fmt)
                raise(Errc::MalformedRiff, "data chunk before fmt chunk");
            size_t payload = pos + 8;
            if (payload + chunk_size > bytes.size())
                raise(Errc::MalformedRiff, "data chunk overruns file");
            file.header_span = {0, payload};
            file.data_span = {payload, chunk_size};
            file.trailing_span = {payload + chunk_size, bytes.size() - (payload + chunk_size)};
            break;
        }

        if (pos + 8 + chunk_size > bytes.size())
            raise(Errc::MalformedRiff, "chunk overruns file");
        if (fourcc_is(id, "fmt ")) {
            file.format = parse_fmt_chunk(bytes.data() + pos + 8, chunk_size);
            have_fmt = true;
        }
        pos += 8 + chunk_size;
        if (chunk_size % 2 == 1) {
            // RIFF pads odd chunks to word boundaries.
            if (pos < bytes.size())
                ++pos;
        }
    }

    const WavFormat& fmt = file.format;
    if (fmt.num_channels == 0)
        raise(Errc::MalformedRiff, "zero channel count");
    if (fmt.sample_rate == 0)
        raise(Errc::MalformedRiff, "zero sample rate");
    if (fmt.is_pcm() && fmt.bits_per_sample % 8 == 0) {
        uint32_t expected = fmt.num_channels * fmt.bits_per_sample / 8;
        if (expected == 0 || fmt.block_align != expected)
            raise(Errc::MalformedRiff, "block_align inconsistent with channels and sample width");
    }
    if (!typical_rate(fmt.sample_rate))
        file.diagnostics.push_back("unusual sample rate " + std::to_string(fmt.sample_rate) +
                                   " Hz (expected 44100/48000/88200/96000)");

    file.raw_bytes.assign(bytes.begin(), bytes.end());
    return file;
}

std::vector<uint8_t> write_wav(const WavFile& file) {
    if (file.header_span.offset != 0 || file.header_span.end() != file.data_span.offset ||
        file.data_span.end() != file.trailing_span.offset ||
        file.trailing_span.end() != file.raw_bytes.size())
        raise(Errc::MalformedRiff, "inconsistent spans");
    return file.raw_bytes;
}

} // namespace stegosonic
