#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace stegosonic {

// Half-open byte range into a file image.
struct ByteRange {
    size_t offset = 0;
    size_t length = 0;

    size_t end() const { return offset + length; }
    bool operator==(const ByteRange&) const = default;
};

struct WavFormat {
    uint16_t audio_format = 0; // 1 = PCM
    uint16_t num_channels = 0;
    uint32_t sample_rate = 0;
    uint16_t bits_per_sample = 0;
    uint16_t block_align = 0;

    bool is_pcm() const { return audio_format == 1; }
    size_t bytes_per_sample() const { return bits_per_sample / 8; }
    bool operator==(const WavFormat&) const = default;
};

// A parsed RIFF/WAVE file. The three spans partition raw_bytes:
//   header_span  = everything up to (and including) the data chunk's
//                  id+size fields,
//   data_span    = the data chunk payload (the samples),
//   trailing_span= everything after the data chunk payload, kept opaque.
// Writing an unmodified WavFile reproduces the input byte for byte.
struct WavFile {
    std::vector<uint8_t> raw_bytes;
    WavFormat format;
    ByteRange header_span;
    ByteRange data_span;
    ByteRange trailing_span;
    std::vector<std::string> diagnostics;

    std::span<uint8_t> data() {
        return {raw_bytes.data() + data_span.offset, data_span.length};
    }
    std::span<const uint8_t> data() const {
        return {raw_bytes.data() + data_span.offset, data_span.length};
    }
};

// Locates fmt and data via a chunk walk; unknown chunks before the data
// payload stay in header_span, everything after it in trailing_span.
// Throws Error(MalformedRiff) on structural problems. Non-PCM formats
// parse fine; they are rejected later by the codecs that need PCM.
WavFile parse_wav(std::span<const uint8_t> bytes);

// Byte-exact serialization. Throws Error(MalformedRiff) if the spans do
// not tile raw_bytes.
std::vector<uint8_t> write_wav(const WavFile& file);

} // namespace stegosonic
