#include "stegosonic/mpeg_frame.hpp"

#include <cstring>
#include <optional>

#include "stegosonic/errors.hpp"

namespace stegosonic {

namespace {

// Layer III bitrates in kbps, indexed by the 4-bit bitrate field.
// Index 0 is "free" (not computable from the header), 15 is invalid.
const int kBitratesV1[16] = {0, 32, 40, 48, 56, 64, 80, 96, 112, 128, 160, 192, 224, 256, 320, -1};
const int kBitratesV2[16] = {0, 8, 16, 24, 32, 40, 48, 56, 64, 80, 96, 112, 128, 144, 160, -1};

const int kSampleRatesV1[4] = {44100, 48000, 32000, 0};
const int kSampleRatesV2[4] = {22050, 24000, 16000, 0};
const int kSampleRatesV2_5[4] = {11025, 12000, 8000, 0};

struct ParsedHeader {
    Mp3FrameHeader header;
    size_t length;
    size_t data_offset;
};

std::optional<ParsedHeader> try_parse_header(const uint8_t* p, size_t remaining) {
    if (remaining < 4)
        return std::nullopt;
    if (p[0] != 0xFF || (p[1] & 0xE0) != 0xE0)
        return std::nullopt;

    int version_bits = (p[1] >> 3) & 0x03;
    if (version_bits == 1)
        return std::nullopt; // reserved
    int layer_bits = (p[1] >> 1) & 0x03;
    if (layer_bits != 0x01)
        return std::nullopt; // only Layer III

    ParsedHeader out;
    out.header.version = static_cast<MpegVersion>(version_bits);
    out.header.crc_protected = (p[1] & 0x01) == 0;

    int bitrate_idx = p[2] >> 4;
    if (bitrate_idx == 0 || bitrate_idx == 15)
        return std::nullopt; // free or invalid bitrate
    int rate_idx = (p[2] >> 2) & 0x03;
    if (rate_idx == 3)
        return std::nullopt;

    bool v1 = out.header.version == MpegVersion::V1;
    out.header.bitrate_kbps = (v1 ? kBitratesV1 : kBitratesV2)[bitrate_idx];
    switch (out.header.version) {
    case MpegVersion::V1: out.header.sample_rate_hz = kSampleRatesV1[rate_idx]; break;
    case MpegVersion::V2: out.header.sample_rate_hz = kSampleRatesV2[rate_idx]; break;
    default: out.header.sample_rate_hz = kSampleRatesV2_5[rate_idx]; break;
    }
    out.header.padding = (p[2] & 0x02) != 0;
    out.header.channel_mode = p[3] >> 6;

    out.length = mp3_frame_length(out.header.bitrate_kbps, out.header.sample_rate_hz,
                                  out.header.padding, out.header.version);
    out.data_offset = 4 + (out.header.crc_protected ? 2 : 0) +
                      mp3_side_info_size(out.header.version, out.header.mono());
    if (out.length < out.data_offset)
        return std::nullopt;
    return out;
}

// Total ID3v2 tag size (header + body + optional footer), or 0.
size_t id3v2_size(std::span<const uint8_t> bytes) {
    if (bytes.size() < 10 || std::memcmp(bytes.data(), "ID3", 3) != 0)
        return 0;
    uint32_t size = 0;
    for (int i = 6; i < 10; ++i) {
        if (bytes[i] & 0x80)
            return 0; // not a syncsafe integer -> not a tag
        size = (size << 7) | bytes[i];
    }
    size_t total = 10 + size + ((bytes[5] & 0x10) ? 10 : 0);
    return total <= bytes.size() ? total : 0;
}

} // namespace

size_t mp3_frame_length(int bitrate_kbps, int sample_rate_hz, bool padding, MpegVersion version) {
    size_t coef = version == MpegVersion::V1 ? 144 : 72;
    return coef * static_cast<size_t>(bitrate_kbps) * 1000 / static_cast<size_t>(sample_rate_hz) +
           (padding ? 1 : 0);
}

size_t mp3_side_info_size(MpegVersion version, bool mono) {
    if (version == MpegVersion::V1)
        return mono ? 17 : 32;
    return mono ? 9 : 17;
}

Mp3Stream parse_mp3(std::span<const uint8_t> bytes) {
    if (bytes.empty())
        raise(Errc::NoFramesFound, "empty input");

    Mp3Stream stream;

    size_t scan_start = id3v2_size(bytes);

    // Find the first parseable frame header.
    size_t first = scan_start;
    std::optional<ParsedHeader> head;
    while (first < bytes.size()) {
        head = try_parse_header(bytes.data() + first, bytes.size() - first);
        if (head)
            break;
        ++first;
    }
    if (!head)
        raise(Errc::NoFramesFound, "no MPEG Layer III frame sync found");

    stream.leading_span = {0, first};

    // Frames are contiguous; the walk ends at the first byte that does not
    // start a frame (ID3v1 tag, junk, or a truncated final frame).
    size_t pos = first;
    bool warned_crc = false;
    while (pos < bytes.size()) {
        auto parsed = try_parse_header(bytes.data() + pos, bytes.size() - pos);
        if (!parsed)
            break;
        if (pos + parsed->length > bytes.size()) {
            stream.diagnostics.push_back("truncated frame at offset " + std::to_string(pos) +
                                         " (wants " + std::to_string(parsed->length) +
                                         " bytes); kept as trailing bytes");
            break;
        }
        Mp3Frame frame;
        frame.offset = pos;
        frame.length = parsed->length;
        frame.data_offset = parsed->data_offset;
        frame.header = parsed->header;
        if (frame.header.crc_protected && !warned_crc) {
            stream.diagnostics.push_back(
                "CRC-protected frames present; CRCs are not recomputed after edits and strict "
                "decoders may drop modified frames");
            warned_crc = true;
        }
        stream.frames.push_back(frame);
        pos += parsed->length;
    }

    stream.trailing_span = {pos, bytes.size() - pos};
    stream.raw_bytes.assign(bytes.begin(), bytes.end());
    return stream;
}

std::vector<uint8_t> write_mp3(const Mp3Stream& stream) {
    size_t pos = stream.leading_span.length;
    if (stream.leading_span.offset != 0)
        raise(Errc::NoFramesFound, "inconsistent leading span");
    for (const Mp3Frame& f : stream.frames) {
        if (f.offset != pos)
            raise(Errc::NoFramesFound, "frames do not tile the stream");
        pos += f.length;
    }
    if (stream.trailing_span.offset != pos ||
        stream.trailing_span.end() != stream.raw_bytes.size())
        raise(Errc::NoFramesFound, "inconsistent trailing span");
    return stream.raw_bytes;
}

} // namespace stegosonic
