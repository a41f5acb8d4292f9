#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stegosonic/riff_wav.hpp" // ByteRange

namespace stegosonic {

// Values match the two version bits of the frame header.
enum class MpegVersion : uint8_t {
    V2_5 = 0,
    V2 = 2,
    V1 = 3,
};

struct Mp3FrameHeader {
    MpegVersion version = MpegVersion::V1;
    bool crc_protected = false; // protection bit 0 => 2 CRC bytes follow the header
    int bitrate_kbps = 0;
    int sample_rate_hz = 0;
    bool padding = false;
    int channel_mode = 0; // 0 stereo, 1 joint stereo, 2 dual, 3 mono

    bool mono() const { return channel_mode == 3; }
};

// One Layer III frame. The data field starts after the 4-byte header,
// the optional CRC and the side-information block; edits confined to it
// can never break sync words or decoder bookkeeping.
struct Mp3Frame {
    size_t offset = 0;      // absolute offset of the frame header
    size_t length = 0;      // total frame length in bytes
    size_t data_offset = 0; // data field start, relative to the frame start
    Mp3FrameHeader header;

    size_t data_length() const { return length - data_offset; }
    ByteRange data_span() const { return {offset + data_offset, data_length()}; }
};

struct Mp3Stream {
    std::vector<uint8_t> raw_bytes;
    ByteRange leading_span; // ID3v2 tag / pre-sync bytes, preserved verbatim
    std::vector<Mp3Frame> frames;
    ByteRange trailing_span; // ID3v1 tag, truncated frame, or other tail bytes
    std::vector<std::string> diagnostics;

    std::span<uint8_t> frame_data(size_t index) {
        const Mp3Frame& f = frames[index];
        return {raw_bytes.data() + f.offset + f.data_offset, f.data_length()};
    }
    std::span<const uint8_t> frame_data(size_t index) const {
        const Mp3Frame& f = frames[index];
        return {raw_bytes.data() + f.offset + f.data_offset, f.data_length()};
    }
};

// Sync-scans a Layer III stream into contiguous frames. Throws
// Error(NoFramesFound) when no frame parses; a final frame whose computed
// length overruns the file is reported via diagnostics and left in
// trailing_span. Free-bitrate frames are not parseable and end the walk.
Mp3Stream parse_mp3(std::span<const uint8_t> bytes);

// Byte-exact reassembly; throws Error(NoFramesFound) if spans don't tile.
std::vector<uint8_t> write_mp3(const Mp3Stream& stream);

// Frame length for Layer III: floor(coef * bitrate / sample_rate) + padding,
// coef 144 for MPEG-1 and 72 for MPEG-2/2.5.
size_t mp3_frame_length(int bitrate_kbps, int sample_rate_hz, bool padding, MpegVersion version);

// Side-information block size in bytes.
size_t mp3_side_info_size(MpegVersion version, bool mono);

} // namespace stegosonic
