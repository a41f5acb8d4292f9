#include "stegosonic/mp3_codec.hpp"

#include <algorithm>
#include <string>

#include "stegosonic/errors.hpp"
#include "stegosonic/steg_preamble.hpp"

namespace stegosonic {

namespace {

// Streams payload bits through the data fields of the selected frames.
class FrameBitCursor {
public:
    FrameBitCursor(const Mp3Stream& stream, const std::vector<size_t>& selected)
        : stream_(stream), selected_(selected) {}

    // Absolute byte offset carrying the next bit; false when exhausted.
    bool next(size_t& offset) {
        while (frame_ < selected_.size()) {
            const Mp3Frame& f = stream_.frames[selected_[frame_]];
            if (byte_ < f.data_length()) {
                offset = f.offset + f.data_offset + byte_;
                ++byte_;
                return true;
            }
            ++frame_;
            byte_ = 0;
        }
        return false;
    }

private:
    const Mp3Stream& stream_;
    const std::vector<size_t>& selected_;
    size_t frame_ = 0;
    size_t byte_ = 0;
};

void require_record_frame(const Mp3Stream& stream) {
    if (stream.frames.size() < 2)
        raise(Errc::TooFewFrames, "need at least 2 frames (one record frame plus carriers)");
}

} // namespace

std::vector<size_t> mp3_selected_frames(size_t frame_count, uint32_t skip) {
    std::vector<size_t> out;
    size_t stride = static_cast<size_t>(skip) + 1;
    for (size_t i = stride; i < frame_count; i += stride)
        out.push_back(i);
    return out;
}

uint64_t capacity_mp3(const Mp3Stream& stream, const Mp3EmbedConfig& cfg) {
    require_record_frame(stream);
    if (stream.frames[0].data_length() < kPreambleBits)
        return 0; // record frame cannot hold the 40-bit length record

    uint64_t bits = 0;
    for (size_t i : mp3_selected_frames(stream.frames.size(), cfg.skip))
        bits += stream.frames[i].data_length();
    uint64_t from_bits = bits / 8;
    uint64_t from_file = stream.raw_bytes.size() / 16;
    return std::min(from_bits, from_file);
}

Mp3Stream embed_mp3(const Mp3Stream& stream, const SealedPayload& sealed,
                    const Mp3EmbedConfig& cfg) {
    if (sealed.kind != PayloadKind::Text)
        raise(Errc::NotTextPayload, "Method III hides text payloads only");
    uint64_t cap = capacity_mp3(stream, cfg);
    std::vector<uint8_t> bytes = sealed.serialize();
    if (bytes.size() > cap)
        raise(Errc::PayloadTooLarge, "sealed payload is " + std::to_string(bytes.size()) +
                                         " bytes but this carrier holds at most " +
                                         std::to_string(cap) + " with skip " +
                                         std::to_string(cfg.skip));

    Mp3Stream out = stream;
    StegPreamble preamble{static_cast<uint32_t>(bytes.size()),
                          sealed.level != CompressionLevel::Off};
    auto pre = preamble.serialize();
    const Mp3Frame& record = out.frames[0];
    for (size_t bit = 0; bit < kPreambleBits; ++bit) {
        uint8_t& b = out.raw_bytes[record.offset + record.data_offset + bit];
        b = static_cast<uint8_t>((b & ~1u) | ((pre[bit / 8] >> (7 - bit % 8)) & 1));
    }

    auto selected = mp3_selected_frames(out.frames.size(), cfg.skip);
    FrameBitCursor cursor(out, selected);
    for (size_t bit = 0; bit < bytes.size() * 8; ++bit) {
        size_t offset = 0;
        cursor.next(offset); // capacity check above guarantees room
        uint8_t& b = out.raw_bytes[offset];
        b = static_cast<uint8_t>((b & ~1u) | ((bytes[bit / 8] >> (7 - bit % 8)) & 1));
    }
    return out;
}

SealedPayload extract_mp3(const Mp3Stream& stream, const Mp3EmbedConfig& cfg) {
    require_record_frame(stream);
    const Mp3Frame& record = stream.frames[0];
    if (record.data_length() < kPreambleBits)
        raise(Errc::NoHiddenData, "record frame too small to hold a length record");

    std::array<uint8_t, kPreambleSize> pre{};
    for (size_t bit = 0; bit < kPreambleBits; ++bit)
        pre[bit / 8] = static_cast<uint8_t>(
            (pre[bit / 8] << 1) |
            (stream.raw_bytes[record.offset + record.data_offset + bit] & 1));

    auto preamble = StegPreamble::parse(pre);
    if (!preamble)
        raise(Errc::NoHiddenData, "no length record present");
    if (preamble->payload_len == 0)
        raise(Errc::NoHiddenData, "length record is zero");
    if (preamble->payload_len > capacity_mp3(stream, cfg))
        raise(Errc::NoHiddenData, "length record exceeds carrier capacity");

    std::vector<uint8_t> bytes(preamble->payload_len, 0);
    auto selected = mp3_selected_frames(stream.frames.size(), cfg.skip);
    FrameBitCursor cursor(stream, selected);
    for (size_t bit = 0; bit < bytes.size() * 8; ++bit) {
        size_t offset = 0;
        cursor.next(offset);
        bytes[bit / 8] = static_cast<uint8_t>((bytes[bit / 8] << 1) | (stream.raw_bytes[offset] & 1));
    }

    auto sealed = SealedPayload::deserialize(bytes);
    if (!sealed)
        raise(Errc::NoHiddenData, "recovered bytes do not form a sealed payload");
    return *sealed;
}

} // namespace stegosonic
