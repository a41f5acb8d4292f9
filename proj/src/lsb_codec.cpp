#include "stegosonic/lsb_codec.hpp"

#include <algorithm>
#include <string>

#include "stegosonic/errors.hpp"
#include "stegosonic/steg_preamble.hpp"

namespace stegosonic {

namespace {

void require_pcm(const WavFile& wav) {
    const WavFormat& fmt = wav.format;
    if (!fmt.is_pcm())
        raise(Errc::UnsupportedFormat,
              "Method I needs uncompressed PCM (audio format " + std::to_string(fmt.audio_format) +
                  " given)");
    if (fmt.bits_per_sample != 8 && fmt.bits_per_sample != 16 && fmt.bits_per_sample != 24 &&
        fmt.bits_per_sample != 32)
        raise(Errc::UnsupportedFormat,
              "unsupported sample width " + std::to_string(fmt.bits_per_sample) + " bits");
}

// Sparse payload layout: 8 positions used, 8 skipped, anchored right after
// the preamble. Maps payload bit b to its index among post-preamble
// positions.
size_t sparse_relative_index(size_t bit) {
    return (bit / 8) * 16 + bit % 8;
}

size_t sparse_count(size_t available) {
    return (available / 16) * 8 + std::min<size_t>(available % 16, 8);
}

void write_bit(std::vector<uint8_t>& bytes, size_t offset, int bit) {
    bytes[offset] = static_cast<uint8_t>((bytes[offset] & ~1u) | (bit & 1));
}

int read_bit(const std::vector<uint8_t>& bytes, size_t offset) {
    return bytes[offset] & 1;
}

} // namespace

size_t lsb_eligible_positions(const WavFile& wav) {
    return wav.data_span.length / wav.format.bytes_per_sample();
}

size_t lsb_payload_position_count(const WavFile& wav, bool dense) {
    size_t eligible = lsb_eligible_positions(wav);
    if (eligible < kPreambleBits)
        return 0;
    size_t available = eligible - kPreambleBits;
    return dense ? available : sparse_count(available);
}

size_t lsb_preamble_bit_offset(const WavFile& wav, size_t bit_index) {
    return wav.data_span.offset + bit_index * wav.format.bytes_per_sample();
}

size_t lsb_payload_bit_offset(const WavFile& wav, bool dense, size_t bit_index) {
    size_t relative = dense ? bit_index : sparse_relative_index(bit_index);
    return wav.data_span.offset + (kPreambleBits + relative) * wav.format.bytes_per_sample();
}

uint64_t capacity_lsb(const WavFile& wav, bool dense) {
    require_pcm(wav);
    uint64_t from_bits = lsb_payload_position_count(wav, dense) / 8;
    uint64_t from_file = wav.raw_bytes.size() / 8;
    return std::min(from_bits, from_file);
}

WavFile embed_lsb(const WavFile& wav, const SealedPayload& sealed, bool dense) {
    uint64_t cap = capacity_lsb(wav, dense);
    std::vector<uint8_t> bytes = sealed.serialize();
    if (bytes.size() > cap)
        raise(Errc::PayloadTooLarge, "sealed payload is " + std::to_string(bytes.size()) +
                                         " bytes but this carrier holds at most " +
                                         std::to_string(cap) + " in " +
                                         (dense ? "dense" : "sparse") + " mode");

    WavFile out = wav;
    StegPreamble preamble{static_cast<uint32_t>(bytes.size()), dense};
    auto pre = preamble.serialize();
    for (size_t bit = 0; bit < kPreambleBits; ++bit)
        write_bit(out.raw_bytes, lsb_preamble_bit_offset(out, bit),
                  (pre[bit / 8] >> (7 - bit % 8)) & 1);
    for (size_t bit = 0; bit < bytes.size() * 8; ++bit)
        write_bit(out.raw_bytes, lsb_payload_bit_offset(out, dense, bit),
                  (bytes[bit / 8] >> (7 - bit % 8)) & 1);
    return out;
}

SealedPayload extract_lsb(const WavFile& wav) {
    require_pcm(wav);
    if (lsb_eligible_positions(wav) < kPreambleBits)
        raise(Errc::NoHiddenData, "carrier too small to hold a length record");

    std::array<uint8_t, kPreambleSize> pre{};
    for (size_t bit = 0; bit < kPreambleBits; ++bit)
        pre[bit / 8] = static_cast<uint8_t>(
            (pre[bit / 8] << 1) | read_bit(wav.raw_bytes, lsb_preamble_bit_offset(wav, bit)));

    auto preamble = StegPreamble::parse(pre);
    if (!preamble)
        raise(Errc::NoHiddenData, "no length record present");
    if (preamble->payload_len == 0)
        raise(Errc::NoHiddenData, "length record is zero");
    if (preamble->payload_len > capacity_lsb(wav, preamble->dense))
        raise(Errc::NoHiddenData, "length record exceeds carrier capacity");

    std::vector<uint8_t> bytes(preamble->payload_len, 0);
    for (size_t bit = 0; bit < bytes.size() * 8; ++bit)
        bytes[bit / 8] = static_cast<uint8_t>(
            (bytes[bit / 8] << 1) |
            read_bit(wav.raw_bytes, lsb_payload_bit_offset(wav, preamble->dense, bit)));

    auto sealed = SealedPayload::deserialize(bytes);
    if (!sealed)
        raise(Errc::NoHiddenData, "recovered bytes do not form a sealed payload");
    return *sealed;
}

WavFile remove_message(const WavFile& wav) {
    SealedPayload sealed = extract_lsb(wav); // throws NoHiddenData when clean

    // The embedded dense flag, not the payload's compression level, decides
    // the layout; re-read it so removal zeroes exactly the written positions.
    std::array<uint8_t, kPreambleSize> pre{};
    for (size_t bit = 0; bit < kPreambleBits; ++bit)
        pre[bit / 8] = static_cast<uint8_t>(
            (pre[bit / 8] << 1) | read_bit(wav.raw_bytes, lsb_preamble_bit_offset(wav, bit)));
    bool dense = StegPreamble::parse(pre)->dense;

    WavFile out = wav;
    for (size_t bit = 0; bit < kPreambleBits; ++bit)
        write_bit(out.raw_bytes, lsb_preamble_bit_offset(out, bit), 0);
    for (size_t bit = 0; bit < sealed.sealed_size() * 8; ++bit)
        write_bit(out.raw_bytes, lsb_payload_bit_offset(out, dense, bit), 0);
    return out;
}

} // namespace stegosonic
