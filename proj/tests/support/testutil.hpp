#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "stegosonic/mpeg_frame.hpp"
#include "stegosonic/payload.hpp"
#include "stegosonic/riff_wav.hpp"

// Fixture builders and reference oracles. The oracles re-derive layouts and
// limits from first principles so the tests never trust the code under test
// for its own expected values.
namespace stegotest {

class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next() { return engine_(); }
    uint64_t below(uint64_t n) { return engine_() % n; }
    void fill(std::span<uint8_t> out) {
        size_t i = 0;
        for (; i + 8 <= out.size(); i += 8) {
            uint64_t v = engine_();
            for (int k = 0; k < 8; ++k)
                out[i + k] = static_cast<uint8_t>(v >> (8 * k));
        }
        if (i < out.size()) {
            uint64_t v = engine_();
            for (; i < out.size(); ++i, v >>= 8)
                out[i] = static_cast<uint8_t>(v);
        }
    }
    std::vector<uint8_t> bytes(size_t n) {
        std::vector<uint8_t> out(n);
        fill(out);
        return out;
    }

private:
    std::mt19937_64 engine_;
};

// ---------------------------------------------------------------------------
// WAV fixtures

struct WavSpec {
    uint16_t channels = 2;
    uint16_t bits = 16;
    uint32_t rate = 44100;
    size_t data_bytes = 320;
    bool zero_data = false;
    size_t junk_before_data = 0;  // adds a JUNK chunk of this payload size
    bool list_chunk = false;      // adds a LIST/INFO chunk before data
    size_t trailing_chunk = 0;    // adds a chunk of this payload size after data
    uint64_t seed = 1;
};

std::vector<uint8_t> make_wav(const WavSpec& spec);

// ---------------------------------------------------------------------------
// MP3 fixtures

struct Mp3Spec {
    stegosonic::MpegVersion version = stegosonic::MpegVersion::V1;
    int bitrate_idx = 9;    // 128 kbps for MPEG-1 Layer III
    int samplerate_idx = 0; // 44100 Hz for MPEG-1
    size_t frame_count = 10;
    bool padding = false;
    int channel_mode = 0; // stereo
    bool crc = false;
    size_t id3v2_total = 0; // total tag bytes including its 10-byte header
    bool id3v1 = false;     // 128-byte TAG trailer
    bool zero_data = false;
    uint64_t seed = 1;
};

std::vector<uint8_t> make_mp3(const Mp3Spec& spec);

// The frame length a spec-built frame must have (independent of the parser).
size_t oracle_frame_length(const Mp3Spec& spec);

// ---------------------------------------------------------------------------
// Sealed payload fabrication: structurally valid envelope with arbitrary
// random contents, for codec tests that treat the payload as opaque bytes.

stegosonic::SealedPayload fabricate_sealed(size_t total_size, Rng& rng,
                                           stegosonic::PayloadKind kind = stegosonic::PayloadKind::Raw,
                                           stegosonic::CompressionLevel level = stegosonic::CompressionLevel::Off);

// Zero-filled variant (salt/nonce/ciphertext all zero bytes).
stegosonic::SealedPayload fabricate_sealed_zeros(size_t total_size,
                                                 stegosonic::PayloadKind kind = stegosonic::PayloadKind::Raw);

// Fast KDF settings for unit tests; the acceptance suite uses the defaults.
inline stegosonic::SealOptions fast_seal_options() {
    stegosonic::SealOptions opt;
    opt.kdf_iterations = 1000;
    return opt;
}

// ---------------------------------------------------------------------------
// Method I reference oracle: positions and capacity derived directly from
// the layout rules (low-order byte of each sample word; preamble dense in
// the first 40 positions; sparse payload = 8 used / 8 skipped).

struct LsbOracle {
    static std::vector<size_t> eligible_offsets(const stegosonic::WavFile& wav);
    static std::vector<size_t> preamble_offsets(const stegosonic::WavFile& wav);
    static std::vector<size_t> payload_offsets(const stegosonic::WavFile& wav, bool dense,
                                               size_t payload_bytes);
    static uint64_t capacity(const stegosonic::WavFile& wav, bool dense);
};

// Method III reference oracle.
struct Mp3Oracle {
    static std::vector<size_t> selected_frames(size_t frame_count, uint32_t skip);
    static uint64_t capacity(const stegosonic::Mp3Stream& stream, uint32_t skip);
    // Absolute offsets of payload-carrying bytes, in embed order.
    static std::vector<size_t> payload_offsets(const stegosonic::Mp3Stream& stream, uint32_t skip,
                                               size_t payload_bytes);
    static std::vector<size_t> record_offsets(const stegosonic::Mp3Stream& stream);
};

// ---------------------------------------------------------------------------
// Bit-diff oracle

struct BitDiff {
    std::vector<size_t> byte_offsets; // offsets with at least one differing bit
    size_t bit_count = 0;
    bool lsb_only = true; // every differing bit is bit 0 of its byte
};

BitDiff bit_diff(std::span<const uint8_t> a, std::span<const uint8_t> b);

} // namespace stegotest
