#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>

namespace stegosonic {

inline constexpr size_t kPreambleSize = 5;
inline constexpr size_t kPreambleBits = kPreambleSize * 8;

// The embedded length record shared by all three methods: a 4-byte
// big-endian sealed-payload length (emitted most-significant byte first)
// followed by one flags byte. Flag bit 0 marks the dense LSB layout
// (compression requested); bits 1-7 are reserved zero.
struct StegPreamble {
    uint32_t payload_len = 0;
    bool dense = false;

    std::array<uint8_t, kPreambleSize> serialize() const {
        return {static_cast<uint8_t>(payload_len >> 24), static_cast<uint8_t>(payload_len >> 16),
                static_cast<uint8_t>(payload_len >> 8), static_cast<uint8_t>(payload_len),
                static_cast<uint8_t>(dense ? 1 : 0)};
    }

    // nullopt when reserved flag bits are set -- a strong hint that the
    // bytes are carrier noise rather than a record we wrote.
    static std::optional<StegPreamble> parse(std::span<const uint8_t> bytes) {
        if (bytes.size() != kPreambleSize || (bytes[4] & 0xFE))
            return std::nullopt;
        StegPreamble p;
        p.payload_len = (static_cast<uint32_t>(bytes[0]) << 24) |
                        (static_cast<uint32_t>(bytes[1]) << 16) |
                        (static_cast<uint32_t>(bytes[2]) << 8) | bytes[3];
        p.dense = bytes[4] & 1;
        return p;
    }
};

} // namespace stegosonic
