#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "stegosonic/mp3_codec.hpp"

namespace stegosonic {

enum class Method {
    LsbDense,
    LsbSparse,
    Injection,
    Mp3,
};

const char* method_name(Method method) noexcept;

struct CapacityReport {
    uint64_t max_sealed_bytes = 0;
    // max_sealed minus the envelope overhead (flags+salt+nonce+tag = 45
    // bytes). An estimate: compression may shrink or grow the input.
    uint64_t estimated_max_plaintext_bytes = 0;
};

// Pre-flight capacity for a carrier, shown before any encoding begins.
// Injection has no structural cap beyond the 32-bit length record, so it
// reports 2^32-1. Parse errors for the chosen method propagate.
CapacityReport report(std::span<const uint8_t> carrier, Method method,
                      const Mp3EmbedConfig& mp3_cfg = {});

} // namespace stegosonic
