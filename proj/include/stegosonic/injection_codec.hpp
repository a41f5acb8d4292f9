#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "stegosonic/payload.hpp"
#include "stegosonic/riff_wav.hpp"

namespace stegosonic {

// Method II: insert the 5-byte preamble between the audio header and body
// and append the sealed payload after the file. Fast and size-unbounded,
// but the output grows by 5 + sealed bytes and chunk size fields are left
// untouched, so strict players may misparse encoded files. Extraction
// relies on an exact length-consistency check anchored on the RIFF size
// field, which makes "no message" detection deterministic.

// Output = header || preamble(5) || data || trailing || sealed.
std::vector<uint8_t> embed_injection(const WavFile& wav, const SealedPayload& sealed);

// Re-parses the header to locate the record, then reads the sealed payload
// from the file tail. Throws Error(NoHiddenData) when the length
// consistency check fails (un-encoded or truncated file).
SealedPayload extract_injection(std::span<const uint8_t> bytes);

// Restores the original carrier byte-exactly. Throws Error(NoHiddenData)
// when there is nothing to remove.
std::vector<uint8_t> remove_injection(std::span<const uint8_t> bytes);

} // namespace stegosonic
