#pragma once

#include <cstdint>
#include <vector>

#include "stegosonic/mpeg_frame.hpp"
#include "stegosonic/payload.hpp"

namespace stegosonic {

// Method III: LSB embedding in MP3 frame data fields. The first frame
// carries the 40-bit length record; payload bits go into the data fields of
// frames spaced so that `skip` frames stay untouched between consecutive
// modified ones. The skip value is a symmetric parameter like the password:
// it is never stored in the file. Only text payloads are accepted and the
// sealed size is capped at 1/16 of the carrier file size.
struct Mp3EmbedConfig {
    uint32_t skip = 3;
};

// Indices of the payload-carrying frames for a given frame count:
// skip+1, 2*(skip+1), ... (frame 0 is reserved for the record).
std::vector<size_t> mp3_selected_frames(size_t frame_count, uint32_t skip);

// Maximum sealed payload in bytes: min(file_size/16, selected LSB bits/8).
// Throws Error(TooFewFrames) for streams with fewer than 2 frames.
uint64_t capacity_mp3(const Mp3Stream& stream, const Mp3EmbedConfig& cfg);

// Throws Error(NotTextPayload) unless sealed.kind is Text and
// Error(PayloadTooLarge) past the cap; the message reports the limit.
Mp3Stream embed_mp3(const Mp3Stream& stream, const SealedPayload& sealed,
                    const Mp3EmbedConfig& cfg);

// Throws Error(NoHiddenData) when no plausible record is present. A wrong
// skip value yields NoHiddenData or a payload that later fails
// authentication, never silent wrong plaintext.
SealedPayload extract_mp3(const Mp3Stream& stream, const Mp3EmbedConfig& cfg);

} // namespace stegosonic
