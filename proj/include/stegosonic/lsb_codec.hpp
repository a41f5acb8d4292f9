#pragma once

#include <cstdint>
#include <vector>

#include "stegosonic/payload.hpp"
#include "stegosonic/riff_wav.hpp"

namespace stegosonic {

// Method I: hide the sealed payload in the least significant bits of the
// carrier's sample words. Carrier positions are the low-order byte of each
// sample word in interleaved order, so writes alternate across channels and
// move each sample by at most one quantization step. The 5-byte preamble
// always occupies the first 40 positions densely; payload bits follow
// either densely (every position) or sparsely (8 positions used, 8 skipped,
// repeating). File size is always preserved.

// Maximum sealed payload size in bytes: the smaller of the LSB bit budget
// for the chosen mode (after the preamble) and 1/8 of the carrier file
// size. Throws Error(UnsupportedFormat) for non-PCM or unsupported widths.
uint64_t capacity_lsb(const WavFile& wav, bool dense);

// Throws Error(PayloadTooLarge) when the sealed payload exceeds capacity;
// the message reports the computed limit.
WavFile embed_lsb(const WavFile& wav, const SealedPayload& sealed, bool dense);

// Reads the preamble from the first 40 positions and reassembles the
// payload per its flags. Throws Error(NoHiddenData) when no plausible
// record is present.
SealedPayload extract_lsb(const WavFile& wav);

// Zeroes the LSB of every position that held preamble or payload bits, so
// a later extract_lsb reports NoHiddenData. Throws Error(NoHiddenData)
// when there is nothing to remove.
WavFile remove_message(const WavFile& wav);

// Layout introspection (used by the capacity report and by verification
// tooling): absolute raw-byte offset of the carrier position holding
// payload bit `bit_index` in the given mode, and the count of payload
// positions available.
size_t lsb_eligible_positions(const WavFile& wav);
size_t lsb_payload_position_count(const WavFile& wav, bool dense);
size_t lsb_payload_bit_offset(const WavFile& wav, bool dense, size_t bit_index);
size_t lsb_preamble_bit_offset(const WavFile& wav, size_t bit_index);

} // namespace stegosonic
