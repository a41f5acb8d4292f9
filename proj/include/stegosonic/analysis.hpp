#pragma once

#include <cstdint>
#include <span>

#include "stegosonic/riff_wav.hpp"

namespace stegosonic {

struct DiffReport {
    bool identical = true;
    size_t first_diff_offset = 0; // meaningful only when !identical
    size_t differing_byte_count = 0;
    size_t differing_bit_count = 0;
};

// Exhaustive byte/bit diff. Length differences count as whole differing
// bytes (8 bits each); the verdict and counts are symmetric in a and b.
DiffReport compare_files(std::span<const uint8_t> a, std::span<const uint8_t> b);

struct DistortionReport {
    int64_t max_sample_delta = 0; // in native sample units
    double rms_delta = 0.0;
    double modified_sample_fraction = 0.0;
};

// Sample-wise signed comparison of two PCM files with identical format and
// data length. Throws Error(FormatMismatch) otherwise.
DistortionReport distortion(const WavFile& original, const WavFile& encoded);

} // namespace stegosonic
