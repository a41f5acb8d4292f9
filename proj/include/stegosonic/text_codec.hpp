#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stegosonic {

// Text messages travel as UTF-16LE bytes inside the sealed envelope.
// Both directions throw Error(InvalidText) on malformed input
// (bad UTF-8, odd byte count, unpaired surrogates).
std::vector<uint8_t> utf8_to_utf16le(std::string_view text);
std::string utf16le_to_utf8(std::span<const uint8_t> bytes);

} // namespace stegosonic
