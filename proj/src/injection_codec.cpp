#include "stegosonic/injection_codec.hpp"

#include <string>

#include "stegosonic/byteio.hpp"
#include "stegosonic/errors.hpp"
#include "stegosonic/steg_preamble.hpp"

namespace stegosonic {

namespace {

struct Located {
    size_t header_len;
    StegPreamble preamble;
    size_t payload_len;
};

// Parses the encoded file's header, reads the record after it and runs the
// exact length check: encoded length must equal the original length implied
// by the RIFF size field plus the record and the appended payload.
Located locate(std::span<const uint8_t> bytes) {
    WavFile parsed = parse_wav(bytes);
    size_t header_len = parsed.header_span.length;
    if (header_len + kPreambleSize > bytes.size())
        raise(Errc::NoHiddenData, "no room for a record after the header");

    auto preamble = StegPreamble::parse(bytes.subspan(header_len, kPreambleSize));
    if (!preamble)
        raise(Errc::NoHiddenData, "no record after the header");
    uint64_t payload_len = preamble->payload_len;
    if (payload_len < kSealedOverhead)
        raise(Errc::NoHiddenData, "record length is implausible");

    uint64_t implied_original = static_cast<uint64_t>(read_u32le(bytes.data() + 4)) + 8;
    if (implied_original < header_len ||
        bytes.size() != implied_original + kPreambleSize + payload_len)
        raise(Errc::NoHiddenData, "file length fails the consistency check");

    return {header_len, *preamble, static_cast<size_t>(payload_len)};
}

} // namespace

std::vector<uint8_t> embed_injection(const WavFile& wav, const SealedPayload& sealed) {
    std::vector<uint8_t> payload = sealed.serialize();
    if (payload.size() > 0xFFFFFFFFull)
        raise(Errc::PayloadTooLarge, "sealed payload exceeds the 32-bit length record");

    StegPreamble preamble{static_cast<uint32_t>(payload.size()),
                          sealed.level != CompressionLevel::Off};
    auto pre = preamble.serialize();

    const std::vector<uint8_t>& raw = wav.raw_bytes;
    std::vector<uint8_t> out;
    out.reserve(raw.size() + pre.size() + payload.size());
    out.insert(out.end(), raw.begin(), raw.begin() + wav.header_span.length);
    out.insert(out.end(), pre.begin(), pre.end());
    out.insert(out.end(), raw.begin() + wav.header_span.length, raw.end());
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

SealedPayload extract_injection(std::span<const uint8_t> bytes) {
    Located loc = locate(bytes);
    auto sealed = SealedPayload::deserialize(bytes.subspan(bytes.size() - loc.payload_len));
    if (!sealed)
        raise(Errc::NoHiddenData, "appended bytes do not form a sealed payload");
    return *sealed;
}

std::vector<uint8_t> remove_injection(std::span<const uint8_t> bytes) {
    Located loc = locate(bytes);
    std::vector<uint8_t> out;
    out.reserve(bytes.size() - kPreambleSize - loc.payload_len);
    out.insert(out.end(), bytes.begin(), bytes.begin() + loc.header_len);
    out.insert(out.end(), bytes.begin() + loc.header_len + kPreambleSize,
               bytes.end() - loc.payload_len);
    return out;
}

} // namespace stegosonic
