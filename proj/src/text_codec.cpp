#include "stegosonic/text_codec.hpp"

#include "stegosonic/errors.hpp"

namespace stegosonic {

namespace {

void append_utf16le(std::vector<uint8_t>& out, uint16_t unit) {
    out.push_back(static_cast<uint8_t>(unit));
    out.push_back(static_cast<uint8_t>(unit >> 8));
}

void append_utf8(std::string& out, uint32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

} // namespace

std::vector<uint8_t> utf8_to_utf16le(std::string_view text) {
    std::vector<uint8_t> out;
    out.reserve(text.size() * 2);

    size_t i = 0;
    while (i < text.size()) {
        uint8_t b0 = static_cast<uint8_t>(text[i]);
        uint32_t cp = 0;
        size_t len = 0;
        if (b0 < 0x80) {
            cp = b0;
            len = 1;
        } else if ((b0 & 0xE0) == 0xC0) {
            cp = b0 & 0x1F;
            len = 2;
        } else if ((b0 & 0xF0) == 0xE0) {
            cp = b0 & 0x0F;
            len = 3;
        } else if ((b0 & 0xF8) == 0xF0) {
            cp = b0 & 0x07;
            len = 4;
        } else {
            raise(Errc::InvalidText, "invalid UTF-8 lead byte");
        }
        if (i + len > text.size())
            raise(Errc::InvalidText, "truncated UTF-8 sequence");
        for (size_t k = 1; k < len; ++k) {
            uint8_t b = static_cast<uint8_t>(text[i + k]);
            if ((b & 0xC0) != 0x80)
                raise(Errc::InvalidText, "invalid UTF-8 continuation byte");
            cp = (cp << 6) | (b & 0x3F);
        }
        // Reject overlong encodings, surrogates and out-of-range values.
        static const uint32_t kMinByLen[5] = {0, 0, 0x80, 0x800, 0x10000};
        if (cp < kMinByLen[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
            raise(Errc::InvalidText, "invalid UTF-8 code point");
        i += len;

        if (cp < 0x10000) {
            append_utf16le(out, static_cast<uint16_t>(cp));
        } else {
            cp -= 0x10000;
            append_utf16le(out, static_cast<uint16_t>(0xD800 | (cp >> 10)));
            append_utf16le(out, static_cast<uint16_t>(0xDC00 | (cp & 0x3FF)));
        }
    }
    return out;
}

std::string utf16le_to_utf8(std::span<const uint8_t> bytes) {
    if (bytes.size() % 2 != 0)
        raise(Errc::InvalidText, "UTF-16 byte count is odd");

    std::string out;
    out.reserve(bytes.size());
    size_t units = bytes.size() / 2;
    for (size_t i = 0; i < units; ++i) {
        uint16_t u = static_cast<uint16_t>(bytes[2 * i] | (bytes[2 * i + 1] << 8));
        if (u >= 0xD800 && u <= 0xDBFF) {
            if (i + 1 >= units)
                raise(Errc::InvalidText, "unpaired high surrogate");
            uint16_t lo = static_cast<uint16_t>(bytes[2 * i + 2] | (bytes[2 * i + 3] << 8));
            if (lo < 0xDC00 || lo > 0xDFFF)
                raise(Errc::InvalidText, "unpaired high surrogate");
            uint32_t cp = 0x10000 + ((static_cast<uint32_t>(u - 0xD800) << 10) | (lo - 0xDC00));
            append_utf8(out, cp);
            ++i;
        } else if (u >= 0xDC00 && u <= 0xDFFF) {
            raise(Errc::InvalidText, "unpaired low surrogate");
        } else {
            append_utf8(out, u);
        }
    }
    return out;
}

} // namespace stegosonic
