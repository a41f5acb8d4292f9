#include "stegosonic/capacity.hpp"

#include "stegosonic/lsb_codec.hpp"
#include "stegosonic/riff_wav.hpp"

namespace stegosonic {

const char* method_name(Method method) noexcept {
    switch (method) {
    case Method::LsbDense: return "lsb-dense";
    case Method::LsbSparse: return "lsb-sparse";
    case Method::Injection: return "injection";
    case Method::Mp3: return "mp3";
    }
    return "?";
}

CapacityReport report(std::span<const uint8_t> carrier, Method method,
                      const Mp3EmbedConfig& mp3_cfg) {
    CapacityReport rep;
    switch (method) {
    case Method::LsbDense:
    case Method::LsbSparse: {
        WavFile wav = parse_wav(carrier);
        rep.max_sealed_bytes = capacity_lsb(wav, method == Method::LsbDense);
        break;
    }
    case Method::Injection:
        parse_wav(carrier); // must be a WAV even though the cap is structural
        rep.max_sealed_bytes = 0xFFFFFFFFull;
        break;
    case Method::Mp3: {
        Mp3Stream stream = parse_mp3(carrier);
        rep.max_sealed_bytes = capacity_mp3(stream, mp3_cfg);
        break;
    }
    }
    rep.estimated_max_plaintext_bytes =
        rep.max_sealed_bytes > kSealedOverhead ? rep.max_sealed_bytes - kSealedOverhead : 0;
    return rep;
}

} // namespace stegosonic
