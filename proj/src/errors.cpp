#include "stegosonic/errors.hpp"

namespace stegosonic {

const char* errc_name(Errc code) noexcept {
    switch (code) {
    case Errc::MalformedRiff: return "MalformedRiff";
    case Errc::UnsupportedFormat: return "UnsupportedFormat";
    case Errc::NoFramesFound: return "NoFramesFound";
    case Errc::TooFewFrames: return "TooFewFrames";
    case Errc::EmptyPassword: return "EmptyPassword";
    case Errc::AuthenticationFailed: return "AuthenticationFailed";
    case Errc::DecompressionFailed: return "DecompressionFailed";
    case Errc::PayloadTooLarge: return "PayloadTooLarge";
    case Errc::NoHiddenData: return "NoHiddenData";
    case Errc::NotTextPayload: return "NotTextPayload";
    case Errc::FormatMismatch: return "FormatMismatch";
    case Errc::InvalidText: return "InvalidText";
    case Errc::ConnectionRefused: return "ConnectionRefused";
    case Errc::OfferRejected: return "OfferRejected";
    case Errc::ChecksumMismatch: return "ChecksumMismatch";
    case Errc::Timeout: return "Timeout";
    case Errc::PortInUse: return "PortInUse";
    case Errc::DiskFull: return "DiskFull";
    case Errc::IoError: return "IoError";
    }
    return "UnknownError";
}

} // namespace stegosonic
