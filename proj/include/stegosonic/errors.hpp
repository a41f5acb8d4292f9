#pragma once

#include <stdexcept>
#include <string>

namespace stegosonic {

// Every failure the library reports maps to one of these codes. The CLI
// prints the code name verbatim, so names are part of the public surface.
enum class Errc {
    MalformedRiff,
    UnsupportedFormat,
    NoFramesFound,
    TooFewFrames,
    EmptyPassword,
    AuthenticationFailed,
    DecompressionFailed,
    PayloadTooLarge,
    NoHiddenData,
    NotTextPayload,
    FormatMismatch,
    InvalidText,
    ConnectionRefused,
    OfferRejected,
    ChecksumMismatch,
    Timeout,
    PortInUse,
    DiskFull,
    IoError,
};

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }
    const char* name() const noexcept { return errc_name(code_); }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
    throw Error(code, message);
}

} // namespace stegosonic
