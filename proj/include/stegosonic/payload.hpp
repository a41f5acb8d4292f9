#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace stegosonic {

enum class CompressionLevel : uint8_t {
    Off = 0,
    Low = 1,
    Medium = 2, // default when compression is requested
    High = 3,
};

enum class PayloadKind : uint8_t {
    Text = 0,
    Doc = 1,
    Pdf = 2,
    Raw = 3,
};

inline constexpr size_t kSaltSize = 16;
inline constexpr size_t kNonceSize = 12;
inline constexpr size_t kTagSize = 16;

// flags + salt + nonce + tag; everything in a sealed blob that is not the
// processed plaintext.
inline constexpr size_t kSealedOverhead = 1 + kSaltSize + kNonceSize + kTagSize;

inline constexpr uint32_t kDefaultKdfIterations = 100'000;

// Fills the span with random bytes. The default source is the system CSPRNG.
using RandomSource = std::function<void(std::span<uint8_t>)>;

struct SealOptions {
    uint32_t kdf_iterations = kDefaultKdfIterations;
    RandomSource random; // empty -> system CSPRNG
};

// The compressed-then-encrypted message envelope. Serialized layout is
// flags || salt || nonce || ciphertext with no framing; the embedding layer
// carries the total length. The flags byte is authenticated as associated
// data, so any bit flip anywhere in the blob fails authentication.
struct SealedPayload {
    CompressionLevel level = CompressionLevel::Off;
    PayloadKind kind = PayloadKind::Raw;
    std::array<uint8_t, kSaltSize> salt{};
    std::array<uint8_t, kNonceSize> nonce{};
    std::vector<uint8_t> ciphertext; // includes the 16-byte authentication tag

    // bits 0-1 level, bits 2-3 kind, bits 4-7 reserved zero
    uint8_t flags() const {
        return static_cast<uint8_t>(static_cast<uint8_t>(level) |
                                    (static_cast<uint8_t>(kind) << 2));
    }
    size_t sealed_size() const { return 1 + kSaltSize + kNonceSize + ciphertext.size(); }

    std::vector<uint8_t> serialize() const;
    // nullopt when the blob is structurally impossible (too short, reserved
    // flag bits set); callers treat that as "no message present".
    static std::optional<SealedPayload> deserialize(std::span<const uint8_t> bytes);
};

// Compresses plaintext at the given level (Off is a passthrough), then
// encrypts it with AES-256-GCM under a key derived from (password, salt)
// via PBKDF2-HMAC-SHA256. Fresh random salt and nonce per call.
// Throws Error(EmptyPassword).
SealedPayload seal(std::span<const uint8_t> plaintext, std::string_view password,
                   CompressionLevel level, PayloadKind kind, const SealOptions& options = {});

// Authenticates, decrypts and decompresses. Throws Error(AuthenticationFailed)
// on a wrong password or any corruption (indistinguishable by design) and
// Error(DecompressionFailed) if the authenticated data fails to inflate.
std::vector<uint8_t> open(const SealedPayload& sealed, std::string_view password,
                          const SealOptions& options = {});

} // namespace stegosonic
