#include "stegosonic/payload.hpp"

#include <cstring>
#include <memory>

#include <openssl/evp.h>
#include <openssl/rand.h>
#include <zlib.h>

#include "stegosonic/errors.hpp"

namespace stegosonic {

namespace {

constexpr size_t kKeySize = 32;

int zlib_level(CompressionLevel level) {
    switch (level) {
    case CompressionLevel::Low: return Z_BEST_SPEED;
    case CompressionLevel::Medium: return Z_DEFAULT_COMPRESSION;
    case CompressionLevel::High: return Z_BEST_COMPRESSION;
    default: return Z_NO_COMPRESSION;
    }
}

std::vector<uint8_t> deflate_bytes(std::span<const uint8_t> input, int level) {
    uLong bound = compressBound(static_cast<uLong>(input.size()));
    std::vector<uint8_t> out(bound);
    uLongf out_len = bound;
    int rc = compress2(out.data(), &out_len, input.data(), static_cast<uLong>(input.size()), level);
    if (rc != Z_OK)
        raise(Errc::IoError, "deflate failed (zlib rc " + std::to_string(rc) + ")");
    out.resize(out_len);
    return out;
}

std::vector<uint8_t> inflate_bytes(std::span<const uint8_t> input) {
    z_stream zs{};
    if (inflateInit(&zs) != Z_OK)
        raise(Errc::IoError, "inflateInit failed");
    std::unique_ptr<z_stream, int (*)(z_stream*)> guard(&zs, inflateEnd);

    zs.next_in = const_cast<Bytef*>(input.data());
    zs.avail_in = static_cast<uInt>(input.size());

    std::vector<uint8_t> out;
    uint8_t buf[16384];
    int rc = Z_OK;
    do {
        zs.next_out = buf;
        zs.avail_out = sizeof(buf);
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END)
            raise(Errc::DecompressionFailed, "compressed payload is corrupt");
        out.insert(out.end(), buf, buf + (sizeof(buf) - zs.avail_out));
    } while (rc != Z_STREAM_END);
    if (zs.avail_in != 0)
        raise(Errc::DecompressionFailed, "trailing bytes after compressed payload");
    return out;
}

std::array<uint8_t, kKeySize> derive_key(std::string_view password,
                                         std::span<const uint8_t, kSaltSize> salt,
                                         uint32_t iterations) {
    std::array<uint8_t, kKeySize> key{};
    if (PKCS5_PBKDF2_HMAC(password.data(), static_cast<int>(password.size()), salt.data(),
                          static_cast<int>(salt.size()), static_cast<int>(iterations),
                          EVP_sha256(), static_cast<int>(key.size()), key.data()) != 1)
        raise(Errc::IoError, "key derivation failed");
    return key;
}

void fill_random(std::span<uint8_t> out, const RandomSource& source) {
    if (source) {
        source(out);
        return;
    }
    if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1)
        raise(Errc::IoError, "system randomness unavailable");
}

struct CipherCtx {
    EVP_CIPHER_CTX* ctx;
    CipherCtx() : ctx(EVP_CIPHER_CTX_new()) {
        if (!ctx)
            raise(Errc::IoError, "EVP_CIPHER_CTX_new failed");
    }
    ~CipherCtx() { EVP_CIPHER_CTX_free(ctx); }
};

} // namespace

std::vector<uint8_t> SealedPayload::serialize() const {
    std::vector<uint8_t> out;
    out.reserve(sealed_size());
    out.push_back(flags());
    out.insert(out.end(), salt.begin(), salt.end());
    out.insert(out.end(), nonce.begin(), nonce.end());
    out.insert(out.end(), ciphertext.begin(), ciphertext.end());
    return out;
}

std::optional<SealedPayload> SealedPayload::deserialize(std::span<const uint8_t> bytes) {
    if (bytes.size() < kSealedOverhead)
        return std::nullopt;
    uint8_t flags = bytes[0];
    if (flags & 0xF0)
        return std::nullopt; // reserved bits must be zero
    SealedPayload sealed;
    sealed.level = static_cast<CompressionLevel>(flags & 0x03);
    sealed.kind = static_cast<PayloadKind>((flags >> 2) & 0x03);
    std::memcpy(sealed.salt.data(), bytes.data() + 1, kSaltSize);
    std::memcpy(sealed.nonce.data(), bytes.data() + 1 + kSaltSize, kNonceSize);
    sealed.ciphertext.assign(bytes.begin() + 1 + kSaltSize + kNonceSize, bytes.end());
    return sealed;
}

SealedPayload seal(std::span<const uint8_t> plaintext, std::string_view password,
                   CompressionLevel level, PayloadKind kind, const SealOptions& options) {
    if (password.empty())
        raise(Errc::EmptyPassword, "password must not be empty");

    std::vector<uint8_t> processed;
    std::span<const uint8_t> to_encrypt = plaintext;
    if (level != CompressionLevel::Off) {
        processed = deflate_bytes(plaintext, zlib_level(level));
        to_encrypt = processed;
    }

    SealedPayload sealed;
    sealed.level = level;
    sealed.kind = kind;
    fill_random(sealed.salt, options.random);
    fill_random(sealed.nonce, options.random);

    auto key = derive_key(password, sealed.salt, options.kdf_iterations);

    CipherCtx c;
    if (EVP_EncryptInit_ex(c.ctx, EVP_aes_256_gcm(), nullptr, key.data(), sealed.nonce.data()) != 1)
        raise(Errc::IoError, "cipher init failed");

    uint8_t aad = sealed.flags();
    int len = 0;
    if (EVP_EncryptUpdate(c.ctx, nullptr, &len, &aad, 1) != 1)
        raise(Errc::IoError, "cipher aad failed");

    sealed.ciphertext.resize(to_encrypt.size() + kTagSize);
    if (!to_encrypt.empty() &&
        EVP_EncryptUpdate(c.ctx, sealed.ciphertext.data(), &len, to_encrypt.data(),
                          static_cast<int>(to_encrypt.size())) != 1)
        raise(Errc::IoError, "encryption failed");
    int final_len = 0;
    if (EVP_EncryptFinal_ex(c.ctx, sealed.ciphertext.data() + to_encrypt.size(), &final_len) != 1)
        raise(Errc::IoError, "encryption finalization failed");
    if (EVP_CIPHER_CTX_ctrl(c.ctx, EVP_CTRL_GCM_GET_TAG, kTagSize,
                            sealed.ciphertext.data() + to_encrypt.size()) != 1)
        raise(Errc::IoError, "tag extraction failed");
    return sealed;
}

std::vector<uint8_t> open(const SealedPayload& sealed, std::string_view password,
                          const SealOptions& options) {
    if (sealed.ciphertext.size() < kTagSize)
        raise(Errc::AuthenticationFailed, "wrong password or corrupted data");

    auto key = derive_key(password, sealed.salt, options.kdf_iterations);
    size_t body_len = sealed.ciphertext.size() - kTagSize;

    CipherCtx c;
    if (EVP_DecryptInit_ex(c.ctx, EVP_aes_256_gcm(), nullptr, key.data(), sealed.nonce.data()) != 1)
        raise(Errc::IoError, "cipher init failed");

    uint8_t aad = sealed.flags();
    int len = 0;
    if (EVP_DecryptUpdate(c.ctx, nullptr, &len, &aad, 1) != 1)
        raise(Errc::IoError, "cipher aad failed");

    std::vector<uint8_t> decrypted(body_len);
    if (body_len > 0 &&
        EVP_DecryptUpdate(c.ctx, decrypted.data(), &len, sealed.ciphertext.data(),
                          static_cast<int>(body_len)) != 1)
        raise(Errc::AuthenticationFailed, "wrong password or corrupted data");

    uint8_t tag[kTagSize];
    std::memcpy(tag, sealed.ciphertext.data() + body_len, kTagSize);
    if (EVP_CIPHER_CTX_ctrl(c.ctx, EVP_CTRL_GCM_SET_TAG, kTagSize, tag) != 1)
        raise(Errc::IoError, "tag set failed");
    int final_len = 0;
    uint8_t final_buf[EVP_MAX_BLOCK_LENGTH];
    if (EVP_DecryptFinal_ex(c.ctx, final_buf, &final_len) != 1)
        raise(Errc::AuthenticationFailed, "wrong password or corrupted data");

    if (sealed.level == CompressionLevel::Off)
        return decrypted;
    return inflate_bytes(decrypted);
}

} // namespace stegosonic
