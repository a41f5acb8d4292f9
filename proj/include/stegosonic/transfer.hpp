#pragma once

#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace stegosonic {

// LAN file transfer with explicit receiver consent. One TCP control
// connection carries the offer/accept/reject handshake; accepted content
// streams over a per-offer ephemeral data port and is digest-verified end
// to end. No payload byte moves before an ACCEPT. The layer is content
// agnostic: encoded and pristine audio transfer identically.
//
// Wire format (all integers big-endian):
//   control message = u32 length, u8 type, body
//     OFFER  (1): proto_version u8, offer_id[8], name_len u16, name,
//                 size u64, sha256 digest[32]
//     ACCEPT (2): offer_id[8], data_port u16
//     REJECT (3): offer_id[8]
//   data stream  = repeated { u32 chunk_len, bytes }, chunk_len 0 ends the
//                  stream; the receiver answers one status byte (1 digest
//                  verified, 0 mismatch).

inline constexpr uint16_t kDefaultControlPort = 47555;
inline constexpr uint8_t kProtocolVersion = 1;

struct Offer {
    std::string file_name; // path-stripped, no separators
    uint64_t file_size = 0;
    std::array<uint8_t, 32> checksum{};
    std::array<uint8_t, 8> offer_id{};
};

enum class SessionState {
    Offered,
    Accepted,
    Rejected,
    Streaming,
    Complete,
    Failed,
};

const char* session_state_name(SessionState state) noexcept;

struct TransferResult {
    SessionState state = SessionState::Offered;
    uint64_t bytes_moved = 0;
    uint16_t data_port = 0;
};

struct SendOptions {
    uint16_t control_port = kDefaultControlPort;
    std::chrono::seconds timeout{60};
};

// Offers `path` to the daemon at `host`. Returns Complete or Rejected;
// throws Error(ConnectionRefused/Timeout/ChecksumMismatch/IoError).
TransferResult send_file(const std::string& host, const std::filesystem::path& path,
                         const SendOptions& options = {});

// Answers accept/reject per offer; invoked serially across sessions.
using DecisionSource = std::function<bool(const Offer& offer, const std::string& peer)>;

struct ReceiveConfig {
    uint16_t control_port = kDefaultControlPort; // 0 = OS-assigned
    std::filesystem::path download_dir = ".";
    std::chrono::seconds session_timeout{60};
};

struct DaemonStats {
    uint64_t completed = 0;
    uint64_t rejected = 0;
    uint64_t failed = 0;
};

// Control-port listener; each offer runs in its own session thread with an
// OS-assigned data port. Completed files are digest-verified and moved
// atomically into the download directory; failed sessions leave nothing.
class ReceiveDaemon {
public:
    // Binds the control socket; throws Error(PortInUse) when taken.
    ReceiveDaemon(ReceiveConfig config, DecisionSource decision);
    ~ReceiveDaemon();

    ReceiveDaemon(const ReceiveDaemon&) = delete;
    ReceiveDaemon& operator=(const ReceiveDaemon&) = delete;

    void start();
    void stop(); // closes the listener, joins all session threads

    uint16_t control_port() const { return bound_port_; }
    DaemonStats stats() const;

private:
    void accept_loop();
    void run_session(int control_fd, std::string peer);

    ReceiveConfig config_;
    DecisionSource decision_;
    int listen_fd_ = -1;
    uint16_t bound_port_ = 0;
    std::thread accept_thread_;
    std::atomic<bool> stopping_{false};

    std::mutex sessions_mutex_;
    std::vector<std::thread> sessions_;
    std::mutex decision_mutex_;

    mutable std::mutex stats_mutex_;
    DaemonStats stats_;
};

// SHA-256 of a byte buffer / file (the offer checksum).
std::array<uint8_t, 32> sha256_bytes(std::span<const uint8_t> bytes);
std::array<uint8_t, 32> sha256_file(const std::filesystem::path& path);

} // namespace stegosonic
