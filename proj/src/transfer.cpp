#include "stegosonic/transfer.hpp"

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <openssl/evp.h>
#include <openssl/rand.h>

#include "stegosonic/byteio.hpp"
#include "stegosonic/errors.hpp"

namespace stegosonic {

namespace {

constexpr size_t kChunkSize = 64 * 1024;
constexpr size_t kMaxControlFrame = 64 * 1024;
constexpr uint8_t kMsgOffer = 1;
constexpr uint8_t kMsgAccept = 2;
constexpr uint8_t kMsgReject = 3;

struct Socket {
    int fd = -1;
    Socket() = default;
    explicit Socket(int fd) : fd(fd) {}
    Socket(Socket&& other) noexcept : fd(other.fd) { other.fd = -1; }
    Socket& operator=(Socket&& other) noexcept {
        if (this != &other) {
            close_now();
            fd = other.fd;
            other.fd = -1;
        }
        return *this;
    }
    Socket(const Socket&) = delete;
    Socket& operator=(const Socket&) = delete;
    ~Socket() { close_now(); }
    void close_now() {
        if (fd >= 0) {
            ::close(fd);
            fd = -1;
        }
    }
};

void set_recv_timeout(int fd, std::chrono::seconds timeout) {
    timeval tv{};
    tv.tv_sec = timeout.count();
    setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
}

void write_all(int fd, const uint8_t* data, size_t len) {
    while (len > 0) {
        ssize_t n = ::send(fd, data, len, MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR)
                continue;
            raise(Errc::IoError, std::string("socket write failed: ") + std::strerror(errno));
        }
        data += n;
        len -= static_cast<size_t>(n);
    }
}

// False on clean EOF at the first byte; throws Timeout/IoError otherwise.
bool read_exact(int fd, uint8_t* data, size_t len) {
    size_t got = 0;
    while (got < len) {
        ssize_t n = ::recv(fd, data + got, len - got, 0);
        if (n == 0) {
            if (got == 0)
                return false;
            raise(Errc::IoError, "peer closed mid-message");
        }
        if (n < 0) {
            if (errno == EINTR)
                continue;
            if (errno == EAGAIN || errno == EWOULDBLOCK)
                raise(Errc::Timeout, "no response within the configured window");
            raise(Errc::IoError, std::string("socket read failed: ") + std::strerror(errno));
        }
        got += static_cast<size_t>(n);
    }
    return true;
}

void send_message(int fd, uint8_t type, std::span<const uint8_t> body) {
    std::vector<uint8_t> frame(4 + 1 + body.size());
    write_u32be(frame.data(), static_cast<uint32_t>(1 + body.size()));
    frame[4] = type;
    std::copy(body.begin(), body.end(), frame.begin() + 5);
    write_all(fd, frame.data(), frame.size());
}

// Empty result on clean EOF.
std::vector<uint8_t> read_message(int fd) {
    uint8_t len_buf[4];
    if (!read_exact(fd, len_buf, 4))
        return {};
    uint32_t len = read_u32be(len_buf);
    if (len == 0 || len > kMaxControlFrame)
        raise(Errc::IoError, "malformed control frame");
    std::vector<uint8_t> msg(len);
    if (!read_exact(fd, msg.data(), len))
        raise(Errc::IoError, "peer closed mid-message");
    return msg;
}

std::vector<uint8_t> encode_offer(const Offer& offer) {
    std::vector<uint8_t> body(1 + 8 + 2 + offer.file_name.size() + 8 + 32);
    uint8_t* p = body.data();
    *p++ = kProtocolVersion;
    std::memcpy(p, offer.offer_id.data(), 8);
    p += 8;
    write_u16be(p, static_cast<uint16_t>(offer.file_name.size()));
    p += 2;
    std::memcpy(p, offer.file_name.data(), offer.file_name.size());
    p += offer.file_name.size();
    write_u64be(p, offer.file_size);
    p += 8;
    std::memcpy(p, offer.checksum.data(), 32);
    return body;
}

Offer decode_offer(std::span<const uint8_t> body) {
    if (body.size() < 1 + 8 + 2)
        raise(Errc::IoError, "malformed offer");
    if (body[0] != kProtocolVersion)
        raise(Errc::IoError, "unsupported protocol version");
    Offer offer;
    std::memcpy(offer.offer_id.data(), body.data() + 1, 8);
    uint16_t name_len = read_u16be(body.data() + 9);
    if (body.size() != 1 + 8 + 2 + static_cast<size_t>(name_len) + 8 + 32)
        raise(Errc::IoError, "malformed offer");
    offer.file_name.assign(reinterpret_cast<const char*>(body.data() + 11), name_len);
    if (offer.file_name.empty() || offer.file_name.find('/') != std::string::npos ||
        offer.file_name.find('\\') != std::string::npos)
        raise(Errc::IoError, "offer carries an unsafe file name");
    offer.file_size = read_u64be(body.data() + 11 + name_len);
    std::memcpy(offer.checksum.data(), body.data() + 11 + name_len + 8, 32);
    return offer;
}

struct Digest {
    EVP_MD_CTX* ctx;
    Digest() : ctx(EVP_MD_CTX_new()) {
        if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1)
            raise(Errc::IoError, "digest init failed");
    }
    ~Digest() { EVP_MD_CTX_free(ctx); }
    void update(const uint8_t* data, size_t len) { EVP_DigestUpdate(ctx, data, len); }
    std::array<uint8_t, 32> final() {
        std::array<uint8_t, 32> out{};
        unsigned int len = 0;
        EVP_DigestFinal_ex(ctx, out.data(), &len);
        return out;
    }
};

Socket connect_to(const std::string& host, uint16_t port, std::chrono::seconds timeout) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* res = nullptr;
    if (getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res) != 0 || !res)
        raise(Errc::ConnectionRefused, "cannot resolve " + host);

    Socket sock;
    int last_errno = ECONNREFUSED;
    for (addrinfo* ai = res; ai; ai = ai->ai_next) {
        int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
        if (fd < 0)
            continue;
        if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
            sock = Socket(fd);
            break;
        }
        last_errno = errno;
        ::close(fd);
    }
    freeaddrinfo(res);
    if (sock.fd < 0)
        raise(Errc::ConnectionRefused,
              host + ":" + std::to_string(port) + " (" + std::strerror(last_errno) + ")");
    set_recv_timeout(sock.fd, timeout);
    return sock;
}

std::string peer_name(int fd) {
    sockaddr_storage addr{};
    socklen_t len = sizeof(addr);
    if (getpeername(fd, reinterpret_cast<sockaddr*>(&addr), &len) != 0)
        return "?";
    char buf[INET6_ADDRSTRLEN] = {};
    if (addr.ss_family == AF_INET)
        inet_ntop(AF_INET, &reinterpret_cast<sockaddr_in*>(&addr)->sin_addr, buf, sizeof(buf));
    else if (addr.ss_family == AF_INET6)
        inet_ntop(AF_INET6, &reinterpret_cast<sockaddr_in6*>(&addr)->sin6_addr, buf, sizeof(buf));
    return buf;
}

// Listening socket bound to the given port (0 = ephemeral); reports the
// bound port back through `port`.
Socket listen_on(uint16_t& port) {
    int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd < 0)
        raise(Errc::IoError, "socket creation failed");
    Socket sock(fd);
    int reuse = 1;
    setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &reuse, sizeof(reuse));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = INADDR_ANY;
    addr.sin_port = htons(port);
    if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        if (errno == EADDRINUSE)
            raise(Errc::PortInUse, "port " + std::to_string(port) + " is already in use");
        raise(Errc::IoError, std::string("bind failed: ") + std::strerror(errno));
    }
    if (::listen(fd, 16) != 0)
        raise(Errc::IoError, std::string("listen failed: ") + std::strerror(errno));
    socklen_t len = sizeof(addr);
    getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
    port = ntohs(addr.sin_port);
    return sock;
}

} // namespace

const char* session_state_name(SessionState state) noexcept {
    switch (state) {
    case SessionState::Offered: return "Offered";
    case SessionState::Accepted: return "Accepted";
    case SessionState::Rejected: return "Rejected";
    case SessionState::Streaming: return "Streaming";
    case SessionState::Complete: return "Complete";
    case SessionState::Failed: return "Failed";
    }
    return "?";
}

std::array<uint8_t, 32> sha256_bytes(std::span<const uint8_t> bytes) {
    Digest d;
    d.update(bytes.data(), bytes.size());
    return d.final();
}

std::array<uint8_t, 32> sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        raise(Errc::IoError, "cannot open " + path.string());
    Digest d;
    char buf[kChunkSize];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0)
        d.update(reinterpret_cast<const uint8_t*>(buf), static_cast<size_t>(in.gcount()));
    return d.final();
}

TransferResult send_file(const std::string& host, const std::filesystem::path& path,
                         const SendOptions& options) {
    std::error_code ec;
    uint64_t size = std::filesystem::file_size(path, ec);
    if (ec)
        raise(Errc::IoError, "cannot stat " + path.string());

    Offer offer;
    offer.file_name = path.filename().string();
    offer.file_size = size;
    offer.checksum = sha256_file(path);
    if (RAND_bytes(offer.offer_id.data(), offer.offer_id.size()) != 1)
        raise(Errc::IoError, "system randomness unavailable");

    Socket control = connect_to(host, options.control_port, options.timeout);
    send_message(control.fd, kMsgOffer, encode_offer(offer));

    std::vector<uint8_t> reply = read_message(control.fd);
    if (reply.empty())
        raise(Errc::IoError, "receiver closed the control connection");

    TransferResult result;
    if (reply[0] == kMsgReject) {
        if (reply.size() != 9 || std::memcmp(reply.data() + 1, offer.offer_id.data(), 8) != 0)
            raise(Errc::IoError, "malformed reject");
        result.state = SessionState::Rejected;
        return result;
    }
    if (reply[0] != kMsgAccept || reply.size() != 11 ||
        std::memcmp(reply.data() + 1, offer.offer_id.data(), 8) != 0)
        raise(Errc::IoError, "malformed accept");
    result.data_port = read_u16be(reply.data() + 9);
    result.state = SessionState::Streaming;

    Socket data = connect_to(host, result.data_port, options.timeout);
    std::ifstream in(path, std::ios::binary);
    if (!in)
        raise(Errc::IoError, "cannot open " + path.string());

    std::vector<uint8_t> chunk(4 + kChunkSize);
    while (result.bytes_moved < size) {
        size_t want = std::min<uint64_t>(kChunkSize, size - result.bytes_moved);
        if (!in.read(reinterpret_cast<char*>(chunk.data() + 4), static_cast<std::streamsize>(want)))
            raise(Errc::IoError, "read failed on " + path.string());
        write_u32be(chunk.data(), static_cast<uint32_t>(want));
        write_all(data.fd, chunk.data(), 4 + want);
        result.bytes_moved += want;
    }
    uint8_t end_marker[4] = {0, 0, 0, 0};
    write_all(data.fd, end_marker, 4);

    uint8_t status = 0;
    if (!read_exact(data.fd, &status, 1))
        raise(Errc::IoError, "receiver closed before confirming the digest");
    if (status != 1) {
        result.state = SessionState::Failed;
        raise(Errc::ChecksumMismatch, "receiver-side digest differs; transfer failed");
    }
    result.state = SessionState::Complete;
    return result;
}

ReceiveDaemon::ReceiveDaemon(ReceiveConfig config, DecisionSource decision)
    : config_(std::move(config)), decision_(std::move(decision)) {
    uint16_t port = config_.control_port;
    Socket sock = listen_on(port);
    listen_fd_ = sock.fd;
    sock.fd = -1; // ownership moves to the daemon
    bound_port_ = port;
}

ReceiveDaemon::~ReceiveDaemon() {
    stop();
}

void ReceiveDaemon::start() {
    accept_thread_ = std::thread(&ReceiveDaemon::accept_loop, this);
}

void ReceiveDaemon::stop() {
    bool expected = false;
    if (!stopping_.compare_exchange_strong(expected, true)) {
        if (accept_thread_.joinable())
            accept_thread_.join();
        return;
    }
    if (listen_fd_ >= 0) {
        ::shutdown(listen_fd_, SHUT_RDWR);
        ::close(listen_fd_);
        listen_fd_ = -1;
    }
    if (accept_thread_.joinable())
        accept_thread_.join();
    std::vector<std::thread> sessions;
    {
        std::lock_guard<std::mutex> lock(sessions_mutex_);
        sessions.swap(sessions_);
    }
    for (auto& t : sessions)
        if (t.joinable())
            t.join();
}

DaemonStats ReceiveDaemon::stats() const {
    std::lock_guard<std::mutex> lock(stats_mutex_);
    return stats_;
}

void ReceiveDaemon::accept_loop() {
    for (;;) {
        int fd = ::accept(listen_fd_, nullptr, nullptr);
        if (fd < 0) {
            if (errno == EINTR)
                continue;
            return; // listener closed by stop()
        }
        std::string peer = peer_name(fd);
        std::lock_guard<std::mutex> lock(sessions_mutex_);
        sessions_.emplace_back(&ReceiveDaemon::run_session, this, fd, std::move(peer));
    }
}

void ReceiveDaemon::run_session(int control_fd, std::string peer) {
    Socket control(control_fd);
    set_recv_timeout(control.fd, config_.session_timeout);

    std::filesystem::path partial;
    bool complete = false;
    bool rejected = false;
    [&] {
    try {
        std::vector<uint8_t> msg = read_message(control.fd);
        if (msg.empty() || msg[0] != kMsgOffer)
            return;
        Offer offer = decode_offer(std::span(msg).subspan(1));

        bool accept;
        {
            std::lock_guard<std::mutex> lock(decision_mutex_);
            accept = decision_(offer, peer);
        }
        if (!accept) {
            std::vector<uint8_t> body(offer.offer_id.begin(), offer.offer_id.end());
            send_message(control.fd, kMsgReject, body);
            rejected = true;
            return;
        }

        uint16_t data_port = 0;
        Socket data_listener = listen_on(data_port);
        std::vector<uint8_t> body(offer.offer_id.begin(), offer.offer_id.end());
        body.resize(10);
        write_u16be(body.data() + 8, data_port);
        send_message(control.fd, kMsgAccept, body);

        set_recv_timeout(data_listener.fd, config_.session_timeout);
        int data_fd = ::accept(data_listener.fd, nullptr, nullptr);
        if (data_fd < 0)
            raise(Errc::Timeout, "sender never connected to the data port");
        Socket data(data_fd);
        set_recv_timeout(data.fd, config_.session_timeout);

        std::string id_hex;
        for (uint8_t b : offer.offer_id) {
            static const char* digits = "0123456789abcdef";
            id_hex.push_back(digits[b >> 4]);
            id_hex.push_back(digits[b & 0xF]);
        }
        partial = config_.download_dir / (".stegosonic-partial-" + id_hex);
        std::ofstream out(partial, std::ios::binary | std::ios::trunc);
        if (!out)
            raise(Errc::IoError, "cannot create " + partial.string());

        Digest digest;
        uint64_t received = 0;
        std::vector<uint8_t> chunk(kChunkSize);
        for (;;) {
            uint8_t len_buf[4];
            if (!read_exact(data.fd, len_buf, 4))
                raise(Errc::IoError, "sender closed mid-stream");
            uint32_t len = read_u32be(len_buf);
            if (len == 0)
                break;
            if (len > kChunkSize)
                raise(Errc::IoError, "oversized chunk");
            if (!read_exact(data.fd, chunk.data(), len))
                raise(Errc::IoError, "sender closed mid-chunk");
            out.write(reinterpret_cast<const char*>(chunk.data()), len);
            if (!out) {
                uint8_t status = 0;
                write_all(data.fd, &status, 1);
                raise(Errc::DiskFull, "write failed for " + partial.string());
            }
            digest.update(chunk.data(), len);
            received += len;
        }
        out.close();

        bool ok = received == offer.file_size && digest.final() == offer.checksum;
        uint8_t status = ok ? 1 : 0;
        if (ok) {
            std::filesystem::path target = config_.download_dir / offer.file_name;
            for (int n = 1; std::filesystem::exists(target); ++n)
                target = config_.download_dir / (offer.file_name + "." + std::to_string(n));
            std::filesystem::rename(partial, target);
            partial.clear();
            complete = true;
        }
        write_all(data.fd, &status, 1);
        if (!ok)
            raise(Errc::ChecksumMismatch, "stream digest does not match the offer");
    } catch (const std::exception&) {
        // Session failures are isolated; the daemon keeps serving.
    }
    }();

    if (!partial.empty()) {
        std::error_code ec;
        std::filesystem::remove(partial, ec);
    }
    std::lock_guard<std::mutex> lock(stats_mutex_);
    if (complete)
        ++stats_.completed;
    else if (rejected)
        ++stats_.rejected;
    else
        ++stats_.failed;
}

} // namespace stegosonic
