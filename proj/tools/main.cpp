// stegosonic command line: encode/decode/remove hidden documents in WAV and
// MP3 carriers, inspect capacity and distortion, and move files over the LAN.

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <termios.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "stegosonic/analysis.hpp"
#include "stegosonic/capacity.hpp"
#include "stegosonic/errors.hpp"
#include "stegosonic/injection_codec.hpp"
#include "stegosonic/lsb_codec.hpp"
#include "stegosonic/mp3_codec.hpp"
#include "stegosonic/payload.hpp"
#include "stegosonic/text_codec.hpp"
#include "stegosonic/transfer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace stegosonic;

namespace {

std::vector<uint8_t> read_file_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        raise(Errc::IoError, "cannot open " + path.string());
    std::vector<uint8_t> bytes{std::istreambuf_iterator<char>(in),
                               std::istreambuf_iterator<char>()};
    if (in.bad())
        raise(Errc::IoError, "read failed for " + path.string());
    return bytes;
}

// Write-to-temp plus rename, so no error path leaves a partial output file.
void atomic_write(const fs::path& path, std::span<const uint8_t> bytes) {
    fs::path dir = path.parent_path().empty() ? "." : path.parent_path();
    std::random_device rd;
    fs::path tmp = dir / (path.filename().string() + ".tmp-" + std::to_string(::getpid()) + "-" +
                          std::to_string(rd() % 100000));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            raise(Errc::IoError, "cannot create " + tmp.string());
        }
        out.write(reinterpret_cast<const char*>(bytes.data()),
                  static_cast<std::streamsize>(bytes.size()));
        if (!out) {
            out.close();
            std::error_code ec;
            fs::remove(tmp, ec);
            raise(Errc::IoError, "write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        raise(Errc::IoError, "cannot move output into place at " + path.string());
    }
}

std::string prompt_password_no_echo() {
    std::cerr << "Password: " << std::flush;
    termios before{};
    tcgetattr(STDIN_FILENO, &before);
    termios silent = before;
    silent.c_lflag &= ~static_cast<tcflag_t>(ECHO);
    tcsetattr(STDIN_FILENO, TCSANOW, &silent);
    std::string password;
    std::getline(std::cin, password);
    tcsetattr(STDIN_FILENO, TCSANOW, &before);
    std::cerr << "\n";
    return password;
}

// Flag value, then STEGOSONIC_PASSWORD, then an interactive no-echo prompt.
std::string resolve_password(const std::string& flag_value) {
    if (!flag_value.empty())
        return flag_value;
    if (const char* env = std::getenv("STEGOSONIC_PASSWORD"); env && *env)
        return env;
    if (isatty(STDIN_FILENO))
        return prompt_password_no_echo();
    raise(Errc::EmptyPassword,
          "no password given (use --password, STEGOSONIC_PASSWORD or a terminal)");
}

uint16_t env_port(uint16_t fallback) {
    const char* env = std::getenv("STEGOSONIC_PORT");
    if (!env || !*env)
        return fallback;
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (*end || v == 0 || v > 65535)
        raise(Errc::IoError, "STEGOSONIC_PORT is not a valid port");
    return static_cast<uint16_t>(v);
}

CompressionLevel parse_level(const std::string& name) {
    if (name == "off")
        return CompressionLevel::Off;
    if (name == "low")
        return CompressionLevel::Low;
    if (name == "medium")
        return CompressionLevel::Medium;
    return CompressionLevel::High;
}

PayloadKind kind_from_extension(const fs::path& path) {
    std::string ext = path.extension().string();
    for (auto& c : ext)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (ext == ".txt")
        return PayloadKind::Text;
    if (ext == ".doc" || ext == ".docx")
        return PayloadKind::Doc;
    if (ext == ".pdf")
        return PayloadKind::Pdf;
    return PayloadKind::Raw;
}

const char* kind_name(PayloadKind kind) {
    switch (kind) {
    case PayloadKind::Text: return "text";
    case PayloadKind::Doc: return "doc";
    case PayloadKind::Pdf: return "pdf";
    case PayloadKind::Raw: return "raw";
    }
    return "?";
}

void print_capacity_line(const CapacityReport& rep, const std::string& label) {
    if (rep.max_sealed_bytes == 0xFFFFFFFFull)
        std::cout << "Capacity (" << label
                  << "): unbounded (limited only by the 32-bit length record)\n";
    else
        std::cout << "Capacity (" << label << "): " << rep.max_sealed_bytes
                  << " sealed bytes (~" << rep.estimated_max_plaintext_bytes
                  << " plaintext bytes before compression)\n";
}

struct EncodeArgs {
    std::string method;
    std::string in, out, payload, text, password, compress = "medium";
    uint32_t skip = 3;
    bool text_given = false;
};

int run_encode(const EncodeArgs& args) {
    auto carrier = read_file_bytes(args.in);
    CompressionLevel level = parse_level(args.compress);
    std::string password = resolve_password(args.password);

    PayloadKind kind;
    std::vector<uint8_t> plaintext;
    if (args.text_given) {
        kind = PayloadKind::Text;
        plaintext = utf8_to_utf16le(args.text);
    } else {
        kind = kind_from_extension(args.payload);
        plaintext = read_file_bytes(args.payload);
    }

    std::vector<uint8_t> encoded;
    if (args.method == "lsb") {
        bool dense = level != CompressionLevel::Off;
        WavFile wav = parse_wav(carrier);
        for (const auto& d : wav.diagnostics)
            std::cerr << "note: " << d << "\n";
        print_capacity_line(report(carrier, dense ? Method::LsbDense : Method::LsbSparse),
                            dense ? "lsb, dense" : "lsb, sparse");
        SealedPayload sealed = seal(plaintext, password, level, kind);
        encoded = write_wav(embed_lsb(wav, sealed, dense));
        std::cout << "Sealed " << plaintext.size() << " payload bytes into "
                  << sealed.sealed_size() << " bytes\n";
    } else if (args.method == "inject") {
        WavFile wav = parse_wav(carrier);
        print_capacity_line(report(carrier, Method::Injection), "injection");
        SealedPayload sealed = seal(plaintext, password, level, kind);
        encoded = embed_injection(wav, sealed);
        std::cout << "Sealed " << plaintext.size() << " payload bytes into "
                  << sealed.sealed_size() << " bytes\n";
    } else {
        Mp3Stream stream = parse_mp3(carrier);
        for (const auto& d : stream.diagnostics)
            std::cerr << "note: " << d << "\n";
        Mp3EmbedConfig cfg{args.skip};
        print_capacity_line(report(carrier, Method::Mp3, cfg),
                            "mp3, skip " + std::to_string(args.skip));
        SealedPayload sealed = seal(plaintext, password, level, kind);
        encoded = write_mp3(embed_mp3(stream, sealed, cfg));
        std::cout << "Sealed " << plaintext.size() << " payload bytes into "
                  << sealed.sealed_size() << " bytes\n";
    }

    atomic_write(args.out, encoded);
    std::cout << "Encoded carrier written to " << args.out << " (" << encoded.size()
              << " bytes)\n";
    return 0;
}

struct DecodeArgs {
    std::string method;
    std::string in, out, password;
    uint32_t skip = 3;
};

int run_decode(const DecodeArgs& args) {
    auto carrier = read_file_bytes(args.in);
    std::string password = resolve_password(args.password);
    std::cout << "Carrier: " << args.in << " (" << carrier.size() << " bytes, method "
              << args.method << ")\n";

    SealedPayload sealed;
    if (args.method == "lsb")
        sealed = extract_lsb(parse_wav(carrier));
    else if (args.method == "inject")
        sealed = extract_injection(carrier);
    else
        sealed = extract_mp3(parse_mp3(carrier), Mp3EmbedConfig{args.skip});

    std::cout << "Found a sealed payload of " << sealed.sealed_size() << " bytes (kind: "
              << kind_name(sealed.kind) << ")\n";
    std::vector<uint8_t> plaintext = open(sealed, password);

    if (!args.out.empty()) {
        atomic_write(args.out, plaintext);
        std::cout << "Decoded " << plaintext.size() << " bytes to " << args.out << "\n";
    } else if (sealed.kind == PayloadKind::Text) {
        std::cout << utf16le_to_utf8(plaintext) << "\n";
    } else {
        std::cerr << "error: --out is required for non-text payloads\n";
        return 1;
    }
    return 0;
}

struct RemoveArgs {
    std::string method;
    std::string in, out;
    bool yes = false;
};

int run_remove(const RemoveArgs& args) {
    auto carrier = read_file_bytes(args.in);
    std::cout << "Carrier: " << args.in << " (" << carrier.size() << " bytes, method "
              << args.method << ")\n";
    if (!args.yes) {
        std::cerr << "Remove the hidden message from " << args.in << "? [y/N] " << std::flush;
        std::string answer;
        std::getline(std::cin, answer);
        if (answer != "y" && answer != "Y" && answer != "yes") {
            std::cout << "Removal cancelled.\n";
            return 0;
        }
    }

    std::vector<uint8_t> cleaned;
    if (args.method == "lsb")
        cleaned = write_wav(remove_message(parse_wav(carrier)));
    else
        cleaned = remove_injection(carrier);

    atomic_write(args.out, cleaned);
    std::cout << "Removed hidden message; clean carrier written to " << args.out << " ("
              << cleaned.size() << " bytes)\n";
    return 0;
}

struct CapacityArgs {
    std::string method;
    std::string in;
    uint32_t skip = 3;
    bool as_json = false;
};

int run_capacity(const CapacityArgs& args) {
    auto carrier = read_file_bytes(args.in);

    std::vector<std::pair<std::string, CapacityReport>> reports;
    if (args.method == "lsb") {
        reports.emplace_back("lsb-dense", report(carrier, Method::LsbDense));
        reports.emplace_back("lsb-sparse", report(carrier, Method::LsbSparse));
    } else if (args.method == "inject") {
        reports.emplace_back("injection", report(carrier, Method::Injection));
    } else {
        reports.emplace_back("mp3", report(carrier, Method::Mp3, Mp3EmbedConfig{args.skip}));
    }

    if (args.as_json) {
        json out;
        out["carrier"] = args.in;
        out["carrier_bytes"] = carrier.size();
        out["reports"] = json::array();
        for (const auto& [name, rep] : reports)
            out["reports"].push_back({{"method", name},
                                      {"max_sealed_bytes", rep.max_sealed_bytes},
                                      {"estimated_max_plaintext_bytes",
                                       rep.estimated_max_plaintext_bytes}});
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "Carrier: " << args.in << " (" << carrier.size() << " bytes)\n";
        for (const auto& [name, rep] : reports)
            print_capacity_line(rep, name);
    }
    return 0;
}

int run_compare(const std::string& a_path, const std::string& b_path, bool as_json) {
    auto a = read_file_bytes(a_path);
    auto b = read_file_bytes(b_path);
    if (!as_json)
        std::cout << "Comparing " << a_path << " (" << a.size() << " bytes) with " << b_path
                  << " (" << b.size() << " bytes)\n";
    DiffReport rep = compare_files(a, b);
    if (as_json) {
        json out{{"identical", rep.identical},
                 {"differing_byte_count", rep.differing_byte_count},
                 {"differing_bit_count", rep.differing_bit_count}};
        if (!rep.identical)
            out["first_diff_offset"] = rep.first_diff_offset;
        std::cout << out.dump(2) << "\n";
    } else if (rep.identical) {
        std::cout << "Files are identical.\n";
    } else {
        std::cout << "Files differ: first difference at offset " << rep.first_diff_offset << ", "
                  << rep.differing_byte_count << " differing bytes, " << rep.differing_bit_count
                  << " differing bits.\n";
    }
    return 0;
}

int run_distortion(const std::string& orig_path, const std::string& enc_path, bool as_json) {
    WavFile original = parse_wav(read_file_bytes(orig_path));
    WavFile encoded = parse_wav(read_file_bytes(enc_path));
    if (!as_json)
        std::cout << "Measuring distortion of " << enc_path << " against " << orig_path << "\n";
    DistortionReport rep = distortion(original, encoded);
    if (as_json) {
        json out{{"max_sample_delta", rep.max_sample_delta},
                 {"rms_delta", rep.rms_delta},
                 {"modified_sample_fraction", rep.modified_sample_fraction}};
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "Max sample delta: " << rep.max_sample_delta << "\n"
                  << "RMS delta: " << rep.rms_delta << "\n"
                  << "Modified sample fraction: " << rep.modified_sample_fraction << "\n";
    }
    return 0;
}

int run_send(const std::string& host, const std::string& file, uint16_t port, uint32_t timeout) {
    SendOptions opt;
    opt.control_port = port;
    opt.timeout = std::chrono::seconds(timeout);
    std::cout << "Offering " << file << " to " << host << ":" << port << "\n";
    TransferResult result = send_file(host, file, opt);
    if (result.state == SessionState::Rejected)
        raise(Errc::OfferRejected, "the receiver declined the transfer");
    std::cout << "Transfer complete: " << result.bytes_moved << " bytes (data port "
              << result.data_port << ")\n";
    return 0;
}

volatile std::sig_atomic_t g_stop_requested = 0;

int run_recv(bool auto_accept, const std::string& dir, uint16_t port) {
    ReceiveConfig cfg;
    cfg.control_port = port;
    cfg.download_dir = dir;

    DecisionSource decision;
    if (auto_accept) {
        decision = [](const Offer& offer, const std::string& peer) {
            std::cout << "Accepting " << offer.file_name << " (" << offer.file_size
                      << " bytes) from " << peer << "\n";
            return true;
        };
    } else {
        decision = [](const Offer& offer, const std::string& peer) {
            std::cerr << "Incoming file " << offer.file_name << " (" << offer.file_size
                      << " bytes) from " << peer << ". Accept? [y/N] " << std::flush;
            std::string answer;
            std::getline(std::cin, answer);
            return answer == "y" || answer == "Y" || answer == "yes";
        };
    }

    ReceiveDaemon daemon(std::move(cfg), std::move(decision));
    daemon.start();
    std::cout << "Listening on port " << daemon.control_port() << "; downloads go to " << dir
              << " (Ctrl-C to stop)\n";

    std::signal(SIGINT, [](int) { g_stop_requested = 1; });
    std::signal(SIGTERM, [](int) { g_stop_requested = 1; });
    while (!g_stop_requested)
        ::usleep(100000);

    std::cout << "Stopping...\n";
    daemon.stop();
    DaemonStats stats = daemon.stats();
    std::cout << "Sessions: " << stats.completed << " complete, " << stats.rejected
              << " rejected, " << stats.failed << " failed\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stegosonic: hide, retrieve and remove encrypted documents inside WAV and MP3 "
                 "audio, and move audio files across the LAN"};
    app.require_subcommand(1);

    const std::vector<std::string> kAllMethods{"lsb", "inject", "mp3"};
    const std::vector<std::string> kRemoveMethods{"lsb", "inject"};

    EncodeArgs enc;
    auto* encode = app.add_subcommand("encode", "Hide a document or text message in a carrier");
    encode->add_option("--method", enc.method, "Embedding method")
        ->required()
        ->check(CLI::IsMember(kAllMethods));
    encode->add_option("--in", enc.in, "Carrier audio file")->required();
    auto* payload_opt = encode->add_option("--payload", enc.payload, "Document to hide");
    auto* text_opt = encode->add_option("--text", enc.text, "Text message to hide");
    payload_opt->excludes(text_opt);
    encode->add_option("--out", enc.out, "Output path for the encoded carrier")->required();
    encode->add_option("--password", enc.password,
                       "Password (prefer STEGOSONIC_PASSWORD or the prompt)");
    encode->add_option("--compress", enc.compress, "Compression level (default medium)")
        ->check(CLI::IsMember({"off", "low", "medium", "high"}));
    encode->add_option("--skip", enc.skip, "MP3 frames left untouched between embedded ones");

    DecodeArgs dec;
    auto* decode = app.add_subcommand("decode", "Extract and decrypt a hidden payload");
    decode->add_option("--method", dec.method, "Embedding method")
        ->required()
        ->check(CLI::IsMember(kAllMethods));
    decode->add_option("--in", dec.in, "Encoded carrier")->required();
    decode->add_option("--out", dec.out, "Where to write the recovered payload");
    decode->add_option("--password", dec.password, "Password");
    decode->add_option("--skip", dec.skip, "Skip value used at encode time (mp3)");

    RemoveArgs rem;
    auto* remove = app.add_subcommand("remove", "Destroy the hidden message, keep the audio");
    remove->add_option("--method", rem.method, "Embedding method")
        ->required()
        ->check(CLI::IsMember(kRemoveMethods));
    remove->add_option("--in", rem.in, "Encoded carrier")->required();
    remove->add_option("--out", rem.out, "Output path for the cleaned carrier")->required();
    remove->add_flag("--yes", rem.yes, "Skip the confirmation prompt");

    CapacityArgs cap;
    auto* capacity = app.add_subcommand("capacity", "Report how much a carrier can hold");
    capacity->add_option("--method", cap.method, "Embedding method")
        ->required()
        ->check(CLI::IsMember(kAllMethods));
    capacity->add_option("--in", cap.in, "Carrier audio file")->required();
    capacity->add_option("--skip", cap.skip, "MP3 skip value");
    capacity->add_flag("--json", cap.as_json, "Machine-readable output");

    std::string cmp_a, cmp_b;
    bool cmp_json = false;
    auto* compare = app.add_subcommand("compare", "Bit-exact comparison of two files");
    compare->add_option("a", cmp_a, "First file")->required();
    compare->add_option("b", cmp_b, "Second file")->required();
    compare->add_flag("--json", cmp_json, "Machine-readable output");

    std::string dist_orig, dist_enc;
    bool dist_json = false;
    auto* dist = app.add_subcommand("distortion", "Sample-level distortion between two WAVs");
    dist->add_option("original", dist_orig, "Original carrier")->required();
    dist->add_option("encoded", dist_enc, "Encoded carrier")->required();
    dist->add_flag("--json", dist_json, "Machine-readable output");

    std::string send_host, send_file_path;
    uint16_t send_port = 0;
    uint32_t send_timeout = 60;
    auto* send = app.add_subcommand("send", "Offer a file to a receiver on the LAN");
    send->add_option("host", send_host, "Receiver address")->required();
    send->add_option("file", send_file_path, "File to send")->required();
    send->add_option("--port", send_port, "Control port (default 47555 or STEGOSONIC_PORT)");
    send->add_option("--timeout", send_timeout, "Seconds to wait for accept/reject");

    bool recv_auto = false;
    std::string recv_dir;
    uint16_t recv_port = 0;
    auto* recv = app.add_subcommand("recv", "Receive files offered by LAN peers");
    recv->add_flag("--auto-accept", recv_auto, "Accept every offer without prompting");
    recv->add_option("--dir", recv_dir, "Download directory (default . or STEGOSONIC_DIR)");
    recv->add_option("--port", recv_port, "Control port (default 47555 or STEGOSONIC_PORT)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (encode->parsed()) {
            enc.text_given = text_opt->count() > 0;
            if (!enc.text_given && enc.payload.empty()) {
                std::cerr << "error: encode needs --payload or --text\n";
                return 1;
            }
            return run_encode(enc);
        }
        if (decode->parsed())
            return run_decode(dec);
        if (remove->parsed())
            return run_remove(rem);
        if (capacity->parsed())
            return run_capacity(cap);
        if (compare->parsed())
            return run_compare(cmp_a, cmp_b, cmp_json);
        if (dist->parsed())
            return run_distortion(dist_orig, dist_enc, dist_json);
        if (send->parsed())
            return run_send(send_host, send_file_path,
                            send_port ? send_port : env_port(kDefaultControlPort), send_timeout);
        if (recv->parsed()) {
            const char* env_dir = std::getenv("STEGOSONIC_DIR");
            std::string dir = !recv_dir.empty() ? recv_dir
                              : env_dir && *env_dir ? std::string(env_dir)
                                                    : std::string(".");
            return run_recv(recv_auto, dir, recv_port ? recv_port : env_port(kDefaultControlPort));
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
