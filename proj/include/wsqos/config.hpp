#pragma once

#include <cstdint>
#include <string>

namespace wsqos {

// key=value text file, '#' comments. Every key can be overridden by an
// environment variable named WSQOS_<KEY> (uppercased).
struct Config {
    std::string journal_path = "wsqos.journal";
    std::string model_path;  // empty: model kept in memory only
    std::string listen_address = "127.0.0.1";
    int listen_port = 8080;
    double credibility_tolerance = 0.10;
    std::string scorer = "min-max";            // or "rank-paper"
    std::string reputation_mode = "literal";   // or "normalized"
    std::uint64_t seed = 42;
    double split_ratio = 0.8;
    int fetch_timeout_ms = 5000;
    int fetch_parallelism = 8;
    bool fetch_on_publish = true;

    static Config load(const std::string& path);       // missing file: defaults
    static Config from_text(std::string_view text);
    void apply_environment();                           // WSQOS_* overrides
    std::string to_text() const;
};

}  // namespace wsqos
