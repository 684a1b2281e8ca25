#include "wsqos/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "wsqos/errors.hpp"
#include "wsqos/text.hpp"

namespace wsqos {

namespace {

std::map<std::string, std::function<void(Config&, const std::string&)>> setters() {
    auto int_value = [](const std::string& raw, const char* key) {
        auto v = parse_integer(raw);
        if (!v) raise(ErrorCode::ConfigError, std::string(key) + " must be an integer");
        return *v;
    };
    auto double_value = [](const std::string& raw, const char* key) {
        auto v = parse_double(raw);
        if (!v) raise(ErrorCode::ConfigError, std::string(key) + " must be numeric");
        return *v;
    };
    return {
        {"journal_path", [](Config& c, const std::string& v) { c.journal_path = v; }},
        {"model_path", [](Config& c, const std::string& v) { c.model_path = v; }},
        {"listen_address", [](Config& c, const std::string& v) { c.listen_address = v; }},
        {"listen_port",
         [int_value](Config& c, const std::string& v) {
             c.listen_port = static_cast<int>(int_value(v, "listen_port"));
         }},
        {"credibility_tolerance",
         [double_value](Config& c, const std::string& v) {
             c.credibility_tolerance = double_value(v, "credibility_tolerance");
         }},
        {"scorer",
         [](Config& c, const std::string& v) {
             if (v != "min-max" && v != "rank-paper") {
                 raise(ErrorCode::ConfigError, "scorer must be min-max or rank-paper");
             }
             c.scorer = v;
         }},
        {"reputation_mode",
         [](Config& c, const std::string& v) {
             if (v != "literal" && v != "normalized") {
                 raise(ErrorCode::ConfigError,
                       "reputation_mode must be literal or normalized");
             }
             c.reputation_mode = v;
         }},
        {"seed",
         [int_value](Config& c, const std::string& v) {
             c.seed = static_cast<std::uint64_t>(int_value(v, "seed"));
         }},
        {"split_ratio",
         [double_value](Config& c, const std::string& v) {
             c.split_ratio = double_value(v, "split_ratio");
         }},
        {"fetch_timeout_ms",
         [int_value](Config& c, const std::string& v) {
             c.fetch_timeout_ms = static_cast<int>(int_value(v, "fetch_timeout_ms"));
         }},
        {"fetch_parallelism",
         [int_value](Config& c, const std::string& v) {
             c.fetch_parallelism = static_cast<int>(int_value(v, "fetch_parallelism"));
         }},
        {"fetch_on_publish",
         [](Config& c, const std::string& v) {
             if (v != "true" && v != "false") {
                 raise(ErrorCode::ConfigError, "fetch_on_publish must be true or false");
             }
             c.fetch_on_publish = (v == "true");
         }},
    };
}

}  // namespace

Config Config::from_text(std::string_view text) {
    Config config;
    auto keys = setters();
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string trimmed = trim_copy(line);
        if (trimmed.empty() || trimmed[0] == '#') continue;
        std::size_t eq = trimmed.find('=');
        if (eq == std::string::npos) {
            raise(ErrorCode::ConfigError,
                  "line " + std::to_string(line_no) + ": expected key=value");
        }
        std::string key = trim_copy(trimmed.substr(0, eq));
        std::string value = trim_copy(trimmed.substr(eq + 1));
        auto it = keys.find(key);
        if (it == keys.end()) {
            raise(ErrorCode::ConfigError, "unknown config key '" + key + "'");
        }
        it->second(config, value);
    }
    return config;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    Config config;
    if (in.is_open()) {
        std::stringstream buffer;
        buffer << in.rdbuf();
        config = from_text(buffer.str());
    }
    config.apply_environment();
    return config;
}

void Config::apply_environment() {
    auto keys = setters();
    for (auto& [key, setter] : keys) {
        std::string env_name = "WSQOS_" + lowercase_copy(key);
        for (char& c : env_name) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        if (const char* value = std::getenv(env_name.c_str())) {
            setter(*this, value);
        }
    }
}

std::string Config::to_text() const {
    std::ostringstream out;
    out << "journal_path=" << journal_path << '\n'
        << "model_path=" << model_path << '\n'
        << "listen_address=" << listen_address << '\n'
        << "listen_port=" << listen_port << '\n'
        << "credibility_tolerance=" << format_double(credibility_tolerance) << '\n'
        << "scorer=" << scorer << '\n'
        << "reputation_mode=" << reputation_mode << '\n'
        << "seed=" << seed << '\n'
        << "split_ratio=" << format_double(split_ratio) << '\n'
        << "fetch_timeout_ms=" << fetch_timeout_ms << '\n'
        << "fetch_parallelism=" << fetch_parallelism << '\n'
        << "fetch_on_publish=" << (fetch_on_publish ? "true" : "false") << '\n';
    return out.str();
}

}  // namespace wsqos
