#include "cmcs/manifest.hpp"

#include <nlohmann/json.hpp>

namespace cmcs {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string fnv1a64_hex(std::string_view bytes) {
    static const char* digits = "0123456789abcdef";
    std::uint64_t h = fnv1a64(bytes);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[std::size_t(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

std::string RunManifest::to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["config_digest"] = config_digest;
    j["seed"] = seed;
    j["version"] = version;
    j["data_window"] = data_window;
    return j.dump();
}

std::string RunManifest::comment_line() const { return "# manifest: " + to_json() + "\n"; }

}  // namespace cmcs
