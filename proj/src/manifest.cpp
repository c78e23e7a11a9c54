#include "conceptmap/manifest.hpp"

#include "conceptmap/error.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace conceptmap {

std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    std::uint64_t hash = 0xCBF29CE484222325ull;
    for (std::size_t i = 0; i < size; ++i) {
        hash ^= bytes[i];
        hash *= 0x100000001B3ull;
    }
    return hash;
}

std::uint64_t fnv1a64(const std::string& s) { return fnv1a64(s.data(), s.size()); }

std::string file_fingerprint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file for fingerprinting: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string content = ss.str();
    char buf[64];
    std::snprintf(buf, sizeof(buf), "size:%zu,fnv1a64:%016llx", content.size(),
                  static_cast<unsigned long long>(fnv1a64(content)));
    return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot write file: " + tmp);
        out << content;
        if (!out.good()) throw DataError("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

void RunManifest::add_input(const std::string& path) {
    inputs.emplace_back(path, file_fingerprint(path));
}

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["tool_version"] = tool_version;
    j["command_line"] = command_line;
    j["config_path"] = config_path;
    j["config_hash"] = config_hash;
    j["seed"] = seed;
    j["inputs"] = nlohmann::ordered_json::object();
    for (const auto& [path, fp] : inputs) j["inputs"][path] = fp;
    j["outputs"] = outputs;
    j["started_at"] = started_at;
    j["finished_at"] = finished_at;
    return j.dump(2);
}

void RunManifest::write(const std::string& path) const { atomic_write(path, to_json()); }

std::string iso8601_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc;
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

std::string tool_version_string() { return "conceptmap 0.1.0"; }

} // namespace conceptmap
