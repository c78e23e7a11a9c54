#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace conceptmap {

// FNV-1a over raw bytes; used for config hashes and input fingerprints.
std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t fnv1a64(const std::string& s);

// "size:<bytes>,fnv1a64:<hex>" for a file on disk.
std::string file_fingerprint(const std::string& path);

// Writes content to `path` atomically (temp file + rename).
void atomic_write(const std::string& path, const std::string& content);

// Provenance sidecar emitted next to every command's outputs. Timestamps are
// informational only; determinism comparisons exclude this file.
struct RunManifest {
    std::string command_line;
    std::string config_path;
    std::string config_hash;
    std::vector<std::pair<std::string, std::string>> inputs; // path -> fingerprint
    std::vector<std::string> outputs;
    std::uint64_t seed = 0;
    std::string tool_version;
    std::string started_at;
    std::string finished_at;

    void add_input(const std::string& path);
    std::string to_json() const;
    void write(const std::string& path) const;
};

std::string iso8601_now();
std::string tool_version_string();

} // namespace conceptmap
