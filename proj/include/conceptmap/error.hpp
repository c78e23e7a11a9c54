#pragma once

#include <stdexcept>
#include <string>

namespace conceptmap {

// Bad or inconsistent input data (norms, embeddings, graph files). CLI exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid configuration or usage. CLI exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace conceptmap
