#include "conceptmap/embedding.hpp"

#include "conceptmap/error.hpp"
#include "conceptmap/kernels.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

namespace conceptmap {

EmbeddingTable::EmbeddingTable(std::size_t dim) : dim_(dim) {
    if (dim_ < 1) throw DataError("embedding dimension must be >= 1");
}

std::span<const double> EmbeddingTable::vector(const std::string& token) const {
    auto it = index_.find(token);
    if (it == index_.end()) throw DataError("token not in embedding table: " + token);
    return row(it->second);
}

void EmbeddingTable::insert(const std::string& token, std::span<const double> v) {
    if (token.empty()) throw DataError("empty token in embedding table");
    if (v.size() != dim_) {
        throw DataError("vector for '" + token + "' has " + std::to_string(v.size()) +
                        " components, expected " + std::to_string(dim_));
    }
    for (double x : v) {
        if (!std::isfinite(x)) throw DataError("non-finite component in vector for '" + token + "'");
    }
    if (!index_.emplace(token, tokens_.size()).second) {
        throw DataError("duplicate token in embedding table: " + token);
    }
    tokens_.push_back(token);
    data_.insert(data_.end(), v.begin(), v.end());
}

namespace {

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool parse_u64(std::string_view s, std::uint64_t& out) {
    if (s.empty()) return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
}

bool parse_f64(std::string_view s, double& out) {
    if (s.empty()) return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
}

} // namespace

EmbeddingTable parse_embeddings(std::istream& in,
                                const std::unordered_set<std::string>* vocab_filter) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("embeddings: empty stream");
    strip_cr(line);

    std::uint64_t count = 0, dim = 0;
    {
        const auto sp = line.find(' ');
        if (sp == std::string::npos || !parse_u64({line.data(), sp}, count) ||
            !parse_u64({line.data() + sp + 1, line.size() - sp - 1}, dim) || dim < 1) {
            throw DataError("embeddings: malformed header line '" + line + "'");
        }
    }

    EmbeddingTable table(static_cast<std::size_t>(dim));
    table.set_declared_count(count);

    std::vector<double> components(dim);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty()) continue;

        const auto first_space = line.find(' ');
        if (first_space == std::string::npos || first_space == 0) {
            throw DataError("embeddings line " + std::to_string(lineno) + ": no vector after token");
        }
        const std::string token = line.substr(0, first_space);

        // Field count is validated on every line, even filtered-out ones;
        // components are only parsed for retained tokens.
        std::size_t separators = 0;
        for (std::size_t i = first_space; i < line.size(); ++i) {
            if (line[i] == ' ') ++separators;
        }
        if (separators != dim) {
            throw DataError("embeddings line " + std::to_string(lineno) + ": token '" + token +
                            "' has " + std::to_string(separators) + " components, expected " +
                            std::to_string(dim));
        }
        if (vocab_filter && !vocab_filter->count(token)) continue;

        std::size_t pos = first_space + 1;
        for (std::size_t k = 0; k < dim; ++k) {
            std::size_t end = line.find(' ', pos);
            if (end == std::string::npos) end = line.size();
            double value;
            if (!parse_f64({line.data() + pos, end - pos}, value) || !std::isfinite(value)) {
                throw DataError("embeddings line " + std::to_string(lineno) +
                                ": non-numeric component '" + line.substr(pos, end - pos) + "'");
            }
            components[k] = value;
            pos = end + 1;
        }
        try {
            table.insert(token, components);
        } catch (const DataError& e) {
            throw DataError("embeddings line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return table;
}

EmbeddingTable load_embeddings(const std::string& path,
                               const std::unordered_set<std::string>* vocab_filter) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open embeddings file: " + path);
    return parse_embeddings(in, vocab_filter);
}

void write_embeddings(const EmbeddingTable& table, std::ostream& out) {
    out << table.size() << ' ' << table.dim() << '\n';
    char buf[32];
    for (std::size_t i = 0; i < table.size(); ++i) {
        out << table.tokens()[i];
        for (double x : table.row(i)) {
            std::snprintf(buf, sizeof(buf), "%.17g", x);
            out << ' ' << buf;
        }
        out << '\n';
    }
}

double cosine(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) {
        throw DataError("cosine: length mismatch (" + std::to_string(u.size()) + " vs " +
                        std::to_string(v.size()) + ")");
    }
    double uu = 0.0, vv = 0.0, uv = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        uu += u[k] * u[k];
        vv += v[k] * v[k];
        uv += u[k] * v[k];
    }
    if (uu == 0.0 || vv == 0.0) throw DataError("cosine undefined for zero-norm vector");
    return std::clamp(uv / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
}

WordVector sum_vectors(const std::vector<WordVector>& vs) {
    if (vs.empty()) throw DataError("sum_vectors: empty input");
    WordVector out(vs.front().size(), 0.0);
    for (const auto& v : vs) {
        if (v.size() != out.size()) throw DataError("sum_vectors: length mismatch");
        for (std::size_t k = 0; k < out.size(); ++k) out[k] += v[k];
    }
    return out;
}

std::string nearest_label(std::span<const double> q, const EmbeddingTable& table,
                          const std::unordered_set<std::string>& exclude) {
    if (q.size() != table.dim()) throw DataError("nearest_label: query dimension mismatch");
    const std::vector<double> cos =
        kernels::query_cosines(q.data(), table.data(), table.size(), table.dim());

    // Serial argmax so the lexicographic tie-break is schedule-independent.
    const std::string* best = nullptr;
    double best_cos = 0.0;
    for (std::size_t i = 0; i < table.size(); ++i) {
        const std::string& token = table.tokens()[i];
        if (exclude.count(token)) continue;
        if (!best || cos[i] > best_cos || (cos[i] == best_cos && token < *best)) {
            best = &token;
            best_cos = cos[i];
        }
    }
    if (!best) throw DataError("nearest_label: no candidates after exclusion");
    return *best;
}

} // namespace conceptmap
