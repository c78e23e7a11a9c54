#include "conceptmap/partition.hpp"

#include "conceptmap/error.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <unordered_map>

namespace conceptmap {

Partition Partition::from_labels(const std::vector<std::uint32_t>& labels) {
    Partition p;
    p.assign_.resize(labels.size());
    std::unordered_map<std::uint32_t, std::uint32_t> remap;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto [it, fresh] = remap.emplace(labels[i], static_cast<std::uint32_t>(remap.size()));
        (void)fresh;
        p.assign_[i] = it->second;
    }
    p.cluster_count_ = static_cast<std::uint32_t>(remap.size());
    return p;
}

Partition Partition::singletons(std::size_t n) {
    Partition p;
    p.assign_.resize(n);
    for (std::size_t i = 0; i < n; ++i) p.assign_[i] = static_cast<std::uint32_t>(i);
    p.cluster_count_ = static_cast<std::uint32_t>(n);
    return p;
}

Partition Partition::one_cluster(std::size_t n) {
    Partition p;
    p.assign_.assign(n, 0);
    p.cluster_count_ = n > 0 ? 1 : 0;
    return p;
}

std::vector<std::size_t> Partition::cluster_sizes() const {
    std::vector<std::size_t> sizes(cluster_count_, 0);
    for (std::uint32_t c : assign_) ++sizes[c];
    return sizes;
}

std::vector<std::vector<std::uint32_t>> Partition::members() const {
    std::vector<std::vector<std::uint32_t>> out(cluster_count_);
    for (std::size_t i = 0; i < assign_.size(); ++i) {
        out[assign_[i]].push_back(static_cast<std::uint32_t>(i));
    }
    return out;
}

Partition Partition::restrict_to(const std::vector<std::uint32_t>& nodes) const {
    std::vector<std::uint32_t> labels;
    labels.reserve(nodes.size());
    for (std::uint32_t node : nodes) {
        if (node >= assign_.size()) throw DataError("restrict_to: node index out of range");
        labels.push_back(assign_[node]);
    }
    return from_labels(labels);
}

void write_partition(const Partition& p, const std::vector<std::string>& nodes,
                     std::ostream& out) {
    if (p.size() != nodes.size()) throw DataError("partition does not cover the node list");
    out << "token\tcluster_id\n";
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        out << nodes[i] << '\t' << p[i] << '\n';
    }
}

Partition read_partition(std::istream& in, const std::vector<std::string>& nodes) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("token\tcluster_id", 0) != 0) {
        throw DataError("partition file: missing 'token\tcluster_id' header");
    }
    std::map<std::string, std::uint32_t> by_token;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw DataError("partition line " + std::to_string(lineno) + ": expected 2 fields");
        }
        const std::string token = line.substr(0, tab);
        std::uint32_t cluster = 0;
        try {
            cluster = static_cast<std::uint32_t>(std::stoul(line.substr(tab + 1)));
        } catch (const std::exception&) {
            throw DataError("partition line " + std::to_string(lineno) + ": bad cluster id");
        }
        if (!by_token.emplace(token, cluster).second) {
            throw DataError("partition line " + std::to_string(lineno) + ": duplicate token '" +
                            token + "'");
        }
    }
    if (by_token.size() != nodes.size()) {
        throw DataError("partition covers " + std::to_string(by_token.size()) + " tokens, graph has " +
                        std::to_string(nodes.size()));
    }
    std::vector<std::uint32_t> labels;
    labels.reserve(nodes.size());
    for (const auto& token : nodes) {
        auto it = by_token.find(token);
        if (it == by_token.end()) throw DataError("partition missing node '" + token + "'");
        labels.push_back(it->second);
    }
    return Partition::from_labels(labels);
}

} // namespace conceptmap
