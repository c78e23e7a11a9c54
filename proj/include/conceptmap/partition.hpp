#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace conceptmap {

// Assignment of every node index to exactly one cluster. Cluster ids are
// dense from 0, renumbered by first appearance in node order, which makes
// equality of Partition values a canonical comparison.
class Partition {
public:
    Partition() = default;

    // Renumbers arbitrary labels into canonical dense form.
    static Partition from_labels(const std::vector<std::uint32_t>& labels);

    static Partition singletons(std::size_t n);
    static Partition one_cluster(std::size_t n);

    std::size_t size() const { return assign_.size(); }
    std::uint32_t cluster_count() const { return cluster_count_; }
    std::uint32_t operator[](std::size_t node) const { return assign_[node]; }
    const std::vector<std::uint32_t>& assignments() const { return assign_; }

    std::vector<std::size_t> cluster_sizes() const;
    std::vector<std::vector<std::uint32_t>> members() const;

    // Canonical sub-partition over a subset of node indices (ascending order
    // expected); empty clusters vanish.
    Partition restrict_to(const std::vector<std::uint32_t>& nodes) const;

    bool operator==(const Partition&) const = default;

private:
    std::vector<std::uint32_t> assign_;
    std::uint32_t cluster_count_ = 0;
};

// TSV `token<TAB>cluster_id` with a header line. The nodes argument gives
// token order; reading validates exact coverage of those tokens.
void write_partition(const Partition& p, const std::vector<std::string>& nodes, std::ostream& out);
Partition read_partition(std::istream& in, const std::vector<std::string>& nodes);

} // namespace conceptmap
