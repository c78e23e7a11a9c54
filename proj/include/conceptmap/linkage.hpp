#pragma once

#include "conceptmap/embedding.hpp"
#include "conceptmap/partition.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace conceptmap {

// Standard binary agglomeration record: leaves are 0..n-1, merge k creates
// subtree id n+k. Heights are non-decreasing in merge order.
struct DendrogramMerge {
    std::uint32_t left;
    std::uint32_t right;
    double height;
};

struct Dendrogram {
    std::uint32_t leaf_count = 0;
    std::vector<DendrogramMerge> merges;
};

// Average-linkage agglomeration over a condensed distance matrix (consumed).
// NN-chain; exact for reducible linkages, O(n^2).
Dendrogram average_linkage(std::vector<double> condensed_distances, std::uint32_t n);

// Average-linkage dendrogram over d(u,v) = 1 - cosine(u,v). Words must be
// distinct, embedded, and n >= 2.
Dendrogram agglomerate(const std::vector<std::string>& words, const EmbeddingTable& table);

struct TreeCutParams {
    std::size_t min_cluster_size = 2;
    double max_join_height = 0.99;
    double min_split_height = 0.0; // accepted for interface parity; imposes nothing extra
};

// Cuts the dendrogram at max_join_height into branches; branches of at least
// min_cluster_size leaves become clusters, smaller branches are absorbed by
// the cluster whose summed vector is most cosine-similar to the branch's
// summed vector. With no large branch at all, everything collapses into one
// catch-all cluster.
Partition dynamic_tree_cut(const Dendrogram& d, const std::vector<std::string>& words,
                           const EmbeddingTable& table, const TreeCutParams& params = {});

// Merge-list TSV `left right height`.
void write_dendrogram(const Dendrogram& d, std::ostream& out);

} // namespace conceptmap
