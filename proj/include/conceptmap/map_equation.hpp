#pragma once

#include "conceptmap/graph.hpp"
#include "conceptmap/partition.hpp"

#include <cstdint>
#include <vector>

namespace conceptmap {

// Two-level map equation codelength, in bits. index_term is the index
// codebook's share (zero when nothing exits any module); module_terms holds
// one entry per module.
struct MapEquationScore {
    double codelength = 0.0;
    double index_term = 0.0;
    std::vector<double> module_terms;
};

// Codelength of a partition under undirected stationary visit rates
// p_v = strength(v) / 2W, with module exit rates from boundary edge weight.
// Throws DataError when the graph has zero total weight.
MapEquationScore map_equation(const WeightedGraph& g, const Partition& p);

// Greedy map-equation minimization: Louvain-style node moving with module
// aggregation, restarted from seeded shuffles, best codelength kept.
// Deterministic given (graph, seed, restarts). Isolates end up as singleton
// clusters; nodes only ever join neighboring modules, so disconnected
// components never share a cluster.
Partition infomap_partition(const WeightedGraph& g, std::uint64_t seed, int restarts = 8);

} // namespace conceptmap
