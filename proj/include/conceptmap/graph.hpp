#pragma once

#include "conceptmap/assoc.hpp"
#include "conceptmap/embedding.hpp"
#include "conceptmap/partition.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace conceptmap {

enum class GraphKind { WA, WE };

struct GraphEdge {
    std::uint32_t a;
    std::uint32_t b; // a < b
    double weight;
};

// Undirected weighted graph over an ordered token list. No self-loops, no
// duplicate pairs, weights finite and >= 0. Isolated nodes are first-class:
// the WA and WE graphs over one vocabulary must expose identical node lists.
class WeightedGraph {
public:
    WeightedGraph(GraphKind kind, std::vector<std::string> nodes, std::vector<GraphEdge> edges);

    GraphKind kind() const { return kind_; }
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<std::string>& nodes() const { return nodes_; }
    const std::vector<GraphEdge>& edges() const { return edges_; }

    double total_weight() const { return total_weight_; }

    // Sum of incident edge weights per node.
    std::vector<double> strengths() const;
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adjacency() const;

private:
    GraphKind kind_;
    std::vector<std::string> nodes_;
    std::vector<GraphEdge> edges_; // sorted by (a, b)
    double total_weight_ = 0.0;
};

struct NetworkStats {
    double modularity = 0.0;
    double average_degree = 0.0;
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
    double sparsity = 0.0; // fraction of absent edges

    std::string to_json() const;
};

// Association table -> graph. Nodes are the table's full vocabulary in
// sorted order (isolates included); edge weight is the averaged FSA/BSA.
WeightedGraph wa_graph(const AssociationTable& table);

// Pairwise-cosine graph over `words`. Without a threshold the graph is
// complete (cosines below zero are kept as weight-0 edges so weights stay
// nonnegative); with a threshold an edge exists iff cosine >= threshold and
// carries the raw cosine.
WeightedGraph we_graph(const std::vector<std::string>& words, const EmbeddingTable& table,
                       std::optional<double> threshold = std::nullopt);

// Newman weighted modularity of a partition covering the graph.
double modularity(const WeightedGraph& g, const Partition& p);

// 2 * edges / nodes, unweighted.
double average_degree(const WeightedGraph& g);

NetworkStats network_stats(const WeightedGraph& g, const Partition& p);

// Published per-POS cosine thresholds for WA probability bands. Bands are
// half-open [low, high); the calibration procedure in the studies module
// regenerates these numbers for other corpora.
struct ThresholdBand {
    double prob_low;
    double prob_high;
    double cosine_threshold;
};

struct ThresholdTable {
    std::map<Pos, std::vector<ThresholdBand>> bands;

    // Threshold used for a strength class (nullopt = the unrestricted >5%
    // network). Throws ConfigError when the band is absent.
    double class_threshold(Pos pos, const std::optional<StrengthClass>& cls) const;

    // Values shipped with the tool: nouns (.65 .71 .72 .74 .77), verbs
    // (.67 .72 .74 .75 .78), adjectives (.68 .75 .77 .79 .81) over the bands
    // <1%, 5-10%, 10-15%, 15-20%, >20%.
    static ThresholdTable published_defaults();

    void validate() const; // strictly increasing thresholds per POS
};

void write_threshold_table(const ThresholdTable& t, std::ostream& out);
ThresholdTable read_threshold_table(std::istream& in);

// Graph files: `<stem>.edges.tsv` (node_a, node_b, weight) and
// `<stem>.nodes.tsv` (token per line), both with headers.
void write_graph(const WeightedGraph& g, const std::string& stem);
WeightedGraph read_graph(const std::string& stem, GraphKind kind);

} // namespace conceptmap
