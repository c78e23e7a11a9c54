#pragma once

#include "conceptmap/embedding.hpp"
#include "conceptmap/graph.hpp"
#include "conceptmap/partition.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace conceptmap {

// Shannon entropy of the cluster-size distribution, in nats. The log base
// cancels out of the convergence ratio.
double partition_entropy(const Partition& p);

// H(A|E) from the contingency table of two partitions over one node set.
double conditional_entropy(const Partition& a, const Partition& e);

// 100 * 2[H(A) - H(A|E)] / (H(A) + H(E)): normalized mutual information as a
// percentage, symmetric in its arguments. Two trivial partitions are defined
// as 100 (identical single-cluster partitions); callers can flag that case
// via ic_is_degenerate.
double informational_convergence(const Partition& a, const Partition& e);
bool ic_is_degenerate(const Partition& a, const Partition& e);

struct ClusterSummary {
    std::uint32_t cluster_id = 0;
    std::vector<std::string> members;
    WordVector vec;    // sum of member vectors
    std::string label; // nearest token to the sum, nothing excluded
};

// One summary per cluster. Members are summed in node order; with
// normalize_vectors each member vector is L2-normalized before summation
// (sensitivity switch, raw sums by default).
std::vector<ClusterSummary> summarize_clusters(const Partition& p,
                                               const std::vector<std::string>& nodes,
                                               const EmbeddingTable& table,
                                               bool normalize_vectors = false);

struct MatchedPair {
    std::uint32_t wa_cluster;
    std::uint32_t we_cluster;
    double cosine;
};

enum class MatchingMode {
    Optimal, // max cardinality, then max total cosine
    Greedy,  // highest-cosine-first, for sensitivity comparison
};

struct ScResult {
    double sc_percent = 0.0;
    std::vector<MatchedPair> pairs;
    double mean_cosine = 0.0; // over matched pairs; NaN when none
    double sd_cosine = 0.0;   // population SD; NaN when none
};

// Pairs WA and WE clusters whose summed-vector cosine reaches the threshold,
// one-to-one; SC = 100 * |pairs| / min(N_WA, N_WE).
ScResult semantic_convergence(const std::vector<ClusterSummary>& wa,
                              const std::vector<ClusterSummary>& we, double threshold = 0.726,
                              MatchingMode mode = MatchingMode::Optimal);

struct ConvergenceReport {
    double ic_percent = 0.0;
    double sc_percent = 0.0;
    bool ic_degenerate = false;
    std::vector<MatchedPair> pairs;
    double mean_cosine = 0.0;
    double sd_cosine = 0.0;
    double h_wa = 0.0; // nats
    double h_we = 0.0;
    double h_wa_given_we = 0.0;
    std::uint32_t n_wa_clusters = 0;
    std::uint32_t n_we_clusters = 0;
    NetworkStats stats_wa;
    NetworkStats stats_we;
    std::uint64_t seed = 0;
    std::string config_hash;
    std::vector<std::pair<std::string, std::string>> input_fingerprints; // path -> fingerprint

    std::string to_json() const;
};

ConvergenceReport make_report(const Partition& wa, const Partition& we, const ScResult& sc,
                              const NetworkStats& stats_wa, const NetworkStats& stats_we,
                              std::uint64_t seed);

// Pair list as TSV for plotting: ids, labels, cosine.
void write_pairs_tsv(const ConvergenceReport& report,
                     const std::vector<ClusterSummary>& wa_summaries,
                     const std::vector<ClusterSummary>& we_summaries, std::ostream& out);

} // namespace conceptmap
