#include "conceptmap/convergence.hpp"

#include "conceptmap/error.hpp"
#include "conceptmap/matching.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>

namespace conceptmap {

namespace {
double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }
} // namespace

double partition_entropy(const Partition& p) {
    if (p.size() == 0) throw DataError("entropy of empty partition");
    const double n = static_cast<double>(p.size());
    double h = 0.0;
    for (std::size_t size : p.cluster_sizes()) h -= xlogx(static_cast<double>(size) / n);
    return h;
}

double conditional_entropy(const Partition& a, const Partition& e) {
    if (a.size() != e.size() || a.size() == 0) {
        throw DataError("conditional_entropy: partitions must cover the same nonempty node set");
    }
    const double n = static_cast<double>(a.size());
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> joint;
    for (std::size_t v = 0; v < a.size(); ++v) ++joint[{a[v], e[v]}];

    // H(A|E) = H(A,E) - H(E)
    double h_joint = 0.0;
    for (const auto& [_, count] : joint) h_joint -= xlogx(static_cast<double>(count) / n);
    return h_joint - partition_entropy(e);
}

bool ic_is_degenerate(const Partition& a, const Partition& e) {
    return a.cluster_count() <= 1 && e.cluster_count() <= 1;
}

double informational_convergence(const Partition& a, const Partition& e) {
    if (a.size() != e.size() || a.size() == 0) {
        throw DataError("informational_convergence: partitions must cover the same node set");
    }
    const double h_a = partition_entropy(a);
    const double h_e = partition_entropy(e);
    if (h_a + h_e == 0.0) return 100.0; // both trivial: identical single-cluster partitions
    const double mutual = h_a - conditional_entropy(a, e);
    return 100.0 * 2.0 * mutual / (h_a + h_e);
}

std::vector<ClusterSummary> summarize_clusters(const Partition& p,
                                               const std::vector<std::string>& nodes,
                                               const EmbeddingTable& table,
                                               bool normalize_vectors) {
    if (p.size() != nodes.size()) throw DataError("summarize_clusters: partition/node mismatch");
    std::vector<ClusterSummary> out(p.cluster_count());
    const auto members = p.members();
    for (std::uint32_t c = 0; c < p.cluster_count(); ++c) {
        ClusterSummary& s = out[c];
        s.cluster_id = c;
        s.vec.assign(table.dim(), 0.0);
        for (std::uint32_t node : members[c]) {
            s.members.push_back(nodes[node]);
            const auto v = table.vector(nodes[node]);
            double scale = 1.0;
            if (normalize_vectors) {
                double norm2 = 0.0;
                for (double x : v) norm2 += x * x;
                if (norm2 > 0.0) scale = 1.0 / std::sqrt(norm2);
            }
            for (std::size_t k = 0; k < s.vec.size(); ++k) s.vec[k] += scale * v[k];
        }
        s.label = nearest_label(s.vec, table);
    }
    return out;
}

ScResult semantic_convergence(const std::vector<ClusterSummary>& wa,
                              const std::vector<ClusterSummary>& we, double threshold,
                              MatchingMode mode) {
    if (wa.empty() || we.empty()) throw DataError("semantic_convergence: empty summary list");
    const std::size_t na = wa.size(), ne = we.size();

    std::vector<double> cos(na * ne);
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < ne; ++j) {
            cos[i * ne + j] = cosine(wa[i].vec, we[j].vec);
        }
    }

    ScResult result;
    if (mode == MatchingMode::Optimal) {
        // Candidate pairs get K + cosine with K large enough that cardinality
        // always dominates total cosine; non-candidates get 0 (unmatchable).
        const double big = 2.0 * static_cast<double>(std::min(na, ne)) + 4.0;
        std::vector<double> value(na * ne, 0.0);
        for (std::size_t i = 0; i < na * ne; ++i) {
            if (cos[i] >= threshold) value[i] = big + cos[i];
        }
        for (const auto& [i, j] : max_value_assignment(value, na, ne)) {
            result.pairs.push_back({wa[i].cluster_id, we[j].cluster_id, cos[i * ne + j]});
        }
    } else {
        // Highest cosine first; ties by (wa, we) index.
        std::vector<std::pair<std::size_t, std::size_t>> candidates;
        for (std::size_t i = 0; i < na; ++i) {
            for (std::size_t j = 0; j < ne; ++j) {
                if (cos[i * ne + j] >= threshold) candidates.emplace_back(i, j);
            }
        }
        std::stable_sort(candidates.begin(), candidates.end(),
                         [&](const auto& x, const auto& y) {
                             return cos[x.first * ne + x.second] > cos[y.first * ne + y.second];
                         });
        std::vector<bool> used_a(na, false), used_e(ne, false);
        for (const auto& [i, j] : candidates) {
            if (used_a[i] || used_e[j]) continue;
            used_a[i] = used_e[j] = true;
            result.pairs.push_back({wa[i].cluster_id, we[j].cluster_id, cos[i * ne + j]});
        }
        std::sort(result.pairs.begin(), result.pairs.end(),
                  [](const MatchedPair& x, const MatchedPair& y) {
                      return std::tie(x.wa_cluster, x.we_cluster) <
                             std::tie(y.wa_cluster, y.we_cluster);
                  });
    }

    result.sc_percent =
        100.0 * static_cast<double>(result.pairs.size()) / static_cast<double>(std::min(na, ne));
    if (result.pairs.empty()) {
        result.mean_cosine = std::numeric_limits<double>::quiet_NaN();
        result.sd_cosine = std::numeric_limits<double>::quiet_NaN();
    } else {
        double sum = 0.0;
        for (const auto& p : result.pairs) sum += p.cosine;
        result.mean_cosine = sum / static_cast<double>(result.pairs.size());
        double var = 0.0;
        for (const auto& p : result.pairs) {
            var += (p.cosine - result.mean_cosine) * (p.cosine - result.mean_cosine);
        }
        result.sd_cosine = std::sqrt(var / static_cast<double>(result.pairs.size()));
    }
    return result;
}

ConvergenceReport make_report(const Partition& wa, const Partition& we, const ScResult& sc,
                              const NetworkStats& stats_wa, const NetworkStats& stats_we,
                              std::uint64_t seed) {
    ConvergenceReport r;
    r.ic_percent = informational_convergence(wa, we);
    r.ic_degenerate = ic_is_degenerate(wa, we);
    r.sc_percent = sc.sc_percent;
    r.pairs = sc.pairs;
    r.mean_cosine = sc.mean_cosine;
    r.sd_cosine = sc.sd_cosine;
    r.h_wa = partition_entropy(wa);
    r.h_we = partition_entropy(we);
    r.h_wa_given_we = conditional_entropy(wa, we);
    r.n_wa_clusters = wa.cluster_count();
    r.n_we_clusters = we.cluster_count();
    r.stats_wa = stats_wa;
    r.stats_we = stats_we;
    r.seed = seed;
    return r;
}

namespace {
nlohmann::ordered_json stats_json(const NetworkStats& s) {
    nlohmann::ordered_json j;
    j["modularity"] = s.modularity;
    j["average_degree"] = s.average_degree;
    j["node_count"] = s.node_count;
    j["edge_count"] = s.edge_count;
    j["sparsity"] = s.sparsity;
    return j;
}
} // namespace

std::string ConvergenceReport::to_json() const {
    nlohmann::ordered_json j;
    j["ic_percent"] = ic_percent;
    j["sc_percent"] = sc_percent;
    j["ic_degenerate"] = ic_degenerate;
    j["mean_cosine"] = mean_cosine; // NaN serializes as null
    j["sd_cosine"] = sd_cosine;
    j["h_wa"] = h_wa;
    j["h_we"] = h_we;
    j["h_wa_given_we"] = h_wa_given_we;
    j["n_wa_clusters"] = n_wa_clusters;
    j["n_we_clusters"] = n_we_clusters;
    j["pairs"] = nlohmann::ordered_json::array();
    for (const auto& p : pairs) {
        j["pairs"].push_back({{"wa_cluster", p.wa_cluster},
                              {"we_cluster", p.we_cluster},
                              {"cosine", p.cosine}});
    }
    j["stats_wa"] = stats_json(stats_wa);
    j["stats_we"] = stats_json(stats_we);
    j["seed"] = seed;
    j["config_hash"] = config_hash;
    j["inputs"] = nlohmann::ordered_json::object();
    for (const auto& [path, fp] : input_fingerprints) j["inputs"][path] = fp;
    return j.dump(2);
}

void write_pairs_tsv(const ConvergenceReport& report,
                     const std::vector<ClusterSummary>& wa_summaries,
                     const std::vector<ClusterSummary>& we_summaries, std::ostream& out) {
    out << "wa_cluster\twe_cluster\twa_label\twe_label\tcosine\n";
    char c[32];
    for (const auto& p : report.pairs) {
        std::snprintf(c, sizeof(c), "%.17g", p.cosine);
        out << p.wa_cluster << '\t' << p.we_cluster << '\t' << wa_summaries[p.wa_cluster].label
            << '\t' << we_summaries[p.we_cluster].label << '\t' << c << '\n';
    }
}

} // namespace conceptmap
