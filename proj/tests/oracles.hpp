#pragma once

// Test-side oracles, deliberately independent of the library's
// implementation paths: NMI straight from the mutual-information formula,
// the map equation in raw entropy form, exhaustive set-partition and
// matching enumeration, and a naive global-minimum linkage.

#include "conceptmap/graph.hpp"
#include "conceptmap/partition.hpp"
#include "conceptmap/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <vector>

namespace oracles {

// 100 * 2*I(A;E) / (H(A)+H(E)) computed from the joint distribution. Counts
// stay integral until the final division so degenerate distributions hit
// p = 1 exactly.
inline double nmi_percent(const conceptmap::Partition& a, const conceptmap::Partition& e) {
    const double n = static_cast<double>(a.size());
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> joint;
    std::map<std::uint32_t, std::size_t> ca, ce;
    for (std::size_t v = 0; v < a.size(); ++v) {
        ++joint[{a[v], e[v]}];
        ++ca[a[v]];
        ++ce[e[v]];
    }
    double mi = 0.0;
    for (const auto& [key, count] : joint) {
        const double pij = count / n;
        mi += pij * std::log(pij / ((ca[key.first] / n) * (ce[key.second] / n)));
    }
    double ha = 0.0, he = 0.0;
    for (const auto& [_, count] : ca) ha -= (count / n) * std::log(count / n);
    for (const auto& [_, count] : ce) he -= (count / n) * std::log(count / n);
    if (ha + he == 0.0) return 100.0;
    return 100.0 * 2.0 * mi / (ha + he);
}

// Two-level map equation evaluated in its textbook form
// L = q H(Q) + sum_i p_i H(P_i), all in bits.
inline double map_equation_entropy_form(const conceptmap::WeightedGraph& g,
                                        const conceptmap::Partition& p) {
    const double two_w = 2.0 * g.total_weight();
    const auto strength = g.strengths();
    const std::uint32_t k = p.cluster_count();

    std::vector<double> exit(k, 0.0);
    for (const auto& e : g.edges()) {
        if (p[e.a] != p[e.b]) {
            exit[p[e.a]] += e.weight / two_w;
            exit[p[e.b]] += e.weight / two_w;
        }
    }
    double q_total = 0.0;
    for (double q : exit) q_total += q;

    auto entropy_bits = [](const std::vector<double>& dist) {
        double total = 0.0;
        for (double x : dist) total += x;
        if (total == 0.0) return 0.0;
        double h = 0.0;
        for (double x : dist) {
            if (x > 0.0) h -= (x / total) * std::log2(x / total);
        }
        return h;
    };

    double codelength = 0.0;
    if (q_total > 0.0) codelength += q_total * entropy_bits(exit);
    for (std::uint32_t i = 0; i < k; ++i) {
        std::vector<double> dist = {exit[i]};
        double inside = exit[i];
        for (std::size_t v = 0; v < g.node_count(); ++v) {
            if (p[v] == i) {
                dist.push_back(strength[v] / two_w);
                inside += strength[v] / two_w;
            }
        }
        codelength += inside * entropy_bits(dist);
    }
    return codelength;
}

// Calls fn with every set partition of {0..n-1} (restricted growth strings:
// a[0] = 0 and a[j] <= 1 + max(a[0..j-1])).
inline void for_each_set_partition(std::size_t n,
                                   const std::function<void(const std::vector<std::uint32_t>&)>& fn) {
    if (n == 0) return;
    std::vector<std::uint32_t> a(n, 0);
    while (true) {
        fn(a);
        std::size_t bump = 0; // 0 means exhausted
        for (std::size_t j = n; j-- > 1;) {
            std::uint32_t prefix_max = 0;
            for (std::size_t t = 0; t < j; ++t) prefix_max = std::max(prefix_max, a[t]);
            if (a[j] <= prefix_max) {
                bump = j;
                break;
            }
        }
        if (bump == 0) return;
        ++a[bump];
        for (std::size_t j = bump + 1; j < n; ++j) a[j] = 0;
    }
}

// Exhaustive best matching: maximum cardinality first, then maximum total
// value, over pairs with value >= threshold. Returns (cardinality, total).
inline std::pair<std::size_t, double>
best_matching_bruteforce(const std::vector<std::vector<double>>& value, double threshold) {
    const std::size_t rows = value.size();
    const std::size_t cols = rows ? value[0].size() : 0;
    std::vector<bool> used(cols, false);
    std::pair<std::size_t, double> best{0, 0.0};
    std::function<void(std::size_t, std::size_t, double)> rec = [&](std::size_t row,
                                                                    std::size_t count,
                                                                    double total) {
        if (row == rows) {
            if (count > best.first || (count == best.first && total > best.second)) {
                best = {count, total};
            }
            return;
        }
        rec(row + 1, count, total); // leave this row unmatched
        for (std::size_t j = 0; j < cols; ++j) {
            if (!used[j] && value[row][j] >= threshold) {
                used[j] = true;
                rec(row + 1, count + 1, total + value[row][j]);
                used[j] = false;
            }
        }
    };
    rec(0, 0, 0.0);
    return best;
}

// Naive average linkage: global minimum search plus Lance-Williams updates.
// Returns the sorted merge heights.
inline std::vector<double> average_linkage_heights_naive(std::vector<std::vector<double>> d) {
    const std::size_t n = d.size();
    std::vector<bool> active(n, true);
    std::vector<std::size_t> size(n, 1);
    std::vector<double> heights;
    for (std::size_t step = 0; step + 1 < n; ++step) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!active[j]) continue;
                if (d[i][j] < best) {
                    best = d[i][j];
                    bi = i;
                    bj = j;
                }
            }
        }
        heights.push_back(best);
        for (std::size_t k = 0; k < n; ++k) {
            if (!active[k] || k == bi || k == bj) continue;
            const double merged =
                (size[bi] * d[std::min(bi, k)][std::max(bi, k)] +
                 size[bj] * d[std::min(bj, k)][std::max(bj, k)]) /
                static_cast<double>(size[bi] + size[bj]);
            d[std::min(bi, k)][std::max(bi, k)] = merged;
            d[std::max(bi, k)][std::min(bi, k)] = merged;
        }
        size[bi] += size[bj];
        active[bj] = false;
    }
    std::sort(heights.begin(), heights.end());
    return heights;
}

// Seeded random weighted graph over n nodes; at least one edge.
inline conceptmap::WeightedGraph random_graph(std::uint64_t seed, std::size_t n,
                                              double edge_prob = 0.5) {
    conceptmap::Rng rng(seed);
    std::vector<std::string> nodes;
    for (std::size_t i = 0; i < n; ++i) nodes.push_back("n" + std::to_string(i));
    std::vector<conceptmap::GraphEdge> edges;
    while (edges.empty()) {
        for (std::uint32_t i = 0; i + 1 < n; ++i) {
            for (std::uint32_t j = i + 1; j < n; ++j) {
                if (rng.uniform_double() < edge_prob) {
                    edges.push_back({i, j, rng.uniform(0.1, 2.0)});
                }
            }
        }
    }
    return conceptmap::WeightedGraph(conceptmap::GraphKind::WA, nodes, edges);
}

// Ring of k cliques with unit intra-clique weights and weak bridges.
inline conceptmap::WeightedGraph ring_of_cliques(const std::vector<std::size_t>& clique_sizes,
                                                 double bridge_weight = 0.05) {
    std::vector<std::string> nodes;
    std::vector<conceptmap::GraphEdge> edges;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> spans; // [first, last] per clique
    std::uint32_t next = 0;
    for (std::size_t c = 0; c < clique_sizes.size(); ++c) {
        const std::uint32_t first = next;
        for (std::size_t i = 0; i < clique_sizes[c]; ++i) {
            nodes.push_back("c" + std::to_string(c) + "_" + std::to_string(i));
            ++next;
        }
        for (std::uint32_t i = first; i < next; ++i) {
            for (std::uint32_t j = i + 1; j < next; ++j) edges.push_back({i, j, 1.0});
        }
        spans.emplace_back(first, next - 1);
    }
    const std::size_t k = clique_sizes.size();
    if (k >= 2) {
        for (std::size_t c = 0; c < k; ++c) {
            if (k == 2 && c == 1) break;
            const std::uint32_t from = spans[c].second;
            const std::uint32_t to = spans[(c + 1) % k].first;
            edges.push_back(
                {std::min(from, to), std::max(from, to), bridge_weight});
        }
    }
    return conceptmap::WeightedGraph(conceptmap::GraphKind::WA, nodes, edges);
}

// Planted clique labels matching ring_of_cliques node order.
inline conceptmap::Partition planted_partition(const std::vector<std::size_t>& clique_sizes) {
    std::vector<std::uint32_t> labels;
    for (std::size_t c = 0; c < clique_sizes.size(); ++c) {
        for (std::size_t i = 0; i < clique_sizes[c]; ++i) {
            labels.push_back(static_cast<std::uint32_t>(c));
        }
    }
    return conceptmap::Partition::from_labels(labels);
}

} // namespace oracles
