#include "conceptmap/linkage.hpp"

#include "conceptmap/error.hpp"
#include "conceptmap/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <unordered_set>

namespace conceptmap {

namespace {

struct RawMerge {
    std::uint32_t slot_a; // smallest leaf id inside each cluster
    std::uint32_t slot_b;
    double height;
};

struct LeafUnionFind {
    std::vector<std::uint32_t> parent;

    explicit LeafUnionFind(std::uint32_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0u);
    }
    std::uint32_t find(std::uint32_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::uint32_t a, std::uint32_t b) { parent[find(a)] = find(b); }
};

} // namespace

Dendrogram average_linkage(std::vector<double> dist, std::uint32_t n) {
    if (n < 2) throw DataError("average_linkage: need at least 2 items");
    if (dist.size() != static_cast<std::size_t>(n) * (n - 1) / 2) {
        throw DataError("average_linkage: condensed matrix size mismatch");
    }

    auto d = [&](std::uint32_t i, std::uint32_t j) -> double& {
        return dist[kernels::condensed_index(n, std::min(i, j), std::max(i, j))];
    };

    std::vector<bool> active(n, true);
    std::vector<std::uint32_t> size(n, 1);
    std::vector<RawMerge> raw;
    raw.reserve(n - 1);
    std::vector<std::uint32_t> chain;
    chain.reserve(n);

    while (raw.size() + 1 < n) {
        if (chain.empty()) {
            for (std::uint32_t i = 0; i < n; ++i) {
                if (active[i]) {
                    chain.push_back(i);
                    break;
                }
            }
        }
        while (true) {
            const std::uint32_t a = chain.back();
            const std::uint32_t prev =
                chain.size() >= 2 ? chain[chain.size() - 2] : std::numeric_limits<std::uint32_t>::max();

            // Nearest active neighbor; prev wins ties, otherwise lowest id.
            std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
            double best_d = std::numeric_limits<double>::infinity();
            if (prev != std::numeric_limits<std::uint32_t>::max()) {
                best = prev;
                best_d = d(a, prev);
            }
            for (std::uint32_t b = 0; b < n; ++b) {
                if (!active[b] || b == a || b == prev) continue;
                if (d(a, b) < best_d) {
                    best = b;
                    best_d = d(a, b);
                }
            }
            if (best == prev) {
                const std::uint32_t keep = std::min(a, prev);
                const std::uint32_t drop = std::max(a, prev);
                raw.push_back({keep, drop, best_d});
                // Lance-Williams update for average linkage
                for (std::uint32_t k = 0; k < n; ++k) {
                    if (!active[k] || k == keep || k == drop) continue;
                    d(keep, k) = (size[keep] * d(keep, k) + size[drop] * d(drop, k)) /
                                 static_cast<double>(size[keep] + size[drop]);
                }
                size[keep] += size[drop];
                active[drop] = false;
                chain.pop_back();
                chain.pop_back();
                break;
            }
            chain.push_back(best);
        }
    }

    // NN-chain discovers merges out of height order; for a reducible linkage
    // the height-sorted sequence is a valid monotone dendrogram.
    std::stable_sort(raw.begin(), raw.end(),
                     [](const RawMerge& x, const RawMerge& y) { return x.height < y.height; });

    Dendrogram out;
    out.leaf_count = n;
    out.merges.reserve(n - 1);
    LeafUnionFind uf(n);
    std::vector<std::uint32_t> subtree_id(n);
    std::iota(subtree_id.begin(), subtree_id.end(), 0u);
    for (std::size_t k = 0; k < raw.size(); ++k) {
        const std::uint32_t ra = uf.find(raw[k].slot_a);
        const std::uint32_t rb = uf.find(raw[k].slot_b);
        const std::uint32_t left = std::min(subtree_id[ra], subtree_id[rb]);
        const std::uint32_t right = std::max(subtree_id[ra], subtree_id[rb]);
        out.merges.push_back({left, right, raw[k].height});
        uf.unite(ra, rb);
        subtree_id[uf.find(ra)] = n + static_cast<std::uint32_t>(k);
    }
    return out;
}

Dendrogram agglomerate(const std::vector<std::string>& words, const EmbeddingTable& table) {
    if (words.size() < 2) throw DataError("agglomerate: need at least 2 words");
    {
        std::unordered_set<std::string> seen;
        for (const auto& w : words) {
            if (!seen.insert(w).second) throw DataError("agglomerate: duplicate word '" + w + "'");
        }
    }
    const std::uint32_t n = static_cast<std::uint32_t>(words.size());
    std::vector<double> data(static_cast<std::size_t>(n) * table.dim());
    for (std::uint32_t i = 0; i < n; ++i) {
        const auto v = table.vector(words[i]);
        std::copy(v.begin(), v.end(), data.begin() + static_cast<std::size_t>(i) * table.dim());
    }
    std::vector<double> dist = kernels::cosine_matrix(data.data(), n, table.dim());
    for (double& x : dist) x = 1.0 - x;
    return average_linkage(std::move(dist), n);
}

Partition dynamic_tree_cut(const Dendrogram& d, const std::vector<std::string>& words,
                           const EmbeddingTable& table, const TreeCutParams& params) {
    const std::uint32_t n = d.leaf_count;
    if (words.size() != n) throw DataError("dynamic_tree_cut: word list does not match dendrogram");
    if (params.min_cluster_size < 1) throw ConfigError("min_cluster_size must be >= 1");
    if (params.max_join_height < 0.0 || params.min_split_height < 0.0) {
        throw ConfigError("tree cut heights must be nonnegative");
    }
    if (n == 0) return Partition();

    // Branches = connected components of merges at or below the cut height.
    LeafUnionFind uf(n + static_cast<std::uint32_t>(d.merges.size()));
    for (std::size_t k = 0; k < d.merges.size(); ++k) {
        if (d.merges[k].height <= params.max_join_height) {
            uf.unite(n + static_cast<std::uint32_t>(k), d.merges[k].left);
            uf.unite(n + static_cast<std::uint32_t>(k), d.merges[k].right);
        }
    }
    std::vector<std::vector<std::uint32_t>> branches; // ordered by smallest leaf
    {
        std::vector<std::int64_t> branch_of(n + d.merges.size(), -1);
        for (std::uint32_t leaf = 0; leaf < n; ++leaf) {
            const std::uint32_t root = uf.find(leaf);
            if (branch_of[root] < 0) {
                branch_of[root] = static_cast<std::int64_t>(branches.size());
                branches.emplace_back();
            }
            branches[branch_of[root]].push_back(leaf);
        }
    }

    auto branch_sum = [&](const std::vector<std::uint32_t>& leaves) {
        WordVector sum(table.dim(), 0.0);
        for (std::uint32_t leaf : leaves) {
            const auto v = table.vector(words[leaf]);
            for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += v[k];
        }
        return sum;
    };
    auto safe_cos = [](const WordVector& u, const WordVector& v) {
        double uu = 0, vv = 0, uv = 0;
        for (std::size_t k = 0; k < u.size(); ++k) {
            uu += u[k] * u[k];
            vv += v[k] * v[k];
            uv += u[k] * v[k];
        }
        return (uu == 0.0 || vv == 0.0) ? -2.0 : uv / (std::sqrt(uu) * std::sqrt(vv));
    };

    std::vector<std::uint32_t> labels(n, 0);
    std::vector<WordVector> cluster_sums;
    std::uint32_t next_cluster = 0;
    for (const auto& branch : branches) {
        if (branch.size() >= params.min_cluster_size) {
            for (std::uint32_t leaf : branch) labels[leaf] = next_cluster;
            cluster_sums.push_back(branch_sum(branch));
            ++next_cluster;
        }
    }
    if (next_cluster == 0) {
        return Partition::one_cluster(n); // degenerate input: one catch-all cluster
    }
    for (const auto& branch : branches) {
        if (branch.size() >= params.min_cluster_size) continue;
        const WordVector sum = branch_sum(branch);
        std::uint32_t best = 0;
        double best_cos = safe_cos(sum, cluster_sums[0]);
        for (std::uint32_t c = 1; c < next_cluster; ++c) {
            const double cs = safe_cos(sum, cluster_sums[c]);
            if (cs > best_cos) {
                best_cos = cs;
                best = c;
            }
        }
        for (std::uint32_t leaf : branch) labels[leaf] = best;
        for (std::size_t k = 0; k < sum.size(); ++k) cluster_sums[best][k] += sum[k];
    }
    return Partition::from_labels(labels);
}

void write_dendrogram(const Dendrogram& d, std::ostream& out) {
    out << "left\tright\theight\n";
    char h[32];
    for (const auto& m : d.merges) {
        std::snprintf(h, sizeof(h), "%.17g", m.height);
        out << m.left << '\t' << m.right << '\t' << h << '\n';
    }
}

} // namespace conceptmap
