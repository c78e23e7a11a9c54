#include "conceptmap/map_equation.hpp"

#include "conceptmap/error.hpp"
#include "conceptmap/rng.hpp"

#include <algorithm>
#include <cmath>

namespace conceptmap {

namespace {

// x * log2(x) with plogp(0) = 0. Tiny negatives from incremental updates are
// treated as zero.
double plogp(double x) {
    return x > 1e-15 ? x * std::log2(x) : 0.0;
}

} // namespace

MapEquationScore map_equation(const WeightedGraph& g, const Partition& p) {
    if (p.size() != g.node_count()) {
        throw DataError("map_equation: partition does not cover graph");
    }
    const double W = g.total_weight();
    if (W == 0.0) throw DataError("map_equation: graph has zero total weight");
    const double two_w = 2.0 * W;

    const std::vector<double> strength = g.strengths();
    const std::uint32_t k = p.cluster_count();

    std::vector<double> exit_rate(k, 0.0);   // q_i
    std::vector<double> inside_rate(k, 0.0); // sum of member visit rates
    for (const auto& e : g.edges()) {
        if (p[e.a] != p[e.b]) {
            exit_rate[p[e.a]] += e.weight / two_w;
            exit_rate[p[e.b]] += e.weight / two_w;
        }
    }
    std::vector<double> member_plogp(k, 0.0);
    for (std::size_t v = 0; v < g.node_count(); ++v) {
        inside_rate[p[v]] += strength[v] / two_w;
        member_plogp[p[v]] += plogp(strength[v] / two_w);
    }

    MapEquationScore score;
    double exit_total = 0.0;
    double sum_plogp_exit = 0.0;
    score.module_terms.resize(k);
    for (std::uint32_t i = 0; i < k; ++i) {
        exit_total += exit_rate[i];
        sum_plogp_exit += plogp(exit_rate[i]);
        score.module_terms[i] =
            plogp(exit_rate[i] + inside_rate[i]) - plogp(exit_rate[i]) - member_plogp[i];
    }
    score.index_term = plogp(exit_total) - sum_plogp_exit;
    score.codelength = score.index_term;
    for (double t : score.module_terms) score.codelength += t;
    return score;
}

// --- optimizer ----------------------------------------------------------

namespace {

// One aggregation level. All quantities are in rate units (edge weight over
// 2W), so module bookkeeping never needs the original graph again. `vol`
// counts self-loops twice, matching the sum of member visit rates.
struct LevelGraph {
    std::vector<double> vol;
    std::vector<double> self_rate;
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj; // self excluded

    std::size_t size() const { return vol.size(); }
};

struct ModuleState {
    std::vector<double> exit;   // q_i
    std::vector<double> inside; // P_i
    std::vector<std::uint32_t> count;
    double exit_total = 0.0;

    void recompute(const LevelGraph& g, const std::vector<std::uint32_t>& module) {
        const std::size_t m = g.size();
        std::fill(exit.begin(), exit.end(), 0.0);
        std::fill(inside.begin(), inside.end(), 0.0);
        std::fill(count.begin(), count.end(), 0u);
        for (std::size_t v = 0; v < m; ++v) {
            inside[module[v]] += g.vol[v];
            ++count[module[v]];
            for (const auto& [u, w] : g.adj[v]) {
                if (module[u] != module[v]) exit[module[v]] += w;
            }
        }
        exit_total = 0.0;
        for (double q : exit) exit_total += q;
    }
};

bool local_moving(const LevelGraph& g, std::vector<std::uint32_t>& module, Rng& rng) {
    const std::size_t n = g.size();
    ModuleState state;
    state.exit.resize(n);
    state.inside.resize(n);
    state.count.resize(n);
    state.recompute(g, module);

    std::vector<std::uint32_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<std::uint32_t>(i);

    std::vector<double> weight_to(n, 0.0);
    std::vector<std::uint32_t> touched;

    bool any_move = false;
    for (int pass = 0; pass < 100; ++pass) {
        rng.shuffle(order);
        bool moved_this_pass = false;
        for (std::uint32_t v : order) {
            const std::uint32_t a = module[v];
            touched.clear();
            for (const auto& [u, w] : g.adj[v]) {
                const std::uint32_t m = module[u];
                if (weight_to[m] == 0.0 && m != a) touched.push_back(m);
                weight_to[m] += w;
            }
            if (touched.empty()) {
                weight_to[a] = 0.0;
                continue;
            }
            std::sort(touched.begin(), touched.end());

            const double vol = g.vol[v];
            const double self2 = 2.0 * g.self_rate[v];
            const double qa = state.exit[a];
            const double qa_new = qa - vol + 2.0 * weight_to[a] + self2;
            const double pa = state.inside[a];

            double best_delta = 0.0;
            std::uint32_t best_module = a;
            for (std::uint32_t b : touched) {
                const double qb = state.exit[b];
                const double qb_new = qb + vol - 2.0 * weight_to[b] - self2;
                const double pb = state.inside[b];
                const double q_tot_new = state.exit_total + (qa_new - qa) + (qb_new - qb);

                double delta = plogp(q_tot_new) - plogp(state.exit_total);
                delta -= 2.0 * (plogp(qa_new) - plogp(qa) + plogp(qb_new) - plogp(qb));
                delta += plogp(qa_new + pa - vol) - plogp(qa + pa);
                delta += plogp(qb_new + pb + vol) - plogp(qb + pb);
                if (delta < best_delta - 1e-12) {
                    best_delta = delta;
                    best_module = b;
                }
            }
            if (best_module != a) {
                const double qb = state.exit[best_module];
                const double qb_new = qb + vol - 2.0 * weight_to[best_module] - self2;
                state.exit_total += (qa_new - qa) + (qb_new - qb);
                state.exit[a] = qa_new;
                state.exit[best_module] = qb_new;
                state.inside[a] -= vol;
                state.inside[best_module] += vol;
                --state.count[a];
                ++state.count[best_module];
                module[v] = best_module;
                moved_this_pass = true;
                any_move = true;
            }
            weight_to[a] = 0.0;
            for (std::uint32_t m : touched) weight_to[m] = 0.0;
        }
        if (!moved_this_pass) break;
        state.recompute(g, module); // clear accumulated rounding drift
    }
    return any_move;
}

std::uint32_t renumber_dense(std::vector<std::uint32_t>& module) {
    std::vector<std::uint32_t> remap(module.size(), UINT32_MAX);
    std::uint32_t next = 0;
    for (auto& m : module) {
        if (remap[m] == UINT32_MAX) remap[m] = next++;
        m = remap[m];
    }
    return next;
}

LevelGraph aggregate(const LevelGraph& g, const std::vector<std::uint32_t>& module,
                     std::uint32_t module_count) {
    LevelGraph out;
    out.vol.assign(module_count, 0.0);
    out.self_rate.assign(module_count, 0.0);
    out.adj.resize(module_count);

    std::vector<double> weight_to(module_count, 0.0);
    std::vector<std::vector<std::uint32_t>> members(module_count);
    for (std::size_t v = 0; v < g.size(); ++v) members[module[v]].push_back(v);

    for (std::uint32_t c = 0; c < module_count; ++c) {
        std::vector<std::uint32_t> touched;
        double self = 0.0;
        for (std::uint32_t v : members[c]) {
            out.vol[c] += g.vol[v];
            self += g.self_rate[v];
            for (const auto& [u, w] : g.adj[v]) {
                const std::uint32_t cu = module[u];
                if (cu == c) {
                    self += w / 2.0; // each intra edge is visited from both ends
                } else {
                    if (weight_to[cu] == 0.0) touched.push_back(cu);
                    weight_to[cu] += w;
                }
            }
        }
        out.self_rate[c] = self;
        std::sort(touched.begin(), touched.end());
        for (std::uint32_t cu : touched) {
            out.adj[c].emplace_back(cu, weight_to[cu]);
            weight_to[cu] = 0.0;
        }
    }
    return out;
}

LevelGraph leaf_level(const WeightedGraph& g) {
    const double two_w = 2.0 * g.total_weight();
    LevelGraph lg;
    lg.vol.assign(g.node_count(), 0.0);
    lg.self_rate.assign(g.node_count(), 0.0);
    lg.adj.resize(g.node_count());
    for (const auto& e : g.edges()) {
        lg.vol[e.a] += e.weight / two_w;
        lg.vol[e.b] += e.weight / two_w;
        lg.adj[e.a].emplace_back(e.b, e.weight / two_w);
        lg.adj[e.b].emplace_back(e.a, e.weight / two_w);
    }
    return lg;
}

std::vector<std::uint32_t> louvain_run(const LevelGraph& leaves, Rng rng) {
    std::vector<std::uint32_t> leaf_module(leaves.size());
    for (std::size_t i = 0; i < leaves.size(); ++i) {
        leaf_module[i] = static_cast<std::uint32_t>(i);
    }

    LevelGraph level = leaves;
    while (true) {
        std::vector<std::uint32_t> module(level.size());
        for (std::size_t i = 0; i < level.size(); ++i) module[i] = static_cast<std::uint32_t>(i);
        if (!local_moving(level, module, rng)) break;
        const std::uint32_t count = renumber_dense(module);
        for (auto& m : leaf_module) m = module[m];
        if (count == level.size()) break;
        level = aggregate(level, module, count);
    }

    // Leaf-level refinement of the aggregated solution; repeats until stable.
    while (local_moving(leaves, leaf_module, rng)) {
        renumber_dense(leaf_module);
    }
    return leaf_module;
}

} // namespace

namespace {

// One module per connected component: the coarsest partition the contract
// allows, and a baseline greedy node-moving can miss on dense graphs where
// only a simultaneous merge of all modules pays off.
Partition component_partition(const WeightedGraph& g) {
    const auto adj = g.adjacency();
    std::vector<std::uint32_t> labels(g.node_count(), UINT32_MAX);
    std::uint32_t next = 0;
    std::vector<std::uint32_t> stack;
    for (std::uint32_t start = 0; start < g.node_count(); ++start) {
        if (labels[start] != UINT32_MAX) continue;
        labels[start] = next;
        stack.push_back(start);
        while (!stack.empty()) {
            const std::uint32_t v = stack.back();
            stack.pop_back();
            for (const auto& [u, w] : adj[v]) {
                (void)w;
                if (labels[u] == UINT32_MAX) {
                    labels[u] = next;
                    stack.push_back(u);
                }
            }
        }
        ++next;
    }
    return Partition::from_labels(labels);
}

} // namespace

Partition infomap_partition(const WeightedGraph& g, std::uint64_t seed, int restarts) {
    const std::size_t n = g.node_count();
    if (n == 0) return Partition();
    if (g.total_weight() == 0.0) return Partition::singletons(n);
    if (restarts < 1) restarts = 1;

    const LevelGraph leaves = leaf_level(g);
    const Rng master(seed);

    Partition best;
    double best_codelength = 0.0;
    for (int r = 0; r < restarts; ++r) {
        std::vector<std::uint32_t> labels = louvain_run(leaves, master.derive(r));
        Partition p = Partition::from_labels(labels);
        const double codelength = map_equation(g, p).codelength;
        if (r == 0 || codelength < best_codelength) {
            best = std::move(p);
            best_codelength = codelength;
        }
    }
    for (Partition baseline : {component_partition(g), Partition::singletons(n)}) {
        if (map_equation(g, baseline).codelength < best_codelength) {
            best_codelength = map_equation(g, baseline).codelength;
            best = std::move(baseline);
        }
    }
    return best;
}

} // namespace conceptmap
