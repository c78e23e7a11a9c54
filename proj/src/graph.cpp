#include "conceptmap/graph.hpp"

#include "conceptmap/error.hpp"
#include "conceptmap/kernels.hpp"
#include "conceptmap/manifest.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <unordered_map>
#include <unordered_set>

namespace conceptmap {

namespace {
double parse_double_field(const std::string& s, const std::string& context) {
    try {
        std::size_t used = 0;
        const double x = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return x;
    } catch (const std::exception&) {
        throw DataError(context + ": bad numeric field '" + s + "'");
    }
}
} // namespace

WeightedGraph::WeightedGraph(GraphKind kind, std::vector<std::string> nodes,
                             std::vector<GraphEdge> edges)
    : kind_(kind), nodes_(std::move(nodes)), edges_(std::move(edges)) {
    std::unordered_set<std::string> seen;
    for (const auto& n : nodes_) {
        if (n.empty()) throw DataError("graph: empty node token");
        if (!seen.insert(n).second) throw DataError("graph: duplicate node '" + n + "'");
    }
    std::sort(edges_.begin(), edges_.end(), [](const GraphEdge& x, const GraphEdge& y) {
        return std::tie(x.a, x.b) < std::tie(y.a, y.b);
    });
    const std::uint32_t n = static_cast<std::uint32_t>(nodes_.size());
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const GraphEdge& e = edges_[i];
        if (e.a >= e.b) throw DataError("graph: edge endpoints not ordered or self-loop");
        if (e.b >= n) throw DataError("graph: edge endpoint out of range");
        if (!std::isfinite(e.weight) || e.weight < 0.0) {
            throw DataError("graph: edge weight must be finite and nonnegative");
        }
        if (i > 0 && edges_[i - 1].a == e.a && edges_[i - 1].b == e.b) {
            throw DataError("graph: duplicate edge");
        }
        total_weight_ += e.weight;
    }
}

std::vector<double> WeightedGraph::strengths() const {
    std::vector<double> s(nodes_.size(), 0.0);
    for (const auto& e : edges_) {
        s[e.a] += e.weight;
        s[e.b] += e.weight;
    }
    return s;
}

std::vector<std::vector<std::pair<std::uint32_t, double>>> WeightedGraph::adjacency() const {
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj(nodes_.size());
    for (const auto& e : edges_) {
        adj[e.a].emplace_back(e.b, e.weight);
        adj[e.b].emplace_back(e.a, e.weight);
    }
    return adj;
}

std::string NetworkStats::to_json() const {
    nlohmann::ordered_json j;
    j["modularity"] = modularity;
    j["average_degree"] = average_degree;
    j["node_count"] = node_count;
    j["edge_count"] = edge_count;
    j["sparsity"] = sparsity;
    return j.dump(2);
}

WeightedGraph wa_graph(const AssociationTable& table) {
    if (table.pos.empty()) throw DataError("wa_graph: empty association table");
    const std::vector<std::string> nodes = table.vocabulary();
    std::unordered_map<std::string, std::uint32_t> index;
    for (std::uint32_t i = 0; i < nodes.size(); ++i) index.emplace(nodes[i], i);

    std::vector<GraphEdge> edges;
    edges.reserve(table.edges.size());
    for (const auto& e : table.edges) {
        const std::uint32_t a = index.at(e.word_a);
        const std::uint32_t b = index.at(e.word_b);
        edges.push_back({std::min(a, b), std::max(a, b), e.weight});
    }
    return WeightedGraph(GraphKind::WA, nodes, std::move(edges));
}

WeightedGraph we_graph(const std::vector<std::string>& words, const EmbeddingTable& table,
                       std::optional<double> threshold) {
    const std::size_t n = words.size();
    std::vector<double> data(n * table.dim());
    for (std::size_t i = 0; i < n; ++i) {
        const auto v = table.vector(words[i]); // throws for missing words
        std::copy(v.begin(), v.end(), data.begin() + i * table.dim());
    }
    std::vector<GraphEdge> edges;
    if (n >= 2) {
        const std::vector<double> cos = kernels::cosine_matrix(data.data(), n, table.dim());
        for (std::uint32_t i = 0; i + 1 < n; ++i) {
            for (std::uint32_t j = i + 1; j < n; ++j) {
                const double c = cos[kernels::condensed_index(n, i, j)];
                if (threshold) {
                    if (c >= *threshold) edges.push_back({i, j, c});
                } else {
                    // complete Study-1 mode; negative cosines are floored at 0
                    // so the nonnegative-weight invariant holds
                    edges.push_back({i, j, c > 0.0 ? c : 0.0});
                }
            }
        }
    }
    return WeightedGraph(GraphKind::WE, words, std::move(edges));
}

double modularity(const WeightedGraph& g, const Partition& p) {
    if (p.size() != g.node_count()) throw DataError("modularity: partition does not cover graph");
    const double W = g.total_weight();
    if (W == 0.0) throw DataError("modularity undefined for zero total edge weight");

    std::vector<double> intra(p.cluster_count(), 0.0);
    std::vector<double> strength(p.cluster_count(), 0.0);
    for (const auto& e : g.edges()) {
        if (p[e.a] == p[e.b]) intra[p[e.a]] += e.weight;
        strength[p[e.a]] += e.weight;
        strength[p[e.b]] += e.weight;
    }
    double q = 0.0;
    for (std::uint32_t c = 0; c < p.cluster_count(); ++c) {
        const double frac = strength[c] / (2.0 * W);
        q += intra[c] / W - frac * frac;
    }
    return q;
}

double average_degree(const WeightedGraph& g) {
    if (g.node_count() == 0) throw DataError("average_degree of empty graph");
    return 2.0 * static_cast<double>(g.edge_count()) / static_cast<double>(g.node_count());
}

NetworkStats network_stats(const WeightedGraph& g, const Partition& p) {
    NetworkStats s;
    s.node_count = g.node_count();
    s.edge_count = g.edge_count();
    s.average_degree = average_degree(g);
    s.modularity = g.total_weight() > 0.0 ? modularity(g, p) : 0.0;
    const double possible = static_cast<double>(s.node_count) * (s.node_count - 1) / 2.0;
    s.sparsity = possible > 0.0 ? 1.0 - static_cast<double>(s.edge_count) / possible : 0.0;
    return s;
}

double ThresholdTable::class_threshold(Pos pos, const std::optional<StrengthClass>& cls) const {
    const double target = cls ? cls->min_probability() : 0.05;
    auto it = bands.find(pos);
    if (it == bands.end()) {
        throw ConfigError(std::string("no threshold bands for POS '") + to_string(pos) + "'");
    }
    for (const auto& band : it->second) {
        if (std::abs(band.prob_low - target) < 1e-12) return band.cosine_threshold;
    }
    throw ConfigError(std::string("no threshold band starting at probability ") +
                      std::to_string(target) + " for POS '" + to_string(pos) + "'");
}

ThresholdTable ThresholdTable::published_defaults() {
    ThresholdTable t;
    const std::vector<std::pair<double, double>> ranges = {
        {0.00, 0.01}, {0.05, 0.10}, {0.10, 0.15}, {0.15, 0.20}, {0.20, 1.00}};
    const std::map<Pos, std::vector<double>> values = {
        {Pos::Noun, {0.65, 0.71, 0.72, 0.74, 0.77}},
        {Pos::Verb, {0.67, 0.72, 0.74, 0.75, 0.78}},
        {Pos::Adjective, {0.68, 0.75, 0.77, 0.79, 0.81}},
    };
    for (const auto& [pos, v] : values) {
        std::vector<ThresholdBand> bands;
        for (std::size_t i = 0; i < ranges.size(); ++i) {
            bands.push_back({ranges[i].first, ranges[i].second, v[i]});
        }
        t.bands[pos] = std::move(bands);
    }
    t.validate();
    return t;
}

void ThresholdTable::validate() const {
    for (const auto& [pos, list] : bands) {
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (list[i].prob_low >= list[i].prob_high) {
                throw ConfigError(std::string("threshold band for '") + to_string(pos) +
                                  "' has non-positive probability range");
            }
            if (i > 0 && !(list[i].cosine_threshold > list[i - 1].cosine_threshold)) {
                throw ConfigError(std::string("threshold bands for '") + to_string(pos) +
                                  "' must be strictly increasing");
            }
            if (i > 0 && list[i].prob_low < list[i - 1].prob_high) {
                throw ConfigError(std::string("threshold bands for '") + to_string(pos) +
                                  "' overlap");
            }
        }
    }
}

void write_threshold_table(const ThresholdTable& t, std::ostream& out) {
    out << "pos\tprob_low\tprob_high\tcosine_threshold\n";
    char lo[32], hi[32], c[32];
    for (const auto& [pos, list] : t.bands) {
        for (const auto& band : list) {
            std::snprintf(lo, sizeof(lo), "%.17g", band.prob_low);
            std::snprintf(hi, sizeof(hi), "%.17g", band.prob_high);
            std::snprintf(c, sizeof(c), "%.17g", band.cosine_threshold);
            out << to_string(pos) << '\t' << lo << '\t' << hi << '\t' << c << '\n';
        }
    }
}

ThresholdTable read_threshold_table(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("threshold table: empty stream");
    ThresholdTable t;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::size_t start = 0;
        for (std::size_t tab = line.find('\t'); true; tab = line.find('\t', start)) {
            if (tab == std::string::npos) {
                f.push_back(line.substr(start));
                break;
            }
            f.push_back(line.substr(start, tab - start));
            start = tab + 1;
        }
        if (f.size() != 4) {
            throw DataError("threshold table line " + std::to_string(lineno) +
                            ": expected 4 fields");
        }
        const auto pos = parse_pos(f[0]);
        if (!pos) throw DataError("threshold table line " + std::to_string(lineno) + ": bad POS");
        const std::string context = "threshold table line " + std::to_string(lineno);
        t.bands[*pos].push_back({parse_double_field(f[1], context),
                                 parse_double_field(f[2], context),
                                 parse_double_field(f[3], context)});
    }
    t.validate();
    return t;
}

void write_graph(const WeightedGraph& g, const std::string& stem) {
    std::string nodes = "token\n";
    for (const auto& n : g.nodes()) {
        nodes += n;
        nodes += '\n';
    }
    atomic_write(stem + ".nodes.tsv", nodes);

    std::string edges = "node_a\tnode_b\tweight\n";
    char w[32];
    for (const auto& e : g.edges()) {
        std::snprintf(w, sizeof(w), "%.17g", e.weight);
        edges += g.nodes()[e.a];
        edges += '\t';
        edges += g.nodes()[e.b];
        edges += '\t';
        edges += w;
        edges += '\n';
    }
    atomic_write(stem + ".edges.tsv", edges);
}

WeightedGraph read_graph(const std::string& stem, GraphKind kind) {
    std::vector<std::string> nodes;
    {
        std::ifstream in(stem + ".nodes.tsv");
        if (!in) throw DataError("cannot open " + stem + ".nodes.tsv");
        std::string line;
        if (!std::getline(in, line)) throw DataError("empty node manifest: " + stem);
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (!line.empty()) nodes.push_back(line);
        }
    }
    std::unordered_map<std::string, std::uint32_t> index;
    for (std::uint32_t i = 0; i < nodes.size(); ++i) index.emplace(nodes[i], i);

    std::vector<GraphEdge> edges;
    std::ifstream in(stem + ".edges.tsv");
    if (!in) throw DataError("cannot open " + stem + ".edges.tsv");
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty edge list: " + stem);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto t1 = line.find('\t');
        const auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t2 == std::string::npos) {
            throw DataError(stem + ".edges.tsv line " + std::to_string(lineno) +
                            ": expected 3 fields");
        }
        const std::string a = line.substr(0, t1);
        const std::string b = line.substr(t1 + 1, t2 - t1 - 1);
        auto ia = index.find(a);
        auto ib = index.find(b);
        if (ia == index.end() || ib == index.end()) {
            throw DataError(stem + ".edges.tsv line " + std::to_string(lineno) +
                            ": edge endpoint not in node manifest");
        }
        const double w = parse_double_field(line.substr(t2 + 1),
                                            stem + ".edges.tsv line " + std::to_string(lineno));
        edges.push_back({std::min(ia->second, ib->second), std::max(ia->second, ib->second), w});
    }
    return WeightedGraph(kind, std::move(nodes), std::move(edges));
}

} // namespace conceptmap
