#include "conceptmap/studies.hpp"

#include "conceptmap/error.hpp"
#include "conceptmap/kernels.hpp"
#include "conceptmap/manifest.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

namespace conceptmap {

namespace {

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

// Tags propagated errors with the failing stage.
template <typename F>
auto stage(const std::string& study, const char* name, F&& f) {
    try {
        return f();
    } catch (const DataError& e) {
        throw DataError(study + "/" + name + ": " + e.what());
    }
}

std::string canonical_config_string(const StudyConfig& cfg) {
    std::ostringstream out;
    out << "seed=" << cfg.seed << '\n';
    out << "language=" << cfg.language << '\n';
    out << "embeddings=" << cfg.embeddings << '\n';
    out << "norms=" << cfg.norms << '\n';
    out << "synonyms=" << cfg.synonyms << '\n';
    out << "strength=" << (cfg.strength ? cfg.strength->name() : "none") << '\n';
    out << "pos=";
    for (std::size_t i = 0; i < cfg.pos.size(); ++i) {
        if (i) out << ',';
        out << to_string(cfg.pos[i]);
    }
    out << '\n';
    out << "threshold_mode=" << cfg.threshold_mode << '\n';
    out << "threshold=" << fmt(cfg.fixed_threshold) << '\n';
    out << "threshold_table=" << cfg.threshold_table << '\n';
    out << "sweep=" << fmt(cfg.sweep_min) << ':' << fmt(cfg.sweep_max) << ':'
        << fmt(cfg.sweep_step) << '\n';
    out << "sample_sizes=";
    for (std::size_t i = 0; i < cfg.sample_sizes.size(); ++i) {
        if (i) out << ',';
        out << cfg.sample_sizes[i];
    }
    out << '\n';
    out << "replicates=" << cfg.replicates_sampling << '/' << cfg.replicates_noise << '\n';
    out << "noise_levels=";
    for (std::size_t i = 0; i < cfg.noise_levels.size(); ++i) {
        if (i) out << ',';
        out << cfg.noise_levels[i];
    }
    out << '\n';
    out << "noise_max_probability=" << fmt(cfg.noise_max_probability) << '\n';
    out << "min_prob=" << fmt(cfg.min_prob) << '\n';
    out << "screen_threshold=" << fmt(cfg.screen_threshold) << '\n';
    out << "sc_threshold=" << fmt(cfg.sc_threshold) << '\n';
    out << "screen=" << (cfg.screen ? 1 : 0) << '\n';
    out << "dtc=" << cfg.dtc_min_cluster_size << ':' << fmt(cfg.dtc_max_join_height) << ':'
        << fmt(cfg.dtc_min_split_height) << '\n';
    out << "infomap_restarts=" << cfg.infomap_restarts << '\n';
    out << "strength_on_mean=" << (cfg.strength_on_mean ? 1 : 0) << '\n';
    out << "normalize_before_sum=" << (cfg.normalize_before_sum ? 1 : 0) << '\n';
    out << "matching=" << cfg.matching << '\n';
    return out.str();
}

std::string hash_hex(const std::string& s) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(s)));
    return buf;
}

StudyInputs finish_inputs(StudyConfig cfg, EmbeddingTable table,
                          std::vector<ResponseCount> records,
                          std::map<std::string, std::vector<std::string>> synonyms,
                          ThresholdTable thresholds) {
    StudyInputs in{std::move(cfg),   std::move(table),    std::move(records), {}, {}, {},
                   std::move(synonyms), std::move(thresholds), "",              {}};
    in.probs = compute_probabilities(in.records);
    in.edges = build_edges(in.probs);
    in.raw_pos = pos_map(in.records);
    in.config_hash = hash_hex(canonical_config_string(in.cfg));
    return in;
}

} // namespace

StudyInputs load_study_inputs(const StudyConfig& cfg) {
    std::vector<ResponseCount> records = load_norms(cfg.norms);

    std::unordered_set<std::string> vocab;
    for (const auto& r : records) {
        vocab.insert(r.cue);
        vocab.insert(r.response);
    }
    EmbeddingTable table = load_embeddings(cfg.embeddings, &vocab);

    std::map<std::string, std::vector<std::string>> synonyms;
    if (!cfg.synonyms.empty()) synonyms = load_synonyms(cfg.synonyms);

    ThresholdTable thresholds = ThresholdTable::published_defaults();
    if (!cfg.threshold_table.empty()) {
        std::ifstream in(cfg.threshold_table);
        if (!in) throw DataError("cannot open threshold table: " + cfg.threshold_table);
        thresholds = read_threshold_table(in);
    }

    StudyInputs in = finish_inputs(cfg, std::move(table), std::move(records), std::move(synonyms),
                                   std::move(thresholds));
    in.fingerprints.emplace_back(cfg.norms, file_fingerprint(cfg.norms));
    in.fingerprints.emplace_back(cfg.embeddings, file_fingerprint(cfg.embeddings));
    if (!cfg.synonyms.empty()) {
        in.fingerprints.emplace_back(cfg.synonyms, file_fingerprint(cfg.synonyms));
    }
    if (!cfg.threshold_table.empty()) {
        in.fingerprints.emplace_back(cfg.threshold_table, file_fingerprint(cfg.threshold_table));
    }
    return in;
}

StudyInputs make_study_inputs(StudyConfig cfg, EmbeddingTable table,
                              std::vector<ResponseCount> records,
                              std::map<std::string, std::vector<std::string>> synonyms) {
    return finish_inputs(std::move(cfg), std::move(table), std::move(records), std::move(synonyms),
                         ThresholdTable::published_defaults());
}

void write_csv(const std::vector<CsvRow>& rows, std::ostream& out) {
    out << "study,cell,k,threshold,replicate,ic,sc,modularity,degree\n";
    for (const auto& r : rows) {
        out << r.study << ',' << r.cell << ',' << r.k << ',' << r.threshold << ',' << r.replicate
            << ',' << r.ic << ',' << r.sc << ',' << r.modularity << ',' << r.degree << '\n';
    }
}

// --- shared pipeline pieces ----------------------------------------------

namespace {

AssociationTable base_table(const StudyInputs& in, const std::string& study,
                            ScreeningSummary* summary = nullptr) {
    AssociationTable table = stage(study, "prescreen", [&] {
        return prescreen(in.edges, in.table, in.raw_pos, in.cfg.min_prob, summary,
                         in.cfg.strength_on_mean);
    });
    if (table.pos.empty()) {
        throw DataError(study + "/prescreen: no word pairs survived pre-screening "
                                "(empty vocabulary overlap?)");
    }
    return table;
}

AssociationTable apply_vector_screening(const StudyInputs& in, AssociationTable table) {
    const VectorScreenResult screen =
        screen_vectors(table.vocabulary(), in.synonyms, in.table, in.cfg.screen_threshold);
    if (screen.excluded.empty()) return table;
    const std::set<std::string> excluded(screen.excluded.begin(), screen.excluded.end());
    AssociationTable out;
    for (const auto& [token, pos] : table.pos) {
        if (!excluded.count(token)) out.pos.emplace(token, pos);
    }
    for (const auto& e : table.edges) {
        if (!excluded.count(e.word_a) && !excluded.count(e.word_b)) out.edges.push_back(e);
    }
    return out;
}

Partition cluster_complete_we(const StudyInputs& in, const std::vector<std::string>& vocab) {
    const Dendrogram dendro = agglomerate(vocab, in.table);
    TreeCutParams params;
    params.min_cluster_size = in.cfg.dtc_min_cluster_size;
    params.max_join_height = in.cfg.dtc_max_join_height;
    params.min_split_height = in.cfg.dtc_min_split_height;
    return dynamic_tree_cut(dendro, vocab, in.table, params);
}

double threshold_for(const StudyInputs& in, Pos pos, const std::optional<StrengthClass>& cls) {
    if (in.cfg.threshold_mode == "fixed") return in.cfg.fixed_threshold;
    return in.thresholds.class_threshold(pos, cls);
}

ConvergenceReport analyze(const StudyInputs& in, const WeightedGraph& wa_g, const Partition& wa_p,
                          const WeightedGraph& we_g, const Partition& we_p,
                          std::vector<ClusterSummary>* wa_summaries_out = nullptr,
                          std::vector<ClusterSummary>* we_summaries_out = nullptr) {
    std::vector<ClusterSummary> wa_summaries =
        summarize_clusters(wa_p, wa_g.nodes(), in.table, in.cfg.normalize_before_sum);
    std::vector<ClusterSummary> we_summaries =
        summarize_clusters(we_p, we_g.nodes(), in.table, in.cfg.normalize_before_sum);
    const ScResult sc = semantic_convergence(wa_summaries, we_summaries, in.cfg.sc_threshold,
                                             in.cfg.matching_mode());
    ConvergenceReport report = make_report(wa_p, we_p, sc, network_stats(wa_g, wa_p),
                                           network_stats(we_g, we_p), in.cfg.seed);
    report.config_hash = in.config_hash;
    report.input_fingerprints = in.fingerprints;
    if (wa_summaries_out) *wa_summaries_out = std::move(wa_summaries);
    if (we_summaries_out) *we_summaries_out = std::move(we_summaries);
    return report;
}

// WE subgraph from a cached condensed cosine matrix.
WeightedGraph we_graph_from_cosines(const std::vector<std::string>& words,
                                    const std::vector<double>& cos, double threshold) {
    const std::size_t n = words.size();
    std::vector<GraphEdge> edges;
    for (std::uint32_t i = 0; i + 1 < n; ++i) {
        for (std::uint32_t j = i + 1; j < n; ++j) {
            const double c = cos[kernels::condensed_index(n, i, j)];
            if (c >= threshold) edges.push_back({i, j, c});
        }
    }
    return WeightedGraph(GraphKind::WE, words, std::move(edges));
}

std::vector<double> sweep_grid(const StudyConfig& cfg) {
    std::vector<double> grid;
    for (int i = 0;; ++i) {
        const double t = cfg.sweep_min + i * cfg.sweep_step;
        if (t > cfg.sweep_max + 1e-9) break;
        grid.push_back(t);
    }
    return grid;
}

} // namespace

// --- study 1 --------------------------------------------------------------

Study1Result run_study1(const StudyInputs& in) {
    const std::string study = "study1";
    AssociationTable table = base_table(in, study);
    if (in.cfg.screen) {
        table = stage(study, "screen", [&] { return apply_vector_screening(in, table); });
    }

    const WeightedGraph wa = stage(study, "wa-graph", [&] { return wa_graph(table); });
    const Partition wa_part = stage(study, "wa-cluster", [&] {
        return infomap_partition(wa, Rng(in.cfg.seed).derive(1).seed(), in.cfg.infomap_restarts);
    });

    const WeightedGraph we =
        stage(study, "we-graph", [&] { return we_graph(wa.nodes(), in.table); });
    const Partition we_part =
        stage(study, "we-cluster", [&] { return cluster_complete_we(in, wa.nodes()); });

    Study1Result result;
    result.vocabulary = wa.nodes();
    result.wa_partition = wa_part;
    result.we_partition = we_part;
    result.report = stage(study, "convergence", [&] {
        return analyze(in, wa, wa_part, we, we_part, &result.wa_summaries, &result.we_summaries);
    });

    for (const char* side : {"wa", "we"}) {
        const NetworkStats& s =
            side[1] == 'a' ? result.report.stats_wa : result.report.stats_we;
        result.csv.push_back({"1", side, "", "", "", fmt(result.report.ic_percent),
                              fmt(result.report.sc_percent), fmt(s.modularity),
                              fmt(s.average_degree)});
    }
    return result;
}

// --- calibration -----------------------------------------------------------

CalibrationResult calibrate_thresholds(const AssociationTable& table, const EmbeddingTable& emb) {
    const std::vector<std::pair<double, double>> ranges = {
        {0.00, 0.01}, {0.05, 0.10}, {0.10, 0.15}, {0.15, 0.20}, {0.20, 1.0 + 1e-9}};

    CalibrationResult result;
    for (Pos pos : {Pos::Noun, Pos::Verb, Pos::Adjective, Pos::Adverb}) {
        std::vector<double> sum(ranges.size(), 0.0);
        std::vector<std::size_t> count(ranges.size(), 0);
        for (const auto& e : table.edges) {
            auto pa = table.pos.find(e.word_a);
            auto pb = table.pos.find(e.word_b);
            if (pa == table.pos.end() || pb == table.pos.end()) continue;
            if (pa->second != pos || pb->second != pos) continue;
            if (!emb.contains(e.word_a) || !emb.contains(e.word_b)) continue;
            const double p = e.max_strength();
            for (std::size_t b = 0; b < ranges.size(); ++b) {
                if (p >= ranges[b].first && p < ranges[b].second) {
                    sum[b] += cosine(emb.vector(e.word_a), emb.vector(e.word_b));
                    ++count[b];
                    break;
                }
            }
        }
        std::vector<ThresholdBand> bands;
        for (std::size_t b = 0; b < ranges.size(); ++b) {
            if (count[b] == 0) {
                result.warnings.push_back(std::string("empty probability band [") +
                                          fmt(ranges[b].first) + ", " + fmt(ranges[b].second) +
                                          ") for POS '" + to_string(pos) + "'; band omitted");
                continue;
            }
            bands.push_back({ranges[b].first, std::min(ranges[b].second, 1.0),
                             sum[b] / static_cast<double>(count[b])});
        }
        if (!bands.empty()) result.table.bands[pos] = std::move(bands);
    }
    return result;
}

// --- study 2 --------------------------------------------------------------

std::string Study2Result::to_json() const {
    nlohmann::ordered_json j;
    j["cells"] = nlohmann::ordered_json::array();
    for (const auto& cell : cells) {
        nlohmann::ordered_json c;
        c["name"] = cell.name;
        c["screened"] = cell.screened;
        c["network"] = cell.pos ? to_string(*cell.pos) : "heterogeneous";
        c["strength"] = cell.strength ? cell.strength->name() : "none";
        if (cell.we_threshold) {
            c["we_threshold"] = *cell.we_threshold;
        } else {
            c["we_threshold"] = nullptr;
        }
        if (!cell.error.empty()) {
            c["error"] = cell.error;
        } else if (cell.report) {
            c["report"] = nlohmann::ordered_json::parse(cell.report->to_json());
        }
        j["cells"].push_back(std::move(c));
    }
    return j.dump(2);
}

Study2Result run_study2(const StudyInputs& in) {
    const std::string study = "study2";
    const AssociationTable unscreened = base_table(in, study);

    // Screened variant shared by all screened cells; failure poisons only
    // those cells.
    std::optional<AssociationTable> screened;
    std::string screened_error;
    if (in.synonyms.empty()) {
        screened_error = "synonyms file required for screened cells";
    } else {
        try {
            screened = apply_vector_screening(in, unscreened);
        } catch (const std::exception& e) {
            screened_error = e.what();
        }
    }

    const std::vector<std::optional<Pos>> networks = {std::nullopt, Pos::Noun, Pos::Verb,
                                                      Pos::Adjective};
    const std::vector<std::optional<StrengthClass>> classes = {
        std::nullopt, StrengthClass{StrengthClass::Level::Low},
        StrengthClass{StrengthClass::Level::Moderate}, StrengthClass{StrengthClass::Level::High}};

    Study2Result result;
    int cell_index = 0;
    for (bool use_screened : {false, true}) {
        // Strength nesting is verified per run for every network variant.
        std::map<std::string, std::vector<std::set<std::pair<std::string, std::string>>>> nesting;

        for (const auto& pos : networks) {
            for (const auto& cls : classes) {
                Study2Cell cell;
                cell.screened = use_screened;
                cell.pos = pos;
                cell.strength = cls;
                cell.name = std::string(use_screened ? "screened" : "unscreened") + ":" +
                            (pos ? to_string(*pos) : "heterogeneous") + ":" +
                            (cls ? cls->name() : "none");
                const std::uint64_t cell_seed = Rng(in.cfg.seed).derive(100 + cell_index).seed();
                ++cell_index;

                try {
                    if (use_screened && !screened) throw DataError(screened_error);
                    AssociationTable table = use_screened ? *screened : unscreened;
                    if (pos) table = split_pos(table).at(*pos);
                    if (cls) table = filter_strength(table, *cls, in.cfg.strength_on_mean);
                    if (table.pos.empty()) throw DataError("empty vocabulary for this cell");

                    {
                        std::set<std::pair<std::string, std::string>> edge_set;
                        for (const auto& e : table.edges) edge_set.emplace(e.word_a, e.word_b);
                        nesting[cell.name.substr(0, cell.name.rfind(':'))].push_back(
                            std::move(edge_set));
                    }

                    const WeightedGraph wa = wa_graph(table);
                    const Partition wa_part =
                        infomap_partition(wa, cell_seed, in.cfg.infomap_restarts);

                    if (pos) {
                        cell.we_threshold = threshold_for(in, *pos, cls);
                        const WeightedGraph we = we_graph(wa.nodes(), in.table, cell.we_threshold);
                        const Partition we_part =
                            infomap_partition(we, Rng(cell_seed).derive(1).seed(),
                                              in.cfg.infomap_restarts);
                        cell.report = analyze(in, wa, wa_part, we, we_part);
                    } else {
                        const WeightedGraph we = we_graph(wa.nodes(), in.table);
                        const Partition we_part = cluster_complete_we(in, wa.nodes());
                        cell.report = analyze(in, wa, wa_part, we, we_part);
                    }
                } catch (const std::exception& e) {
                    cell.error = e.what();
                }

                if (cell.report) {
                    for (const char* side : {"wa", "we"}) {
                        const NetworkStats& s =
                            side[1] == 'a' ? cell.report->stats_wa : cell.report->stats_we;
                        result.csv.push_back(
                            {"2", cell.name + ":" + side, "",
                             cell.we_threshold ? fmt(*cell.we_threshold) : "", "",
                             fmt(cell.report->ic_percent), fmt(cell.report->sc_percent),
                             fmt(s.modularity), fmt(s.average_degree)});
                    }
                }
                result.cells.push_back(std::move(cell));
            }
        }

        for (const auto& [name, sets] : nesting) {
            for (std::size_t i = 1; i < sets.size(); ++i) {
                if (!std::includes(sets[i - 1].begin(), sets[i - 1].end(), sets[i].begin(),
                                   sets[i].end())) {
                    throw std::logic_error("strength nesting violated for " + name);
                }
            }
        }
    }
    return result;
}

// --- study 3: sampling ------------------------------------------------------

std::vector<std::string> sample_concepts(const Partition& wa_partition,
                                         const std::vector<std::string>& nodes, int k, Rng& rng) {
    if (wa_partition.size() != nodes.size()) {
        throw DataError("sample_concepts: partition does not cover node list");
    }
    const int available = static_cast<int>(wa_partition.cluster_count());
    if (k < 1 || k > available) {
        throw DataError("sample_concepts: k = " + std::to_string(k) + " outside [1, " +
                        std::to_string(available) + "]");
    }
    std::vector<std::uint32_t> cluster_ids(available);
    std::iota(cluster_ids.begin(), cluster_ids.end(), 0u);
    // Partial Fisher-Yates: the first k entries are a uniform k-subset.
    for (int i = 0; i < k; ++i) {
        const std::size_t j = i + rng.uniform_int(available - i);
        std::swap(cluster_ids[i], cluster_ids[j]);
    }
    std::set<std::uint32_t> chosen(cluster_ids.begin(), cluster_ids.begin() + k);

    std::vector<std::string> out;
    for (std::size_t v = 0; v < nodes.size(); ++v) {
        if (chosen.count(wa_partition[v])) out.push_back(nodes[v]);
    }
    return out;
}

std::string SamplingStudyResult::to_json() const {
    nlohmann::ordered_json j;
    j["sweeps"] = nlohmann::ordered_json::array();
    for (const auto& s : sweeps) {
        nlohmann::ordered_json e;
        e["pos"] = to_string(s.pos);
        e["concept_count"] = s.concept_count;
        e["optimal_threshold"] = s.optimal_threshold;
        e["mean_ic_at_optimal"] = s.mean_ic_at_optimal;
        e["curve"] = nlohmann::ordered_json::array();
        for (const auto& p : s.curve) {
            e["curve"].push_back({{"threshold", p.threshold}, {"mean_ic", p.mean_ic}});
        }
        j["sweeps"].push_back(std::move(e));
    }
    j["warnings"] = warnings;
    return j.dump(2);
}

SamplingStudyResult run_sampling_study(const StudyInputs& in) {
    const std::string study = "study3-sample";
    AssociationTable base = base_table(in, study);
    if (in.cfg.screen) base = apply_vector_screening(in, base);
    const auto by_pos = split_pos(base);
    const std::vector<double> grid = sweep_grid(in.cfg);

    SamplingStudyResult result;
    int pos_index = 0;
    for (Pos pos : in.cfg.pos) {
        const Rng pos_rng = Rng(in.cfg.seed).derive(200 + pos_index);
        ++pos_index;

        AssociationTable table =
            filter_strength(by_pos.at(pos), StrengthClass{StrengthClass::Level::High},
                            in.cfg.strength_on_mean);
        if (table.edges.empty()) {
            result.warnings.push_back(std::string("no High-strength edges for POS '") +
                                      to_string(pos) + "'; skipped");
            continue;
        }
        const WeightedGraph wa = wa_graph(table);
        const Partition wa_part =
            infomap_partition(wa, pos_rng.derive(0).seed(), in.cfg.infomap_restarts);
        const int available = static_cast<int>(wa_part.cluster_count());

        for (int k : in.cfg.sample_sizes) {
            if (k > available) {
                result.warnings.push_back(std::string("POS '") + to_string(pos) + "': k = " +
                                          std::to_string(k) + " exceeds " +
                                          std::to_string(available) + " clusters; skipped");
                continue;
            }
            const int reps = in.cfg.replicates_sampling;
            // ic_by[r][t]
            std::vector<std::vector<double>> ic_by(reps, std::vector<double>(grid.size(), 0.0));

#pragma omp parallel for schedule(dynamic) num_threads(kernels::max_threads())
            for (int r = 0; r < reps; ++r) {
                Rng rng = pos_rng.derive(1).derive(k).derive(r);
                // Sample k clusters, restrict WA to them.
                std::vector<std::uint32_t> node_idx;
                {
                    const std::vector<std::string> sampled =
                        sample_concepts(wa_part, wa.nodes(), k, rng);
                    std::unordered_set<std::string> sampled_set(sampled.begin(), sampled.end());
                    for (std::uint32_t v = 0; v < wa.nodes().size(); ++v) {
                        if (sampled_set.count(wa.nodes()[v])) node_idx.push_back(v);
                    }
                }
                std::vector<std::string> words;
                words.reserve(node_idx.size());
                for (std::uint32_t v : node_idx) words.push_back(wa.nodes()[v]);
                const Partition wa_sub = wa_part.restrict_to(node_idx);

                std::vector<double> data(words.size() * in.table.dim());
                for (std::size_t i = 0; i < words.size(); ++i) {
                    const auto vec = in.table.vector(words[i]);
                    std::copy(vec.begin(), vec.end(), data.begin() + i * in.table.dim());
                }
                const std::vector<double> cos =
                    words.size() >= 2
                        ? kernels::cosine_matrix(data.data(), words.size(), in.table.dim())
                        : std::vector<double>{};

                for (std::size_t t = 0; t < grid.size(); ++t) {
                    const WeightedGraph we = we_graph_from_cosines(words, cos, grid[t]);
                    const Partition we_part = infomap_partition(
                        we, rng.derive(1000 + t).seed(), in.cfg.infomap_restarts);
                    ic_by[r][t] = informational_convergence(wa_sub, we_part);
                }
            }

            SweepResult sweep;
            sweep.pos = pos;
            sweep.concept_count = k;
            for (std::size_t t = 0; t < grid.size(); ++t) {
                double sum = 0.0;
                for (int r = 0; r < reps; ++r) sum += ic_by[r][t];
                sweep.curve.push_back({grid[t], sum / reps});
            }
            sweep.optimal_threshold = sweep.curve.front().threshold;
            sweep.mean_ic_at_optimal = sweep.curve.front().mean_ic;
            for (const auto& p : sweep.curve) {
                if (p.mean_ic > sweep.mean_ic_at_optimal) {
                    sweep.mean_ic_at_optimal = p.mean_ic;
                    sweep.optimal_threshold = p.threshold;
                }
            }

            for (int r = 0; r < reps; ++r) {
                for (std::size_t t = 0; t < grid.size(); ++t) {
                    result.csv.push_back({"3-sample", to_string(pos), std::to_string(k),
                                          fmt(grid[t]), std::to_string(r), fmt(ic_by[r][t]), "",
                                          "", ""});
                }
            }
            result.sweeps.push_back(std::move(sweep));
        }
    }
    return result;
}

// --- study 3: noise ---------------------------------------------------------

std::string NoiseStudyResult::to_json() const {
    nlohmann::ordered_json j;
    j["networks"] = nlohmann::ordered_json::array();
    for (const auto& n : per_pos) {
        nlohmann::ordered_json e;
        e["pos"] = to_string(n.pos);
        e["baseline_ic"] = n.baseline_ic;
        e["noise_pool_size"] = n.pool_size;
        e["curve"] = nlohmann::ordered_json::array();
        for (const auto& [level, ic] : n.curve) {
            e["curve"].push_back({{"noise_words", level}, {"mean_ic", ic}});
        }
        j["networks"].push_back(std::move(e));
    }
    j["warnings"] = warnings;
    return j.dump(2);
}

NoiseStudyResult run_noise_study(const StudyInputs& in) {
    const std::string study = "study3-noise";
    AssociationTable base = base_table(in, study);
    if (in.cfg.screen) base = apply_vector_screening(in, base);
    const auto by_pos = split_pos(base);

    NoiseStudyResult result;
    int pos_index = 0;
    for (Pos pos : in.cfg.pos) {
        const Rng pos_rng = Rng(in.cfg.seed).derive(300 + pos_index);
        ++pos_index;

        AssociationTable table =
            filter_strength(by_pos.at(pos), StrengthClass{StrengthClass::Level::Moderate},
                            in.cfg.strength_on_mean);
        if (table.edges.empty()) {
            result.warnings.push_back(std::string("no Moderate-strength edges for POS '") +
                                      to_string(pos) + "'; skipped");
            continue;
        }
        const WeightedGraph wa = wa_graph(table);
        const Partition wa_part =
            infomap_partition(wa, pos_rng.derive(0).seed(), in.cfg.infomap_restarts);
        const std::vector<std::string>& vocab = wa.nodes();
        const std::unordered_set<std::string> vocab_set(vocab.begin(), vocab.end());

        const double threshold =
            threshold_for(in, pos, StrengthClass{StrengthClass::Level::Moderate});
        const WeightedGraph we_baseline = we_graph(vocab, in.table, threshold);
        const Partition we_baseline_part = infomap_partition(
            we_baseline, pos_rng.derive(1).seed(), in.cfg.infomap_restarts);
        const double baseline_ic = informational_convergence(wa_part, we_baseline_part);

        // Weak-word pool: embedded, outside the network, every directed
        // probability against the vocabulary below the cutoff.
        std::vector<std::string> pool;
        {
            std::map<std::string, double> max_prob;
            for (const auto& [pair, p] : in.probs) {
                const auto& [cue, response] = pair;
                if (vocab_set.count(cue) && !vocab_set.count(response)) {
                    auto [it, _] = max_prob.emplace(response, 0.0);
                    it->second = std::max(it->second, p);
                } else if (!vocab_set.count(cue) && vocab_set.count(response)) {
                    auto [it, _] = max_prob.emplace(cue, 0.0);
                    it->second = std::max(it->second, p);
                }
            }
            for (const auto& [word, p] : max_prob) {
                if (p < in.cfg.noise_max_probability && in.table.contains(word)) {
                    pool.push_back(word);
                }
            }
        }
        if (pool.empty()) {
            throw DataError(study + ": empty weak-word pool for POS '" +
                            std::string(to_string(pos)) + "'");
        }

        NoiseStudyResult::PerPos per;
        per.pos = pos;
        per.baseline_ic = baseline_ic;
        per.pool_size = pool.size();

        for (int level : in.cfg.noise_levels) {
            const int reps = in.cfg.replicates_noise;
            std::vector<double> ic_by(reps, baseline_ic);

            if (level > 0) {
                if (static_cast<std::size_t>(level) > pool.size()) {
                    throw DataError(study + ": noise level " + std::to_string(level) +
                                    " exceeds pool size " + std::to_string(pool.size()));
                }
#pragma omp parallel for schedule(dynamic) num_threads(kernels::max_threads())
                for (int r = 0; r < reps; ++r) {
                    Rng rng = pos_rng.derive(2).derive(level).derive(r);
                    std::vector<std::string> chosen = pool;
                    for (int i = 0; i < level; ++i) {
                        const std::size_t j = i + rng.uniform_int(chosen.size() - i);
                        std::swap(chosen[i], chosen[j]);
                    }
                    chosen.resize(level);
                    std::sort(chosen.begin(), chosen.end());

                    std::vector<std::string> words = vocab;
                    words.insert(words.end(), chosen.begin(), chosen.end());
                    const WeightedGraph we = we_graph(words, in.table, threshold);
                    const Partition we_part = infomap_partition(we, rng.derive(1).seed(),
                                                                in.cfg.infomap_restarts);
                    // Project noise words out: compare over the original
                    // vocabulary only.
                    std::vector<std::uint32_t> original(vocab.size());
                    std::iota(original.begin(), original.end(), 0u);
                    ic_by[r] = informational_convergence(wa_part, we_part.restrict_to(original));
                }
            }

            double sum = 0.0;
            for (int r = 0; r < reps; ++r) {
                sum += ic_by[r];
                result.csv.push_back({"3-noise", to_string(pos), std::to_string(level),
                                      fmt(threshold), std::to_string(r), fmt(ic_by[r]), "", "",
                                      ""});
            }
            per.curve.emplace_back(level, sum / reps);
        }
        result.per_pos.push_back(std::move(per));
    }
    return result;
}

} // namespace conceptmap
