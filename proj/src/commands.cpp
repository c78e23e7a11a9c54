#include "conceptmap/commands.hpp"

#include "conceptmap/assoc.hpp"
#include "conceptmap/config.hpp"
#include "conceptmap/convergence.hpp"
#include "conceptmap/embedding.hpp"
#include "conceptmap/error.hpp"
#include "conceptmap/graph.hpp"
#include "conceptmap/kernels.hpp"
#include "conceptmap/linkage.hpp"
#include "conceptmap/manifest.hpp"
#include "conceptmap/map_equation.hpp"
#include "conceptmap/partition.hpp"
#include "conceptmap/studies.hpp"
#include "conceptmap/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace conceptmap {

namespace {

namespace fs = std::filesystem;

std::string join_args(int argc, const char* const* argv) {
    std::string out;
    for (int i = 0; i < argc; ++i) {
        if (i) out += ' ';
        out += argv[i];
    }
    return out;
}

RunManifest start_manifest(int argc, const char* const* argv, std::uint64_t seed) {
    RunManifest m;
    m.command_line = join_args(argc, argv);
    m.seed = seed;
    m.tool_version = tool_version_string();
    m.started_at = iso8601_now();
    return m;
}

void finish_manifest(RunManifest& m, const std::string& path) {
    m.finished_at = iso8601_now();
    m.write(path);
}

std::vector<std::string> read_node_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open node manifest: " + path);
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty node manifest: " + path);
    std::vector<std::string> nodes;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) nodes.push_back(line);
    }
    return nodes;
}

Partition load_partition(const std::string& path, const std::vector<std::string>& nodes) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open partition file: " + path);
    return read_partition(in, nodes);
}

template <typename F>
std::string capture(F&& write_fn) {
    std::ostringstream out;
    write_fn(out);
    return out.str();
}

// --- subcommand payloads --------------------------------------------------

struct SynthArgs {
    int concepts = 10, words = 6, weak = 20;
    std::size_t dim = 64;
    std::uint64_t seed = 1;
    bool no_bridges = false, all_nouns = false;
    std::string out_dir = ".";
};

int cmd_synth(const SynthArgs& a, int argc, const char* const* argv) {
    SynthSpec spec;
    spec.concepts = a.concepts;
    spec.words_per_concept = a.words;
    spec.dim = a.dim;
    spec.weak_words = a.weak;
    spec.bridges = !a.no_bridges;
    spec.round_robin_pos = !a.all_nouns;
    spec.seed = a.seed;
    write_synthetic(generate_synthetic(spec), a.out_dir);

    RunManifest m = start_manifest(argc, argv, a.seed);
    for (const char* f : {"embeddings.vec", "norms.tsv", "synonyms.tsv", "truth.tsv"}) {
        m.outputs.push_back((fs::path(a.out_dir) / f).string());
    }
    finish_manifest(m, (fs::path(a.out_dir) / "manifest.json").string());
    std::cout << "wrote synthetic dataset (" << a.concepts << " concepts) to " << a.out_dir
              << "\n";
    return 0;
}

struct IngestArgs {
    std::string norms, synonyms, out;
};

int cmd_ingest(const IngestArgs& a, int argc, const char* const* argv) {
    const std::vector<ResponseCount> records = load_norms(a.norms);
    const DirectedProbabilities probs = compute_probabilities(records);
    RawAssociationData data;
    data.edges = build_edges(probs);
    data.raw_pos = pos_map(records);

    std::size_t synonym_entries = 0;
    if (!a.synonyms.empty()) synonym_entries = load_synonyms(a.synonyms).size();

    atomic_write(a.out, capture([&](std::ostream& o) { write_raw_association(data, o); }));

    nlohmann::ordered_json summary;
    summary["records"] = records.size();
    summary["directed_pairs"] = probs.size();
    summary["bidirectional_edges"] = data.edges.size();
    summary["dropped_one_directional"] = probs.size() - 2 * data.edges.size();
    summary["synonym_entries"] = synonym_entries;
    atomic_write(a.out + ".summary.json", summary.dump(2));

    RunManifest m = start_manifest(argc, argv, 0);
    m.add_input(a.norms);
    if (!a.synonyms.empty()) m.add_input(a.synonyms);
    m.outputs = {a.out, a.out + ".summary.json"};
    finish_manifest(m, a.out + ".manifest.json");
    std::cout << "ingested " << records.size() << " records -> " << data.edges.size()
              << " bidirectional edges\n";
    return 0;
}

struct BuildWaArgs {
    std::string table, embeddings, out, strength, pos;
    double min_prob = 0.05;
    bool mean_strength = false;
};

int cmd_build_wa(const BuildWaArgs& a, int argc, const char* const* argv) {
    std::ifstream in(a.table);
    if (!in) throw DataError("cannot open association table: " + a.table);
    const RawAssociationData data = read_raw_association(in);

    std::unordered_set<std::string> vocab;
    for (const auto& [token, _] : data.raw_pos) vocab.insert(token);
    const EmbeddingTable emb = load_embeddings(a.embeddings, &vocab);

    ScreeningSummary summary;
    AssociationTable table =
        prescreen(data.edges, emb, data.raw_pos, a.min_prob, &summary, a.mean_strength);
    if (!a.pos.empty() && a.pos != "all") {
        const auto pos = parse_pos(a.pos);
        if (!pos) throw ConfigError("unknown POS '" + a.pos + "'");
        table = split_pos(table).at(*pos);
    }
    if (!a.strength.empty() && a.strength != "none") {
        const auto cls = StrengthClass::parse(a.strength);
        if (!cls) throw ConfigError("unknown strength class '" + a.strength + "'");
        table = filter_strength(table, *cls, a.mean_strength);
    }
    if (table.pos.empty()) throw DataError("no words survived screening/filtering");

    const WeightedGraph g = wa_graph(table);
    write_graph(g, a.out);
    atomic_write(a.out + ".screening.json", summary.to_json());

    RunManifest m = start_manifest(argc, argv, 0);
    m.add_input(a.table);
    m.add_input(a.embeddings);
    m.outputs = {a.out + ".nodes.tsv", a.out + ".edges.tsv", a.out + ".screening.json"};
    finish_manifest(m, a.out + ".manifest.json");
    std::cout << "WA graph: " << g.node_count() << " nodes, " << g.edge_count() << " edges\n";
    return 0;
}

struct BuildWeArgs {
    std::string nodes, embeddings, out, strength, pos, threshold_table;
    double threshold = -2.0; // < -1 means unset
};

int cmd_build_we(const BuildWeArgs& a, int argc, const char* const* argv) {
    const std::vector<std::string> words = read_node_manifest(a.nodes);
    std::unordered_set<std::string> vocab(words.begin(), words.end());
    const EmbeddingTable emb = load_embeddings(a.embeddings, &vocab);

    std::optional<double> threshold;
    if (a.threshold >= -1.0) {
        threshold = a.threshold;
    } else if (!a.pos.empty() && a.pos != "all") {
        const auto pos = parse_pos(a.pos);
        if (!pos) throw ConfigError("unknown POS '" + a.pos + "'");
        std::optional<StrengthClass> cls;
        if (!a.strength.empty() && a.strength != "none") {
            cls = StrengthClass::parse(a.strength);
            if (!cls) throw ConfigError("unknown strength class '" + a.strength + "'");
        }
        ThresholdTable t = ThresholdTable::published_defaults();
        if (!a.threshold_table.empty()) {
            std::ifstream in(a.threshold_table);
            if (!in) throw DataError("cannot open threshold table: " + a.threshold_table);
            t = read_threshold_table(in);
        }
        threshold = t.class_threshold(*pos, cls);
    }

    const WeightedGraph g = we_graph(words, emb, threshold);
    write_graph(g, a.out);

    RunManifest m = start_manifest(argc, argv, 0);
    m.add_input(a.nodes);
    m.add_input(a.embeddings);
    m.outputs = {a.out + ".nodes.tsv", a.out + ".edges.tsv"};
    finish_manifest(m, a.out + ".manifest.json");
    std::cout << "WE graph: " << g.node_count() << " nodes, " << g.edge_count() << " edges"
              << (threshold ? " (threshold " + std::to_string(*threshold) + ")" : " (complete)")
              << "\n";
    return 0;
}

struct ClusterArgs {
    std::string graph, algo = "infomap", embeddings, out, dendrogram_out;
    std::string kind = "wa";
    std::uint64_t seed = 42;
    int restarts = 8;
    std::size_t dtc_min_size = 2;
    double dtc_max_join = 0.99, dtc_min_split = 0.0;
};

int cmd_cluster(const ClusterArgs& a, int argc, const char* const* argv) {
    const GraphKind kind = a.kind == "we" ? GraphKind::WE : GraphKind::WA;
    const WeightedGraph g = read_graph(a.graph, kind);

    Partition p;
    std::string dendro_text;
    if (a.algo == "infomap") {
        p = infomap_partition(g, a.seed, a.restarts);
    } else if (a.algo == "agglomerative") {
        if (a.embeddings.empty()) {
            throw ConfigError("agglomerative clustering needs --embeddings");
        }
        std::unordered_set<std::string> vocab(g.nodes().begin(), g.nodes().end());
        const EmbeddingTable emb = load_embeddings(a.embeddings, &vocab);
        const Dendrogram d = agglomerate(g.nodes(), emb);
        TreeCutParams params{a.dtc_min_size, a.dtc_max_join, a.dtc_min_split};
        p = dynamic_tree_cut(d, g.nodes(), emb, params);
        dendro_text = capture([&](std::ostream& o) { write_dendrogram(d, o); });
    } else {
        throw ConfigError("unknown algorithm '" + a.algo + "' (infomap|agglomerative)");
    }

    atomic_write(a.out, capture([&](std::ostream& o) { write_partition(p, g.nodes(), o); }));
    if (!a.dendrogram_out.empty()) {
        if (dendro_text.empty()) throw ConfigError("--dendrogram-out requires agglomerative");
        atomic_write(a.dendrogram_out, dendro_text);
    }

    RunManifest m = start_manifest(argc, argv, a.seed);
    m.add_input(a.graph + ".nodes.tsv");
    m.add_input(a.graph + ".edges.tsv");
    m.outputs = {a.out};
    if (!a.dendrogram_out.empty()) m.outputs.push_back(a.dendrogram_out);
    finish_manifest(m, a.out + ".manifest.json");
    std::cout << p.cluster_count() << " clusters over " << g.node_count() << " nodes\n";
    return 0;
}

struct CompareArgs {
    std::string wa_graph, we_graph, wa_partition, we_partition, embeddings, out_dir = ".";
    double sc_threshold = 0.726;
    std::string matching = "optimal";
    bool normalize_before_sum = false;
};

int cmd_compare(const CompareArgs& a, int argc, const char* const* argv) {
    const WeightedGraph wa = read_graph(a.wa_graph, GraphKind::WA);
    const WeightedGraph we = read_graph(a.we_graph, GraphKind::WE);
    if (wa.nodes() != we.nodes()) {
        throw DataError("WA and WE graphs cover different node lists; convergence is undefined");
    }
    const Partition wa_p = load_partition(a.wa_partition, wa.nodes());
    const Partition we_p = load_partition(a.we_partition, we.nodes());

    std::unordered_set<std::string> vocab(wa.nodes().begin(), wa.nodes().end());
    const EmbeddingTable emb = load_embeddings(a.embeddings, &vocab);

    const auto wa_summaries = summarize_clusters(wa_p, wa.nodes(), emb, a.normalize_before_sum);
    const auto we_summaries = summarize_clusters(we_p, we.nodes(), emb, a.normalize_before_sum);
    const MatchingMode mode =
        a.matching == "greedy" ? MatchingMode::Greedy : MatchingMode::Optimal;
    const ScResult sc = semantic_convergence(wa_summaries, we_summaries, a.sc_threshold, mode);
    const ConvergenceReport report = make_report(wa_p, we_p, sc, network_stats(wa, wa_p),
                                                 network_stats(we, we_p), 0);

    fs::create_directories(a.out_dir);
    const std::string report_path = (fs::path(a.out_dir) / "report.json").string();
    const std::string pairs_path = (fs::path(a.out_dir) / "pairs.tsv").string();
    atomic_write(report_path, report.to_json());
    atomic_write(pairs_path, capture([&](std::ostream& o) {
                     write_pairs_tsv(report, wa_summaries, we_summaries, o);
                 }));

    RunManifest m = start_manifest(argc, argv, 0);
    for (const auto& stem : {a.wa_graph, a.we_graph}) {
        m.add_input(stem + ".nodes.tsv");
        m.add_input(stem + ".edges.tsv");
    }
    m.add_input(a.wa_partition);
    m.add_input(a.we_partition);
    m.outputs = {report_path, pairs_path};
    finish_manifest(m, (fs::path(a.out_dir) / "manifest.json").string());
    std::cout << "IC " << report.ic_percent << "  SC " << report.sc_percent << "\n";
    return 0;
}

struct StatsArgs {
    std::string graph, partition, kind = "wa", out;
};

int cmd_stats(const StatsArgs& a, int argc, const char* const* argv) {
    const GraphKind kind = a.kind == "we" ? GraphKind::WE : GraphKind::WA;
    const WeightedGraph g = read_graph(a.graph, kind);
    const Partition p = load_partition(a.partition, g.nodes());
    const NetworkStats stats = network_stats(g, p);

    std::cout << stats.to_json() << "\n";
    if (!a.out.empty()) {
        atomic_write(a.out, stats.to_json());
        RunManifest m = start_manifest(argc, argv, 0);
        m.add_input(a.graph + ".nodes.tsv");
        m.add_input(a.graph + ".edges.tsv");
        m.add_input(a.partition);
        m.outputs = {a.out};
        finish_manifest(m, a.out + ".manifest.json");
    }
    return 0;
}

struct CalibrateArgs {
    std::string norms, embeddings, out;
    double min_prob = 0.0; // keep every band populated by default
};

int cmd_calibrate(const CalibrateArgs& a, int argc, const char* const* argv) {
    const std::vector<ResponseCount> records = load_norms(a.norms);
    std::unordered_set<std::string> vocab;
    for (const auto& r : records) {
        vocab.insert(r.cue);
        vocab.insert(r.response);
    }
    const EmbeddingTable emb = load_embeddings(a.embeddings, &vocab);
    const AssociationTable table =
        prescreen(build_edges(compute_probabilities(records)), emb, pos_map(records), a.min_prob);

    const CalibrationResult result = calibrate_thresholds(table, emb);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    atomic_write(a.out,
                 capture([&](std::ostream& o) { write_threshold_table(result.table, o); }));

    RunManifest m = start_manifest(argc, argv, 0);
    m.add_input(a.norms);
    m.add_input(a.embeddings);
    m.outputs = {a.out};
    finish_manifest(m, a.out + ".manifest.json");
    return 0;
}

struct RunArgs {
    std::string study, config_path, out_dir = ".";
    std::int64_t seed = -1; // override when >= 0
    int threads = -1;
};

int cmd_run(const RunArgs& a, int argc, const char* const* argv) {
    if (a.study != "1" && a.study != "2" && a.study != "3-sample" && a.study != "3-noise") {
        throw ConfigError("unknown study '" + a.study + "' (1|2|3-sample|3-noise)");
    }
    std::vector<std::string> errors;
    StudyConfig cfg = StudyConfig::from_file(a.config_path, errors);
    if (!errors.empty()) {
        for (const auto& e : errors) std::cerr << "config error: " << e << "\n";
        throw ConfigError(std::to_string(errors.size()) + " config error(s) in " + a.config_path);
    }
    if (a.seed >= 0) cfg.seed = static_cast<std::uint64_t>(a.seed);
    if (a.threads >= 0) cfg.threads = a.threads;
    kernels::set_max_threads(cfg.threads);

    const StudyInputs inputs = load_study_inputs(cfg);
    fs::create_directories(a.out_dir);
    const auto out = [&](const char* name) { return (fs::path(a.out_dir) / name).string(); };

    RunManifest manifest = start_manifest(argc, argv, cfg.seed);
    manifest.config_path = a.config_path;
    manifest.config_hash = inputs.config_hash;
    manifest.inputs = inputs.fingerprints;

    if (a.study == "1") {
        const Study1Result r = run_study1(inputs);
        atomic_write(out("report.json"), r.report.to_json());
        atomic_write(out("pairs.tsv"), capture([&](std::ostream& o) {
                         write_pairs_tsv(r.report, r.wa_summaries, r.we_summaries, o);
                     }));
        atomic_write(out("wa_partition.tsv"), capture([&](std::ostream& o) {
                         write_partition(r.wa_partition, r.vocabulary, o);
                     }));
        atomic_write(out("we_partition.tsv"), capture([&](std::ostream& o) {
                         write_partition(r.we_partition, r.vocabulary, o);
                     }));
        atomic_write(out("results.csv"), capture([&](std::ostream& o) { write_csv(r.csv, o); }));
        manifest.outputs = {out("report.json"), out("pairs.tsv"), out("wa_partition.tsv"),
                            out("we_partition.tsv"), out("results.csv")};
        std::cout << "study 1: IC " << r.report.ic_percent << "  SC " << r.report.sc_percent
                  << "\n";
    } else if (a.study == "2") {
        const Study2Result r = run_study2(inputs);
        atomic_write(out("study2.json"), r.to_json());
        atomic_write(out("results.csv"), capture([&](std::ostream& o) { write_csv(r.csv, o); }));
        manifest.outputs = {out("study2.json"), out("results.csv")};
        std::size_t failed = 0;
        for (const auto& cell : r.cells) {
            if (!cell.error.empty()) {
                ++failed;
                std::cerr << "cell " << cell.name << " failed: " << cell.error << "\n";
            }
        }
        std::cout << "study 2: " << r.cells.size() - failed << "/" << r.cells.size()
                  << " cells computed\n";
    } else if (a.study == "3-sample") {
        const SamplingStudyResult r = run_sampling_study(inputs);
        for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
        atomic_write(out("sampling.json"), r.to_json());
        atomic_write(out("results.csv"), capture([&](std::ostream& o) { write_csv(r.csv, o); }));
        manifest.outputs = {out("sampling.json"), out("results.csv")};
        std::cout << "study 3 sampling: " << r.sweeps.size() << " sweep blocks\n";
    } else if (a.study == "3-noise") {
        const NoiseStudyResult r = run_noise_study(inputs);
        for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
        atomic_write(out("noise.json"), r.to_json());
        atomic_write(out("results.csv"), capture([&](std::ostream& o) { write_csv(r.csv, o); }));
        manifest.outputs = {out("noise.json"), out("results.csv")};
        std::cout << "study 3 noise: " << r.per_pos.size() << " networks\n";
    } else {
        throw ConfigError("unknown study '" + a.study + "' (1|2|3-sample|3-noise)");
    }

    finish_manifest(manifest, out("manifest.json"));
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"conceptmap: convergence of word-association and word-embedding networks"};
    app.require_subcommand(1);

    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "generate a planted synthetic dataset");
    synth_cmd->add_option("--concepts", synth.concepts)->check(CLI::PositiveNumber);
    synth_cmd->add_option("--words-per-concept", synth.words)->check(CLI::PositiveNumber);
    synth_cmd->add_option("--dim", synth.dim);
    synth_cmd->add_option("--weak-words", synth.weak);
    synth_cmd->add_option("--seed", synth.seed);
    synth_cmd->add_flag("--no-bridges", synth.no_bridges);
    synth_cmd->add_flag("--all-nouns", synth.all_nouns);
    synth_cmd->add_option("--out-dir", synth.out_dir);

    IngestArgs ingest;
    auto* ingest_cmd = app.add_subcommand("ingest", "norms TSV -> canonical association table");
    ingest_cmd->add_option("--norms", ingest.norms)->required();
    ingest_cmd->add_option("--synonyms", ingest.synonyms);
    ingest_cmd->add_option("--out", ingest.out)->required();

    BuildWaArgs build_wa;
    auto* build_wa_cmd = app.add_subcommand("build-wa", "association table -> screened WA graph");
    build_wa_cmd->add_option("--table", build_wa.table)->required();
    build_wa_cmd->add_option("--embeddings", build_wa.embeddings)->required();
    build_wa_cmd->add_option("--out", build_wa.out)->required();
    build_wa_cmd->add_option("--min-prob", build_wa.min_prob);
    build_wa_cmd->add_option("--strength", build_wa.strength)
        ->check(CLI::IsMember({"none", "low", "moderate", "high"}));
    build_wa_cmd->add_option("--pos", build_wa.pos)
        ->check(CLI::IsMember({"noun", "verb", "adjective", "adverb", "all"}));
    build_wa_cmd->add_flag("--mean-strength", build_wa.mean_strength);

    BuildWeArgs build_we;
    auto* build_we_cmd = app.add_subcommand("build-we", "node manifest -> WE cosine graph");
    build_we_cmd->add_option("--nodes", build_we.nodes)->required();
    build_we_cmd->add_option("--embeddings", build_we.embeddings)->required();
    build_we_cmd->add_option("--out", build_we.out)->required();
    build_we_cmd->add_option("--threshold", build_we.threshold);
    build_we_cmd->add_option("--strength", build_we.strength)
        ->check(CLI::IsMember({"none", "low", "moderate", "high"}));
    build_we_cmd->add_option("--pos", build_we.pos)
        ->check(CLI::IsMember({"noun", "verb", "adjective", "adverb", "all"}));
    build_we_cmd->add_option("--threshold-table", build_we.threshold_table);

    ClusterArgs cluster;
    auto* cluster_cmd = app.add_subcommand("cluster", "derive a partition from a graph");
    cluster_cmd->add_option("--graph", cluster.graph)->required();
    cluster_cmd->add_option("--kind", cluster.kind)->check(CLI::IsMember({"wa", "we"}));
    cluster_cmd->add_option("--algo", cluster.algo)
        ->check(CLI::IsMember({"infomap", "agglomerative"}));
    cluster_cmd->add_option("--embeddings", cluster.embeddings);
    cluster_cmd->add_option("--seed", cluster.seed);
    cluster_cmd->add_option("--restarts", cluster.restarts)->check(CLI::PositiveNumber);
    cluster_cmd->add_option("--min-cluster-size", cluster.dtc_min_size);
    cluster_cmd->add_option("--max-join-height", cluster.dtc_max_join);
    cluster_cmd->add_option("--min-split-height", cluster.dtc_min_split);
    cluster_cmd->add_option("--out", cluster.out)->required();
    cluster_cmd->add_option("--dendrogram-out", cluster.dendrogram_out);

    CompareArgs compare;
    auto* compare_cmd = app.add_subcommand("compare", "convergence report for two partitions");
    compare_cmd->add_option("--wa-graph", compare.wa_graph)->required();
    compare_cmd->add_option("--we-graph", compare.we_graph)->required();
    compare_cmd->add_option("--wa-partition", compare.wa_partition)->required();
    compare_cmd->add_option("--we-partition", compare.we_partition)->required();
    compare_cmd->add_option("--embeddings", compare.embeddings)->required();
    compare_cmd->add_option("--sc-threshold", compare.sc_threshold);
    compare_cmd->add_option("--matching", compare.matching)
        ->check(CLI::IsMember({"optimal", "greedy"}));
    compare_cmd->add_flag("--normalize-before-sum", compare.normalize_before_sum);
    compare_cmd->add_option("--out-dir", compare.out_dir);

    StatsArgs stats;
    auto* stats_cmd = app.add_subcommand("stats", "modularity/degree/sparsity of a partition");
    stats_cmd->add_option("--graph", stats.graph)->required();
    stats_cmd->add_option("--partition", stats.partition)->required();
    stats_cmd->add_option("--kind", stats.kind)->check(CLI::IsMember({"wa", "we"}));
    stats_cmd->add_option("--out", stats.out);

    CalibrateArgs calibrate;
    auto* calibrate_cmd =
        app.add_subcommand("calibrate", "per-POS cosine thresholds from probability bands");
    calibrate_cmd->add_option("--norms", calibrate.norms)->required();
    calibrate_cmd->add_option("--embeddings", calibrate.embeddings)->required();
    calibrate_cmd->add_option("--min-prob", calibrate.min_prob);
    calibrate_cmd->add_option("--out", calibrate.out)->required();

    RunArgs run;
    auto* run_cmd = app.add_subcommand("run", "run a full study from a config file");
    run_cmd->add_option("study", run.study)->required();
    run_cmd->add_option("--config", run.config_path)->required();
    run_cmd->add_option("--out-dir", run.out_dir);
    run_cmd->add_option("--seed", run.seed);
    run_cmd->add_option("--threads", run.threads);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*synth_cmd) return cmd_synth(synth, argc, argv);
        if (*ingest_cmd) return cmd_ingest(ingest, argc, argv);
        if (*build_wa_cmd) return cmd_build_wa(build_wa, argc, argv);
        if (*build_we_cmd) return cmd_build_we(build_we, argc, argv);
        if (*cluster_cmd) return cmd_cluster(cluster, argc, argv);
        if (*compare_cmd) return cmd_compare(compare, argc, argv);
        if (*stats_cmd) return cmd_stats(stats, argc, argv);
        if (*calibrate_cmd) return cmd_calibrate(calibrate, argc, argv);
        if (*run_cmd) return cmd_run(run, argc, argv);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}

} // namespace conceptmap
