#pragma once

#include "conceptmap/assoc.hpp"
#include "conceptmap/config.hpp"
#include "conceptmap/convergence.hpp"
#include "conceptmap/embedding.hpp"
#include "conceptmap/graph.hpp"
#include "conceptmap/linkage.hpp"
#include "conceptmap/map_equation.hpp"
#include "conceptmap/partition.hpp"
#include "conceptmap/rng.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace conceptmap {

// Everything a study needs, loaded once: embeddings restricted to the norms
// vocabulary, raw records and probabilities, pre-built undirected edges, and
// the active threshold table.
struct StudyInputs {
    StudyConfig cfg;
    EmbeddingTable table;
    std::vector<ResponseCount> records;
    DirectedProbabilities probs;
    std::vector<AssociationEdge> edges;
    std::map<std::string, std::string> raw_pos;
    std::map<std::string, std::vector<std::string>> synonyms;
    ThresholdTable thresholds;
    std::string config_hash;
    std::vector<std::pair<std::string, std::string>> fingerprints;
};

StudyInputs load_study_inputs(const StudyConfig& cfg);

// In-memory variant (tests, synthetic data).
StudyInputs make_study_inputs(StudyConfig cfg, EmbeddingTable table,
                              std::vector<ResponseCount> records,
                              std::map<std::string, std::vector<std::string>> synonyms);

// One row of the flat results CSV
// (study,cell,k,threshold,replicate,ic,sc,modularity,degree); empty strings
// mean not-applicable.
struct CsvRow {
    std::string study, cell, k, threshold, replicate, ic, sc, modularity, degree;
};

void write_csv(const std::vector<CsvRow>& rows, std::ostream& out);

// --- study 1: whole-network comparison ---------------------------------

struct Study1Result {
    std::vector<std::string> vocabulary;
    Partition wa_partition;
    Partition we_partition;
    std::vector<ClusterSummary> wa_summaries;
    std::vector<ClusterSummary> we_summaries;
    ConvergenceReport report;
    std::vector<CsvRow> csv;
};

Study1Result run_study1(const StudyInputs& in);

// --- threshold calibration ----------------------------------------------

struct CalibrationResult {
    ThresholdTable table;
    std::vector<std::string> warnings; // one per empty band
};

// Mean pairwise cosine per POS within the WA probability bands <1%, 5-10%,
// 10-15%, 15-20%, >20% (pair probability = max(fsa, bsa)). Feed it an
// unscreened table if the <1% band should be populated.
CalibrationResult calibrate_thresholds(const AssociationTable& table, const EmbeddingTable& emb);

// --- study 2: screening, POS splits, strength classes --------------------

struct Study2Cell {
    std::string name; // "screened:noun:high"
    bool screened = false;
    std::optional<Pos> pos; // nullopt = heterogeneous
    std::optional<StrengthClass> strength;
    std::optional<double> we_threshold; // empty for complete-matrix cells
    std::optional<ConvergenceReport> report;
    std::string error; // nonempty when the cell failed
};

struct Study2Result {
    std::vector<Study2Cell> cells;
    std::vector<CsvRow> csv;

    std::string to_json() const;
};

Study2Result run_study2(const StudyInputs& in);

// --- study 3: concept sampling and noise injection -----------------------

// Union of the member tokens of k distinct uniformly sampled clusters.
std::vector<std::string> sample_concepts(const Partition& wa_partition,
                                         const std::vector<std::string>& nodes, int k, Rng& rng);

struct SweepPoint {
    double threshold;
    double mean_ic;
};

struct SweepResult {
    Pos pos;
    int concept_count = 0;
    std::vector<SweepPoint> curve; // complete over the sweep grid
    double optimal_threshold = 0.0;
    double mean_ic_at_optimal = 0.0;
};

struct SamplingStudyResult {
    std::vector<SweepResult> sweeps;
    std::vector<std::string> warnings;
    std::vector<CsvRow> csv;

    std::string to_json() const;
};

SamplingStudyResult run_sampling_study(const StudyInputs& in);

struct NoiseStudyResult {
    struct PerPos {
        Pos pos;
        double baseline_ic = 0.0;
        std::vector<std::pair<int, double>> curve; // noise level -> mean IC
        std::size_t pool_size = 0;
    };
    std::vector<PerPos> per_pos;
    std::vector<std::string> warnings;
    std::vector<CsvRow> csv;

    std::string to_json() const;
};

NoiseStudyResult run_noise_study(const StudyInputs& in);

} // namespace conceptmap
