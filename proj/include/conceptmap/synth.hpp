#pragma once

#include "conceptmap/assoc.hpp"
#include "conceptmap/embedding.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace conceptmap {

// Synthetic congruent dataset: concepts planted as tight cosine bundles on
// orthogonal axes (each word jittered along its own private axis, so
// cross-concept cosines are exactly zero), with matching association counts:
// strong within-concept cliques, optional weak cross-concept bridges, and a
// pool of sub-1% noise responses for the noise study.
struct SynthSpec {
    int concepts = 10;
    int words_per_concept = 6;
    std::size_t dim = 64; // raised when the planted axes need more room
    double noise_sigma = 0.1; // private-axis jitter magnitude
    double intra_probability = 0.4;
    double bridge_probability = 0.07;
    bool bridges = true;
    int weak_words = 20;
    bool round_robin_pos = true; // concept POS cycles noun/verb/adjective; else all nouns
    std::uint64_t seed = 1;
};

struct SynthDataset {
    EmbeddingTable table;
    std::vector<ResponseCount> records;
    std::map<std::string, std::vector<std::string>> synonyms;
    std::vector<std::vector<std::string>> concept_members; // planted ground truth
};

SynthDataset generate_synthetic(const SynthSpec& spec);

// Writes embeddings.vec, norms.tsv, synonyms.tsv and truth.tsv into out_dir.
void write_synthetic(const SynthDataset& data, const std::string& out_dir);

} // namespace conceptmap
