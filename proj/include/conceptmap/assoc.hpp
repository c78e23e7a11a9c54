#pragma once

#include "conceptmap/embedding.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace conceptmap {

enum class Pos { Noun, Verb, Adjective, Adverb };

const char* to_string(Pos pos);
std::optional<Pos> parse_pos(const std::string& s);

// One raw norms record: how often `response` followed `cue`. POS tags are
// kept verbatim (lowercased); tags outside the four content classes survive
// ingestion and fall to prescreen rule 4.
struct ResponseCount {
    std::string cue;
    std::string response;
    std::uint64_t n_response = 0;
    std::uint64_t n_cue_presentations = 0;
    std::string pos_cue;
    std::string pos_response;
};

// Undirected pair with both directed strengths. word_a < word_b; fsa is the
// a->b probability, bsa the b->a probability, weight their mean.
struct AssociationEdge {
    std::string word_a;
    std::string word_b;
    double fsa = 0.0;
    double bsa = 0.0;
    double weight = 0.0;

    double max_strength() const { return fsa > bsa ? fsa : bsa; }
};

struct AssociationTable {
    std::vector<AssociationEdge> edges;   // sorted by (word_a, word_b)
    std::map<std::string, Pos> pos;       // full vocabulary, possibly wider than edge tokens

    // Node universe: pos keys in sorted order. Tokens that lost every edge to
    // filtering stay in the vocabulary so WA and WE graphs keep congruent
    // node sets (the isolates matter to the convergence metrics).
    std::vector<std::string> vocabulary() const;
};

struct StrengthClass {
    enum class Level { Low, Moderate, High };
    Level level;

    double min_probability() const;
    const char* name() const;

    static std::optional<StrengthClass> parse(const std::string& s); // "low|moderate|high"
};

// Rule-by-rule removal counts from prescreen (rule 2 is enforced earlier, by
// build_edges, and is always zero here).
struct ScreeningSummary {
    std::size_t input_edges = 0;
    std::size_t removed_not_embedded = 0;
    std::size_t removed_missing_direction = 0;
    std::size_t removed_weak = 0;
    std::size_t removed_pos = 0;
    std::size_t retained = 0;

    std::string to_json() const;
};

using DirectedProbabilities = std::map<std::pair<std::string, std::string>, double>;

// Directed response probability per (cue, response) pair. Duplicated pairs
// and zero presentation counts are errors.
DirectedProbabilities compute_probabilities(const std::vector<ResponseCount>& records);

// One undirected edge per pair seen in both directions; weight = (fsa+bsa)/2.
// One-directional pairs are dropped silently.
std::vector<AssociationEdge> build_edges(const DirectedProbabilities& probs);

// Applies the four inclusion rules: both tokens embedded, both directions
// present (already guaranteed), max(fsa,bsa) > min_prob, both tokens carrying
// a content POS tag. With use_mean_strength the third rule tests the averaged
// weight instead (sensitivity switch, off by default).
AssociationTable prescreen(const std::vector<AssociationEdge>& edges, const EmbeddingTable& table,
                           const std::map<std::string, std::string>& raw_pos,
                           double min_prob = 0.05, ScreeningSummary* summary = nullptr,
                           bool use_mean_strength = false);

// Keeps edges with max(fsa,bsa) >= class floor (or mean-based when
// use_mean_strength). The vocabulary is kept intact.
AssociationTable filter_strength(const AssociationTable& table, StrengthClass cls,
                                 bool use_mean_strength = false);

// Homogeneous sub-tables; an edge appears in the table of its POS only when
// both endpoints share it, cross-POS edges appear nowhere.
std::map<Pos, AssociationTable> split_pos(const AssociationTable& table);

struct VectorScreenResult {
    std::vector<std::string> retained;
    std::vector<std::string> excluded;
};

// Flags words as improperly encoded when every in-table synonym sits at
// cosine <= threshold. Words without in-table synonyms are retained.
VectorScreenResult screen_vectors(const std::vector<std::string>& words,
                                  const std::map<std::string, std::vector<std::string>>& synonyms,
                                  const EmbeddingTable& table, double threshold = 0.692);

// --- ingestion ---------------------------------------------------------

// Norms TSV: header `cue response n_response n_cue_presentations pos_cue
// pos_response` (tab separated). Tokens are lowercased and NFC-normalized on
// the way in; conflicting POS tags for one token are an error with line
// numbers.
std::vector<ResponseCount> parse_norms(std::istream& in);
std::vector<ResponseCount> load_norms(const std::string& path);

// Raw POS tag per token implied by the records. Conflicts throw.
std::map<std::string, std::string> pos_map(const std::vector<ResponseCount>& records);

// Synonym TSV: `word<TAB>syn1,syn2,...`; tokens normalized like the norms.
std::map<std::string, std::vector<std::string>> parse_synonyms(std::istream& in);
std::map<std::string, std::vector<std::string>> load_synonyms(const std::string& path);

// Canonical pre-screening association data (the `ingest` output format):
// every bidirectional pair with its probabilities plus raw POS tags.
struct RawAssociationData {
    std::vector<AssociationEdge> edges; // sorted by (word_a, word_b)
    std::map<std::string, std::string> raw_pos;
};

void write_raw_association(const RawAssociationData& data, std::ostream& out);
RawAssociationData read_raw_association(std::istream& in);

} // namespace conceptmap
