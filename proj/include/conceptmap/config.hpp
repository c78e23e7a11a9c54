#pragma once

#include "conceptmap/assoc.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace conceptmap {

enum class MatchingMode; // convergence.hpp

// Flat `key = value` config file. `#` starts a comment; keys are single
// tokens; values run to end of line. Unknown keys are validation errors so
// typos cannot silently fall back to defaults.
class KeyValueFile {
public:
    static KeyValueFile parse(const std::string& text);
    static KeyValueFile load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    const std::map<std::string, std::string>& values() const { return values_; }
    std::string get(const std::string& key, const std::string& fallback) const;

private:
    std::map<std::string, std::string> values_;
};

// All study parameters live here so the published numbers are data, not
// code. Paths are resolved against CONCEPTMAP_DATA_DIR when relative.
struct StudyConfig {
    std::uint64_t seed = 42;
    std::string language = "en";
    std::string embeddings;
    std::string norms;
    std::string synonyms; // optional

    std::optional<StrengthClass> strength; // nullopt = unrestricted
    std::vector<Pos> pos = {Pos::Noun, Pos::Verb, Pos::Adjective};

    std::string threshold_mode = "table"; // table | sweep | fixed
    double fixed_threshold = 0.0;
    std::string threshold_table; // optional TSV; empty = published defaults

    double sweep_min = 0.65;
    double sweep_max = 0.85;
    double sweep_step = 0.01;

    std::vector<int> sample_sizes = {5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
    int replicates_sampling = 100; // paper-scale default is 1000
    int replicates_noise = 50;     // paper-scale default is 500
    std::vector<int> noise_levels = {0, 5, 10, 15, 20, 25};
    double noise_max_probability = 0.01;

    double min_prob = 0.05;
    double screen_threshold = 0.692;
    double sc_threshold = 0.726;
    bool screen = false; // apply synonym-based vector screening

    std::size_t dtc_min_cluster_size = 2;
    double dtc_max_join_height = 0.99;
    double dtc_min_split_height = 0.0;
    int infomap_restarts = 8;

    bool strength_on_mean = false;      // strength rules on averaged weight
    bool normalize_before_sum = false;  // L2-normalize before cluster sums
    std::string matching = "optimal";   // optimal | greedy
    int threads = 0;

    // Collects every violation instead of stopping at the first.
    static StudyConfig from_file(const std::string& path, std::vector<std::string>& errors);

    MatchingMode matching_mode() const;
};

} // namespace conceptmap
