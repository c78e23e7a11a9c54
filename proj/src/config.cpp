#include "conceptmap/config.hpp"

#include "conceptmap/convergence.hpp"
#include "conceptmap/error.hpp"

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace conceptmap {

KeyValueFile KeyValueFile::parse(const std::string& text) {
    KeyValueFile out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            if (b == std::string::npos) return std::string();
            const auto e = s.find_last_not_of(" \t");
            return s.substr(b, e - b + 1);
        };
        if (strip(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        }
        if (!out.values_.emplace(key, value).second) {
            throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key +
                              "'");
        }
    }
    return out;
}

KeyValueFile KeyValueFile::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string KeyValueFile::get(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

namespace {

std::string resolve_data_path(const std::string& value) {
    if (value.empty()) return value;
    std::filesystem::path p(value);
    if (p.is_absolute()) return value;
    if (const char* root = std::getenv("CONCEPTMAP_DATA_DIR")) {
        return (std::filesystem::path(root) / p).string();
    }
    return value;
}

struct Reader {
    const KeyValueFile& kv;
    std::vector<std::string>& errors;
    std::set<std::string> consumed;

    std::string str(const std::string& key, const std::string& fallback) {
        consumed.insert(key);
        return kv.get(key, fallback);
    }

    double num(const std::string& key, double fallback, double lo, double hi) {
        consumed.insert(key);
        if (!kv.has(key)) return fallback;
        const std::string v = kv.get(key, "");
        try {
            std::size_t used = 0;
            const double x = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            if (x < lo || x > hi) {
                errors.push_back(key + " must be in [" + std::to_string(lo) + ", " +
                                 std::to_string(hi) + "], got " + v);
                return fallback;
            }
            return x;
        } catch (const std::exception&) {
            errors.push_back(key + ": not a number: '" + v + "'");
            return fallback;
        }
    }

    long integer(const std::string& key, long fallback, long lo, long hi) {
        const double x = num(key, static_cast<double>(fallback), static_cast<double>(lo),
                             static_cast<double>(hi));
        if (x != static_cast<long>(x)) {
            errors.push_back(key + " must be an integer");
            return fallback;
        }
        return static_cast<long>(x);
    }

    bool boolean(const std::string& key, bool fallback) {
        consumed.insert(key);
        if (!kv.has(key)) return fallback;
        const std::string v = kv.get(key, "");
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        errors.push_back(key + ": expected true/false, got '" + v + "'");
        return fallback;
    }

    std::vector<int> int_list(const std::string& key, std::vector<int> fallback) {
        consumed.insert(key);
        if (!kv.has(key)) return fallback;
        std::vector<int> out;
        std::stringstream ss(kv.get(key, ""));
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                out.push_back(std::stoi(item));
            } catch (const std::exception&) {
                errors.push_back(key + ": bad list item '" + item + "'");
                return fallback;
            }
        }
        if (out.empty()) errors.push_back(key + ": empty list");
        return out;
    }
};

} // namespace

MatchingMode StudyConfig::matching_mode() const {
    return matching == "greedy" ? MatchingMode::Greedy : MatchingMode::Optimal;
}

StudyConfig StudyConfig::from_file(const std::string& path, std::vector<std::string>& errors) {
    const KeyValueFile kv = KeyValueFile::load(path);
    Reader r{kv, errors, {}};
    StudyConfig cfg;

    cfg.seed = static_cast<std::uint64_t>(r.integer("seed", 42, 0, INT64_MAX));
    cfg.language = r.str("language", cfg.language);
    cfg.embeddings = resolve_data_path(r.str("embeddings", ""));
    cfg.norms = resolve_data_path(r.str("norms", ""));
    cfg.synonyms = resolve_data_path(r.str("synonyms", ""));
    if (cfg.embeddings.empty()) errors.push_back("embeddings: required path missing");
    if (cfg.norms.empty()) errors.push_back("norms: required path missing");

    const std::string strength = r.str("strength", "none");
    if (strength != "none") {
        cfg.strength = StrengthClass::parse(strength);
        if (!cfg.strength) {
            errors.push_back("strength: expected none|low|moderate|high, got '" + strength + "'");
        }
    }

    const std::string pos = r.str("pos", "noun,verb,adjective");
    if (pos == "all") {
        cfg.pos = {Pos::Noun, Pos::Verb, Pos::Adjective, Pos::Adverb};
    } else {
        cfg.pos.clear();
        std::stringstream ss(pos);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto parsed = parse_pos(item);
            if (!parsed) {
                errors.push_back("pos: unknown part of speech '" + item + "'");
            } else {
                cfg.pos.push_back(*parsed);
            }
        }
        if (cfg.pos.empty()) errors.push_back("pos: empty selection");
    }

    cfg.threshold_mode = r.str("threshold_mode", cfg.threshold_mode);
    if (cfg.threshold_mode != "table" && cfg.threshold_mode != "sweep" &&
        cfg.threshold_mode != "fixed") {
        errors.push_back("threshold_mode: expected table|sweep|fixed, got '" + cfg.threshold_mode +
                         "'");
    }
    cfg.fixed_threshold = r.num("threshold", 0.0, -1.0, 1.0);
    if (cfg.threshold_mode == "fixed" && !kv.has("threshold")) {
        errors.push_back("threshold: required when threshold_mode = fixed");
    }
    cfg.threshold_table = resolve_data_path(r.str("threshold_table", ""));

    cfg.sweep_min = r.num("sweep_min", cfg.sweep_min, 0.0, 1.0);
    cfg.sweep_max = r.num("sweep_max", cfg.sweep_max, 0.0, 1.0);
    cfg.sweep_step = r.num("sweep_step", cfg.sweep_step, 1e-6, 1.0);
    if (cfg.sweep_min > cfg.sweep_max) errors.push_back("sweep_min exceeds sweep_max");

    cfg.sample_sizes = r.int_list("sample_sizes", cfg.sample_sizes);
    for (int k : cfg.sample_sizes) {
        if (k < 1) {
            errors.push_back("sample_sizes: entries must be positive");
            break;
        }
    }
    cfg.replicates_sampling =
        static_cast<int>(r.integer("replicates_sampling", cfg.replicates_sampling, 1, 1000000));
    cfg.replicates_noise =
        static_cast<int>(r.integer("replicates_noise", cfg.replicates_noise, 1, 1000000));
    cfg.noise_levels = r.int_list("noise_levels", cfg.noise_levels);
    for (int level : cfg.noise_levels) {
        if (level < 0) {
            errors.push_back("noise_levels: entries must be nonnegative");
            break;
        }
    }
    cfg.noise_max_probability =
        r.num("noise_max_probability", cfg.noise_max_probability, 0.0, 1.0);

    cfg.min_prob = r.num("min_prob", cfg.min_prob, 0.0, 1.0);
    cfg.screen_threshold = r.num("screen_threshold", cfg.screen_threshold, -1.0, 1.0);
    cfg.sc_threshold = r.num("sc_threshold", cfg.sc_threshold, -1.0, 1.0);
    cfg.screen = r.boolean("screen", cfg.screen);

    cfg.dtc_min_cluster_size =
        static_cast<std::size_t>(r.integer("dtc_min_cluster_size", 2, 1, 1000000));
    cfg.dtc_max_join_height = r.num("dtc_max_join_height", cfg.dtc_max_join_height, 0.0, 2.0);
    cfg.dtc_min_split_height = r.num("dtc_min_split_height", cfg.dtc_min_split_height, 0.0, 2.0);
    cfg.infomap_restarts = static_cast<int>(r.integer("infomap_restarts", 8, 1, 10000));

    cfg.strength_on_mean = r.boolean("strength_on_mean", cfg.strength_on_mean);
    cfg.normalize_before_sum = r.boolean("normalize_before_sum", cfg.normalize_before_sum);
    cfg.matching = r.str("matching", cfg.matching);
    if (cfg.matching != "optimal" && cfg.matching != "greedy") {
        errors.push_back("matching: expected optimal|greedy, got '" + cfg.matching + "'");
    }
    cfg.threads = static_cast<int>(r.integer("threads", 0, 0, 4096));

    for (const auto& [key, _] : kv.values()) {
        if (!r.consumed.count(key)) errors.push_back("unknown config key '" + key + "'");
    }
    return cfg;
}

} // namespace conceptmap
