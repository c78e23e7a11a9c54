#include "conceptmap/assoc.hpp"

#include "conceptmap/error.hpp"
#include "conceptmap/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace conceptmap {

const char* to_string(Pos pos) {
    switch (pos) {
        case Pos::Noun: return "noun";
        case Pos::Verb: return "verb";
        case Pos::Adjective: return "adjective";
        case Pos::Adverb: return "adverb";
    }
    return "?";
}

std::optional<Pos> parse_pos(const std::string& s) {
    if (s == "noun") return Pos::Noun;
    if (s == "verb") return Pos::Verb;
    if (s == "adjective") return Pos::Adjective;
    if (s == "adverb") return Pos::Adverb;
    return std::nullopt;
}

double StrengthClass::min_probability() const {
    switch (level) {
        case Level::Low: return 0.10;
        case Level::Moderate: return 0.15;
        case Level::High: return 0.20;
    }
    return 0.0;
}

const char* StrengthClass::name() const {
    switch (level) {
        case Level::Low: return "low";
        case Level::Moderate: return "moderate";
        case Level::High: return "high";
    }
    return "?";
}

std::optional<StrengthClass> StrengthClass::parse(const std::string& s) {
    if (s == "low") return StrengthClass{Level::Low};
    if (s == "moderate") return StrengthClass{Level::Moderate};
    if (s == "high") return StrengthClass{Level::High};
    return std::nullopt;
}

std::vector<std::string> AssociationTable::vocabulary() const {
    std::vector<std::string> out;
    out.reserve(pos.size());
    for (const auto& [token, _] : pos) out.push_back(token);
    return out;
}

std::string ScreeningSummary::to_json() const {
    nlohmann::ordered_json j;
    j["input_edges"] = input_edges;
    j["removed_not_embedded"] = removed_not_embedded;
    j["removed_missing_direction"] = removed_missing_direction;
    j["removed_weak"] = removed_weak;
    j["removed_pos"] = removed_pos;
    j["retained"] = retained;
    return j.dump(2);
}

DirectedProbabilities compute_probabilities(const std::vector<ResponseCount>& records) {
    DirectedProbabilities probs;
    for (const auto& r : records) {
        if (r.n_cue_presentations == 0) {
            throw DataError("zero cue presentations for cue '" + r.cue + "'");
        }
        if (r.n_response > r.n_cue_presentations) {
            throw DataError("response count exceeds presentations for '" + r.cue + "' -> '" +
                            r.response + "'");
        }
        if (r.n_response == 0) continue; // never-produced responses carry no probability
        const double p =
            static_cast<double>(r.n_response) / static_cast<double>(r.n_cue_presentations);
        if (!probs.emplace(std::make_pair(r.cue, r.response), p).second) {
            throw DataError("duplicate (cue, response) record: '" + r.cue + "' -> '" + r.response +
                            "'");
        }
    }
    return probs;
}

std::vector<AssociationEdge> build_edges(const DirectedProbabilities& probs) {
    std::vector<AssociationEdge> edges;
    for (const auto& [pair, p_forward] : probs) {
        const auto& [a, b] = pair;
        if (a >= b) continue; // handled from the other direction, or a self-pair
        auto back = probs.find(std::make_pair(b, a));
        if (back == probs.end()) continue;
        AssociationEdge e;
        e.word_a = a;
        e.word_b = b;
        e.fsa = p_forward;
        e.bsa = back->second;
        e.weight = (e.fsa + e.bsa) / 2.0;
        edges.push_back(std::move(e));
    }
    return edges; // map iteration order keeps this sorted by (word_a, word_b)
}

AssociationTable prescreen(const std::vector<AssociationEdge>& edges, const EmbeddingTable& table,
                           const std::map<std::string, std::string>& raw_pos, double min_prob,
                           ScreeningSummary* summary, bool use_mean_strength) {
    ScreeningSummary local;
    local.input_edges = edges.size();

    auto content_pos = [&raw_pos](const std::string& token) -> std::optional<Pos> {
        auto it = raw_pos.find(token);
        if (it == raw_pos.end()) return std::nullopt;
        return parse_pos(it->second);
    };

    AssociationTable out;
    for (const auto& e : edges) {
        if (!table.contains(e.word_a) || !table.contains(e.word_b)) {
            ++local.removed_not_embedded;
            continue;
        }
        const double strength = use_mean_strength ? e.weight : e.max_strength();
        if (!(strength > min_prob)) {
            ++local.removed_weak;
            continue;
        }
        const auto pa = content_pos(e.word_a);
        const auto pb = content_pos(e.word_b);
        if (!pa || !pb) {
            ++local.removed_pos;
            continue;
        }
        out.edges.push_back(e);
        out.pos[e.word_a] = *pa;
        out.pos[e.word_b] = *pb;
    }
    local.retained = out.edges.size();
    if (summary) *summary = local;
    return out;
}

AssociationTable filter_strength(const AssociationTable& table, StrengthClass cls,
                                 bool use_mean_strength) {
    AssociationTable out;
    out.pos = table.pos; // vocabulary survives even when all its edges go
    const double floor = cls.min_probability();
    for (const auto& e : table.edges) {
        const double strength = use_mean_strength ? e.weight : e.max_strength();
        if (strength >= floor) out.edges.push_back(e);
    }
    return out;
}

std::map<Pos, AssociationTable> split_pos(const AssociationTable& table) {
    std::map<Pos, AssociationTable> out;
    for (Pos pos : {Pos::Noun, Pos::Verb, Pos::Adjective, Pos::Adverb}) out[pos] = {};
    for (const auto& [token, pos] : table.pos) out[pos].pos[token] = pos;
    for (const auto& e : table.edges) {
        const Pos pa = table.pos.at(e.word_a);
        if (pa == table.pos.at(e.word_b)) out[pa].edges.push_back(e);
    }
    return out;
}

VectorScreenResult screen_vectors(const std::vector<std::string>& words,
                                  const std::map<std::string, std::vector<std::string>>& synonyms,
                                  const EmbeddingTable& table, double threshold) {
    VectorScreenResult result;
    for (const auto& word : words) {
        const auto vec = table.vector(word); // throws if the precondition is violated
        bool has_synonym = false;
        bool any_close = false;
        auto it = synonyms.find(word);
        if (it != synonyms.end()) {
            for (const auto& syn : it->second) {
                if (!table.contains(syn)) continue;
                has_synonym = true;
                if (cosine(vec, table.vector(syn)) > threshold) {
                    any_close = true;
                    break;
                }
            }
        }
        if (has_synonym && !any_close) {
            result.excluded.push_back(word);
        } else {
            result.retained.push_back(word);
        }
    }
    return result;
}

// --- ingestion ---------------------------------------------------------

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto tab = line.find('\t', start);
        if (tab == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::string lowercase_ascii(std::string s) {
    for (char& c : s) {
        if (c >= 'A' && c <= 'Z') c += 'a' - 'A';
    }
    return s;
}

double parse_double_field(const std::string& s, std::size_t lineno, const char* what) {
    try {
        std::size_t used = 0;
        const double x = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return x;
    } catch (const std::exception&) {
        throw DataError("association table line " + std::to_string(lineno) + ": bad " +
                        std::string(what) + " '" + s + "'");
    }
}

std::uint64_t parse_count(const std::string& s, std::size_t lineno, const char* what) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
        throw DataError("norms line " + std::to_string(lineno) + ": bad " + what + " '" + s + "'");
    }
    return v;
}

} // namespace

std::vector<ResponseCount> parse_norms(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("norms: empty stream");
    strip_cr(line);
    const auto header = split_tabs(line);
    const std::vector<std::string> expected = {"cue",    "response",  "n_response",
                                               "n_cue_presentations", "pos_cue", "pos_response"};
    for (const auto& column : expected) {
        if (std::find(header.begin(), header.end(), column) == header.end()) {
            throw DataError("norms: missing header column '" + column + "'");
        }
    }
    if (header != expected) {
        throw DataError("norms: header columns out of order; expected cue\tresponse\tn_response\t"
                        "n_cue_presentations\tpos_cue\tpos_response");
    }

    std::vector<ResponseCount> records;
    std::map<std::string, std::pair<std::string, std::size_t>> tag_seen; // token -> (tag, line)
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty()) continue;
        const auto f = split_tabs(line);
        if (f.size() != 6) {
            throw DataError("norms line " + std::to_string(lineno) + ": expected 6 fields, got " +
                            std::to_string(f.size()));
        }
        ResponseCount r;
        r.cue = normalize_token(f[0]);
        r.response = normalize_token(f[1]);
        if (r.cue.empty() || r.response.empty()) {
            throw DataError("norms line " + std::to_string(lineno) + ": empty token");
        }
        r.n_response = parse_count(f[2], lineno, "n_response");
        r.n_cue_presentations = parse_count(f[3], lineno, "n_cue_presentations");
        if (r.n_response > r.n_cue_presentations) {
            throw DataError("norms line " + std::to_string(lineno) +
                            ": n_response exceeds n_cue_presentations");
        }
        r.pos_cue = lowercase_ascii(f[4]);
        r.pos_response = lowercase_ascii(f[5]);

        for (const auto& [token, tag] : {std::pair{r.cue, r.pos_cue}, {r.response, r.pos_response}}) {
            auto [it, fresh] = tag_seen.emplace(token, std::make_pair(tag, lineno));
            if (!fresh && it->second.first != tag) {
                throw DataError("norms line " + std::to_string(lineno) + ": token '" + token +
                                "' tagged '" + tag + "' but was '" + it->second.first +
                                "' on line " + std::to_string(it->second.second));
            }
        }
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<ResponseCount> load_norms(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open norms file: " + path);
    return parse_norms(in);
}

std::map<std::string, std::string> pos_map(const std::vector<ResponseCount>& records) {
    std::map<std::string, std::string> out;
    for (const auto& r : records) {
        for (const auto& [token, tag] : {std::pair{r.cue, r.pos_cue}, {r.response, r.pos_response}}) {
            auto [it, fresh] = out.emplace(token, tag);
            if (!fresh && it->second != tag) {
                throw DataError("conflicting POS tags for token '" + token + "': '" + it->second +
                                "' vs '" + tag + "'");
            }
        }
    }
    return out;
}

std::map<std::string, std::vector<std::string>> parse_synonyms(std::istream& in) {
    std::map<std::string, std::vector<std::string>> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty()) continue;
        const auto f = split_tabs(line);
        if (lineno == 1 && f.size() >= 1 && f[0] == "word") continue; // optional header
        if (f.size() != 2) {
            throw DataError("synonyms line " + std::to_string(lineno) + ": expected 2 fields");
        }
        const std::string word = normalize_token(f[0]);
        std::vector<std::string> syns;
        std::stringstream ss(f[1]);
        std::string syn;
        while (std::getline(ss, syn, ',')) {
            if (!syn.empty()) syns.push_back(normalize_token(syn));
        }
        if (!out.emplace(word, std::move(syns)).second) {
            throw DataError("synonyms line " + std::to_string(lineno) + ": duplicate word '" +
                            word + "'");
        }
    }
    return out;
}

std::map<std::string, std::vector<std::string>> load_synonyms(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open synonyms file: " + path);
    return parse_synonyms(in);
}

void write_raw_association(const RawAssociationData& data, std::ostream& out) {
    out << "word_a\tword_b\tfsa\tbsa\tweight\tpos_a\tpos_b\n";
    char fsa[32], bsa[32], weight[32];
    for (const auto& e : data.edges) {
        std::snprintf(fsa, sizeof(fsa), "%.17g", e.fsa);
        std::snprintf(bsa, sizeof(bsa), "%.17g", e.bsa);
        std::snprintf(weight, sizeof(weight), "%.17g", e.weight);
        out << e.word_a << '\t' << e.word_b << '\t' << fsa << '\t' << bsa << '\t' << weight
            << '\t' << data.raw_pos.at(e.word_a) << '\t' << data.raw_pos.at(e.word_b) << '\n';
    }
}

RawAssociationData read_raw_association(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("association table: empty stream");
    strip_cr(line);
    if (split_tabs(line) !=
        std::vector<std::string>{"word_a", "word_b", "fsa", "bsa", "weight", "pos_a", "pos_b"}) {
        throw DataError("association table: unexpected header");
    }
    RawAssociationData data;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        strip_cr(line);
        if (line.empty()) continue;
        const auto f = split_tabs(line);
        if (f.size() != 7) {
            throw DataError("association table line " + std::to_string(lineno) +
                            ": expected 7 fields");
        }
        AssociationEdge e;
        e.word_a = f[0];
        e.word_b = f[1];
        e.fsa = parse_double_field(f[2], lineno, "fsa");
        e.bsa = parse_double_field(f[3], lineno, "bsa");
        e.weight = parse_double_field(f[4], lineno, "weight");
        if (e.weight != (e.fsa + e.bsa) / 2.0) {
            throw DataError("association table line " + std::to_string(lineno) +
                            ": weight is not the FSA/BSA mean");
        }
        if (e.word_a >= e.word_b) {
            throw DataError("association table line " + std::to_string(lineno) +
                            ": pair not in canonical order");
        }
        data.raw_pos[e.word_a] = f[5];
        data.raw_pos[e.word_b] = f[6];
        data.edges.push_back(std::move(e));
    }
    std::sort(data.edges.begin(), data.edges.end(), [](const auto& x, const auto& y) {
        return std::tie(x.word_a, x.word_b) < std::tie(y.word_a, y.word_b);
    });
    return data;
}

} // namespace conceptmap
