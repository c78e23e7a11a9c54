#include "conceptmap/synth.hpp"

#include "conceptmap/error.hpp"
#include "conceptmap/rng.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace conceptmap {

namespace {

std::string word_name(int concept_id, int word) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "c%03dw%03d", concept_id, word);
    return buf;
}

const char* concept_pos(const SynthSpec& spec, int concept_id) {
    if (!spec.round_robin_pos) return "noun";
    switch (concept_id % 3) {
        case 0: return "noun";
        case 1: return "verb";
        default: return "adjective";
    }
}

ResponseCount record(std::string cue, std::string response, double probability,
                     const char* pos_cue, const char* pos_response) {
    // presentations fixed at 200 so probabilities land exactly on round counts
    const std::uint64_t presentations = 200;
    ResponseCount r;
    r.cue = std::move(cue);
    r.response = std::move(response);
    r.n_cue_presentations = presentations;
    r.n_response = static_cast<std::uint64_t>(std::llround(probability * presentations));
    r.pos_cue = pos_cue;
    r.pos_response = pos_response;
    return r;
}

} // namespace

SynthDataset generate_synthetic(const SynthSpec& spec) {
    if (spec.concepts < 1) throw ConfigError("synth: concepts must be >= 1");
    if (spec.words_per_concept < 2) throw ConfigError("synth: words_per_concept must be >= 2");
    // One axis per concept plus a private jitter axis per word: cross-concept
    // cosines are exactly zero and intra-concept cosines stay near 1, so
    // planted structure survives any threshold in (0, 0.95).
    const std::size_t needed =
        static_cast<std::size_t>(spec.concepts) * (1 + spec.words_per_concept);
    const std::size_t dim = std::max<std::size_t>(spec.dim, needed);
    Rng rng(spec.seed);

    SynthDataset data{EmbeddingTable(dim), {}, {}, {}};
    std::vector<double> v(dim);

    int word_index = 0;
    for (int c = 0; c < spec.concepts; ++c) {
        data.concept_members.emplace_back();
        for (int w = 0; w < spec.words_per_concept; ++w, ++word_index) {
            const std::string token = word_name(c, w);
            std::fill(v.begin(), v.end(), 0.0);
            v[c] = 1.0;
            v[spec.concepts + word_index] = spec.noise_sigma * (0.5 + rng.uniform_double());
            data.table.insert(token, v);
            data.concept_members.back().push_back(token);
        }
    }

    // Within-concept cliques, both directions so every pair carries FSA+BSA.
    for (int c = 0; c < spec.concepts; ++c) {
        const char* pos = concept_pos(spec, c);
        const auto& members = data.concept_members[c];
        for (std::size_t i = 0; i < members.size(); ++i) {
            for (std::size_t j = i + 1; j < members.size(); ++j) {
                data.records.push_back(
                    record(members[i], members[j], spec.intra_probability, pos, pos));
                data.records.push_back(
                    record(members[j], members[i], spec.intra_probability, pos, pos));
            }
        }
    }

    // Weak ring bridges between consecutive concepts.
    if (spec.bridges && spec.concepts >= 2) {
        for (int c = 0; c < spec.concepts; ++c) {
            const int next = (c + 1) % spec.concepts;
            if (spec.concepts == 2 && c == 1) break; // avoid duplicating the single pair
            const std::string& from = data.concept_members[c].back();
            const std::string& to = data.concept_members[next].front();
            data.records.push_back(
                record(from, to, spec.bridge_probability, concept_pos(spec, c),
                       concept_pos(spec, next)));
            data.records.push_back(
                record(to, from, spec.bridge_probability, concept_pos(spec, next),
                       concept_pos(spec, c)));
        }
    }

    // Noise pool: embedded words whose only association is a sub-1% response.
    for (int i = 0; i < spec.weak_words; ++i) {
        char buf[24];
        std::snprintf(buf, sizeof(buf), "noise%03d", i);
        const std::string token = buf;
        double norm2 = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            v[k] = rng.gaussian();
            norm2 += v[k] * v[k];
        }
        for (std::size_t k = 0; k < dim; ++k) v[k] /= std::sqrt(norm2);
        data.table.insert(token, v);

        const int c = i % spec.concepts;
        const std::string& cue = data.concept_members[c][i % spec.words_per_concept];
        data.records.push_back(record(cue, token, 0.005, concept_pos(spec, c), "noun"));
    }

    // Each word's synonym is its concept neighbor: screening keeps everything.
    for (const auto& members : data.concept_members) {
        for (std::size_t i = 0; i < members.size(); ++i) {
            data.synonyms[members[i]] = {members[(i + 1) % members.size()]};
        }
    }
    return data;
}

void write_synthetic(const SynthDataset& data, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const auto dir = std::filesystem::path(out_dir);
    {
        std::ofstream out(dir / "embeddings.vec");
        if (!out) throw DataError("cannot write embeddings.vec in " + out_dir);
        write_embeddings(data.table, out);
    }
    {
        std::ofstream out(dir / "norms.tsv");
        if (!out) throw DataError("cannot write norms.tsv in " + out_dir);
        out << "cue\tresponse\tn_response\tn_cue_presentations\tpos_cue\tpos_response\n";
        for (const auto& r : data.records) {
            out << r.cue << '\t' << r.response << '\t' << r.n_response << '\t'
                << r.n_cue_presentations << '\t' << r.pos_cue << '\t' << r.pos_response << '\n';
        }
    }
    {
        std::ofstream out(dir / "synonyms.tsv");
        if (!out) throw DataError("cannot write synonyms.tsv in " + out_dir);
        out << "word\tsynonyms\n";
        for (const auto& [word, syns] : data.synonyms) {
            out << word << '\t';
            for (std::size_t i = 0; i < syns.size(); ++i) {
                if (i) out << ',';
                out << syns[i];
            }
            out << '\n';
        }
    }
    std::ofstream out(dir / "truth.tsv");
    if (!out) throw DataError("cannot write truth.tsv in " + out_dir);
    out << "token\tconcept\n";
    for (std::size_t c = 0; c < data.concept_members.size(); ++c) {
        for (const auto& token : data.concept_members[c]) {
            out << token << '\t' << c << '\n';
        }
    }
}

} // namespace conceptmap
