#include "conceptmap/studies.hpp"
#include "conceptmap/kernels.hpp"
#include "conceptmap/error.hpp"
#include "conceptmap/synth.hpp"

#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

using namespace conceptmap;

namespace {

StudyConfig small_config() {
    StudyConfig cfg;
    cfg.seed = 13;
    cfg.embeddings = "mem";
    cfg.norms = "mem";
    cfg.replicates_sampling = 10;
    cfg.replicates_noise = 5;
    cfg.sample_sizes = {2, 3};
    cfg.noise_levels = {0, 4};
    return cfg;
}

StudyInputs planted_inputs(const SynthSpec& spec, StudyConfig cfg = small_config()) {
    SynthDataset data = generate_synthetic(spec);
    return make_study_inputs(std::move(cfg), std::move(data.table), std::move(data.records),
                             std::move(data.synonyms));
}

SynthSpec default_spec() {
    SynthSpec spec;
    spec.concepts = 9;
    spec.words_per_concept = 5;
    spec.seed = 3;
    return spec;
}

} // namespace

TEST_CASE("study 1 on planted data: perfect convergence") {
    const StudyInputs in = planted_inputs(default_spec());
    const Study1Result r = run_study1(in);
    CHECK(r.report.ic_percent == doctest::Approx(100.0));
    CHECK(r.report.sc_percent == doctest::Approx(100.0));
    CHECK(r.report.n_wa_clusters == 9);
    CHECK(r.report.n_we_clusters == 9);
    CHECK(r.report.mean_cosine == doctest::Approx(1.0));
    CHECK(r.report.seed == in.cfg.seed);
    CHECK(r.report.config_hash == in.config_hash);
    CHECK(r.vocabulary.size() == 45); // noise-pool words never enter the network
    CHECK(r.csv.size() == 2);

    SUBCASE("bit-identical reports on re-run") {
        const Study1Result again = run_study1(in);
        CHECK(r.report.to_json() == again.report.to_json());
        CHECK(r.wa_partition == again.wa_partition);
        CHECK(r.we_partition == again.we_partition);
    }
}

TEST_CASE("study 1: empty vocabulary overlap fails at the prescreen stage") {
    SynthDataset data = generate_synthetic(default_spec());
    EmbeddingTable unrelated(4);
    unrelated.insert("zzz", {1, 0, 0, 0});
    const StudyInputs in = make_study_inputs(small_config(), std::move(unrelated),
                                             std::move(data.records), {});
    CHECK_THROWS_WITH_AS(run_study1(in), doctest::Contains("prescreen"), DataError);
}

TEST_CASE("calibrate_thresholds: band means on controlled fixtures") {
    EmbeddingTable t(3);
    t.insert("a", {1, 0, 0});
    t.insert("b", {0.8, 0.6, 0});  // cos(a,b) = .8
    t.insert("c", {0, 1, 0});
    t.insert("d", {0.6, 0.8, 0});  // cos(c,d) = .8

    AssociationTable table;
    table.pos = {{"a", Pos::Noun}, {"b", Pos::Noun}, {"c", Pos::Noun}, {"d", Pos::Noun}};
    // both pairs fall in the 10-15% band
    table.edges = {{"a", "b", 0.12, 0.03, 0.075}, {"c", "d", 0.11, 0.02, 0.065}};

    const CalibrationResult r = calibrate_thresholds(table, t);
    REQUIRE(r.table.bands.count(Pos::Noun) == 1);
    REQUIRE(r.table.bands.at(Pos::Noun).size() == 1);
    CHECK(r.table.bands.at(Pos::Noun)[0].prob_low == 0.10);
    CHECK(r.table.bands.at(Pos::Noun)[0].cosine_threshold == doctest::Approx(0.8));
    CHECK(!r.warnings.empty()); // the other bands are empty and reported

    SUBCASE("single-pair band reports that pair's cosine") {
        AssociationTable one;
        one.pos = {{"a", Pos::Noun}, {"b", Pos::Noun}};
        one.edges = {{"a", "b", 0.25, 0.1, 0.175}};
        const CalibrationResult single = calibrate_thresholds(one, t);
        CHECK(single.table.bands.at(Pos::Noun)[0].cosine_threshold == doctest::Approx(0.8));
        CHECK(single.table.bands.at(Pos::Noun)[0].prob_low == 0.20);
    }
}

TEST_CASE("study 2: full 32-cell grid on planted data") {
    const StudyInputs in = planted_inputs(default_spec());
    const Study2Result r = run_study2(in);
    REQUIRE(r.cells.size() == 32);
    std::size_t ok = 0;
    for (const auto& cell : r.cells) {
        if (cell.error.empty()) ++ok;
    }
    CHECK(ok == 32);
    CHECK(r.csv.size() == 64); // two network rows per computed cell

    // POS-specific High cells use the published thresholds
    for (const auto& cell : r.cells) {
        if (!cell.pos || !cell.strength ||
            cell.strength->level != StrengthClass::Level::High) {
            continue;
        }
        REQUIRE(cell.we_threshold.has_value());
        if (*cell.pos == Pos::Noun) CHECK(*cell.we_threshold == 0.77);
        if (*cell.pos == Pos::Verb) CHECK(*cell.we_threshold == 0.78);
        if (*cell.pos == Pos::Adjective) CHECK(*cell.we_threshold == 0.81);
        REQUIRE(cell.report.has_value());
        // thresholded WE networks only retain edges at or above the cut
        CHECK(cell.report->stats_we.sparsity >= 0.0);
    }

    SUBCASE("screened and unscreened agree closely on the analogue") {
        std::map<std::string, double> ic;
        for (const auto& cell : r.cells) {
            if (cell.report) ic[cell.name] = cell.report->ic_percent;
        }
        for (const auto& [name, value] : ic) {
            if (name.rfind("unscreened:", 0) == 0) {
                const std::string screened_name = "screened:" + name.substr(11);
                REQUIRE(ic.count(screened_name) == 1);
                CHECK(std::abs(value - ic[screened_name]) < 2.0);
            }
        }
    }
}

TEST_CASE("study 2: strength restriction raises modularity on bridge-laden norms") {
    // all-noun planted data keeps the weak ring bridges inside the noun
    // network, so class filtering strips them and separation grows
    SynthSpec spec = default_spec();
    spec.round_robin_pos = false;
    const StudyInputs in = planted_inputs(spec);
    const Study2Result r = run_study2(in);

    std::map<std::string, const Study2Cell*> by_name;
    for (const auto& cell : r.cells) by_name[cell.name] = &cell;

    const auto* none = by_name.at("unscreened:noun:none");
    const auto* high = by_name.at("unscreened:noun:high");
    REQUIRE(none->report.has_value());
    REQUIRE(high->report.has_value());
    CHECK(high->report->stats_wa.modularity >= none->report->stats_wa.modularity);
    CHECK(high->report->stats_we.modularity >= none->report->stats_we.modularity);
    // average degree must not grow under nested filtering
    CHECK(high->report->stats_wa.average_degree <= none->report->stats_wa.average_degree);
    CHECK(high->report->stats_we.average_degree <= none->report->stats_we.average_degree);
}

TEST_CASE("study 2: synonyms are required for screened cells") {
    SynthDataset data = generate_synthetic(default_spec());
    const StudyInputs in = make_study_inputs(small_config(), std::move(data.table),
                                             std::move(data.records), {});
    const Study2Result r = run_study2(in);
    for (const auto& cell : r.cells) {
        if (cell.screened) {
            CHECK(!cell.error.empty());
        } else {
            CHECK(cell.error.empty());
        }
    }
}

TEST_CASE("sample_concepts") {
    const std::vector<std::string> nodes = {"a", "b", "c", "d", "e", "f"};
    const Partition p = Partition::from_labels({0, 0, 1, 1, 2, 2});

    Rng rng(5);
    SUBCASE("k equal to cluster count returns the full vocabulary") {
        const auto all = sample_concepts(p, nodes, 3, rng);
        CHECK(all == nodes);
    }
    SUBCASE("k = 1 returns exactly one cluster's members") {
        const auto one = sample_concepts(p, nodes, 1, rng);
        REQUIRE(one.size() == 2);
        CHECK(p[std::distance(nodes.begin(),
                              std::find(nodes.begin(), nodes.end(), one[0]))] ==
              p[std::distance(nodes.begin(), std::find(nodes.begin(), nodes.end(), one[1]))]);
    }
    SUBCASE("fixed seed reproduces the sample") {
        Rng r1(77), r2(77);
        CHECK(sample_concepts(p, nodes, 2, r1) == sample_concepts(p, nodes, 2, r2));
    }
    SUBCASE("k out of range") {
        CHECK_THROWS_AS(sample_concepts(p, nodes, 0, rng), DataError);
        CHECK_THROWS_AS(sample_concepts(p, nodes, 4, rng), DataError);
    }
}

TEST_CASE("sample_concepts is uniform across clusters (5 sigma)") {
    const std::vector<std::string> nodes = {"a", "b", "c", "d", "e", "f"};
    const Partition p = Partition::from_labels({0, 1, 2, 3, 4, 5});
    const int trials = 600;
    const double expected = trials / 6.0;
    const double sigma = std::sqrt(trials * (1.0 / 6.0) * (5.0 / 6.0));
    std::map<std::string, int> counts;
    Rng rng(123);
    for (int i = 0; i < trials; ++i) {
        Rng trial_rng = rng.derive(i);
        counts[sample_concepts(p, nodes, 1, trial_rng)[0]] += 1;
    }
    for (const auto& [_, count] : counts) {
        CHECK(std::abs(count - expected) <= 5.0 * sigma);
    }
}

TEST_CASE("sampling study on planted data") {
    SynthSpec spec = default_spec();
    spec.round_robin_pos = false; // 9 noun concepts
    StudyConfig cfg = small_config();
    cfg.pos = {Pos::Noun};
    cfg.sample_sizes = {2, 4, 20};
    const StudyInputs in = planted_inputs(spec, cfg);
    const SamplingStudyResult r = run_sampling_study(in);

    // k = 20 exceeds the 9 planted clusters and is skipped with a warning
    REQUIRE(r.sweeps.size() == 2);
    CHECK(r.warnings.size() == 1);

    const std::size_t grid_size = 21; // .65 to .85 step .01
    for (const auto& sweep : r.sweeps) {
        CHECK(sweep.curve.size() == grid_size); // complete over the grid
        bool optimal_on_grid = false;
        for (const auto& point : sweep.curve) {
            if (point.threshold == sweep.optimal_threshold) {
                optimal_on_grid = true;
                CHECK(point.mean_ic == sweep.mean_ic_at_optimal);
            }
            CHECK(point.mean_ic >= 0.0);
            CHECK(point.mean_ic <= 100.0 + 1e-9);
        }
        CHECK(optimal_on_grid);
        CHECK(sweep.mean_ic_at_optimal >= 90.0); // planted floor
    }
    CHECK(r.csv.size() == 2 * in.cfg.replicates_sampling * grid_size);

    SUBCASE("single replicate with a fixed seed is fully reproducible") {
        StudyConfig one = cfg;
        one.replicates_sampling = 1;
        const StudyInputs in1 = planted_inputs(spec, one);
        const SamplingStudyResult a = run_sampling_study(in1);
        const SamplingStudyResult b = run_sampling_study(in1);
        CHECK(a.to_json() == b.to_json());
    }
}

TEST_CASE("noise study on planted data") {
    SynthSpec spec = default_spec();
    spec.round_robin_pos = false;
    spec.weak_words = 12;
    StudyConfig cfg = small_config();
    cfg.pos = {Pos::Noun};
    cfg.noise_levels = {0, 5};
    const StudyInputs in = planted_inputs(spec, cfg);
    const NoiseStudyResult r = run_noise_study(in);

    REQUIRE(r.per_pos.size() == 1);
    const auto& noun = r.per_pos[0];
    CHECK(noun.pool_size == 12);
    REQUIRE(noun.curve.size() == 2);

    // level 0 equals the baseline exactly
    CHECK(noun.curve[0].first == 0);
    CHECK(noun.curve[0].second == noun.baseline_ic);
    // orthogonal noise words cannot break the planted clusters
    CHECK(noun.curve[1].second >= noun.baseline_ic - 1e-9);
    CHECK(noun.baseline_ic == doctest::Approx(100.0));

    SUBCASE("identical seed, identical curve") {
        const NoiseStudyResult again = run_noise_study(in);
        CHECK(r.to_json() == again.to_json());
    }
    SUBCASE("noise level beyond the pool is an error") {
        StudyConfig bad = cfg;
        bad.noise_levels = {0, 500};
        const StudyInputs in_bad = planted_inputs(spec, bad);
        CHECK_THROWS_AS(run_noise_study(in_bad), DataError);
    }
}

TEST_CASE("study results are independent of the thread cap") {
    SynthSpec spec = default_spec();
    spec.round_robin_pos = false;
    StudyConfig cfg = small_config();
    cfg.pos = {Pos::Noun};
    cfg.replicates_sampling = 6;
    cfg.sample_sizes = {3};
    const StudyInputs in = planted_inputs(spec, cfg);

    kernels::set_max_threads(1);
    const std::string serial = run_sampling_study(in).to_json();
    const std::string noise_serial = run_noise_study(in).to_json();
    kernels::set_max_threads(0);
    CHECK(run_sampling_study(in).to_json() == serial);
    CHECK(run_noise_study(in).to_json() == noise_serial);
}

TEST_CASE("flat CSV format") {
    std::vector<CsvRow> rows = {{"1", "wa", "", "", "", "100", "100", "0.5", "2"},
                                {"3-sample", "noun", "5", "0.71", "0", "98.5", "", "", ""}};
    std::ostringstream out;
    write_csv(rows, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "study,cell,k,threshold,replicate,ic,sc,modularity,degree");
    std::getline(in, line);
    CHECK(line == "1,wa,,,,100,100,0.5,2");
    std::getline(in, line);
    CHECK(line == "3-sample,noun,5,0.71,0,98.5,,,");
}
