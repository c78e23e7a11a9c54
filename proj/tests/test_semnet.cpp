#include "conceptmap/graph.hpp"
#include "conceptmap/error.hpp"
#include "conceptmap/rng.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <filesystem>
#include <set>
#include <sstream>

using namespace conceptmap;

namespace {

EmbeddingTable bundle_table() {
    // two tight bundles and two loners, 4 dims
    EmbeddingTable t(4);
    t.insert("a1", {1.0, 0.02, 0, 0});
    t.insert("a2", {1.0, -0.02, 0, 0});
    t.insert("b1", {0, 0, 1.0, 0.02});
    t.insert("b2", {0, 0, 1.0, -0.02});
    return t;
}

AssociationTable small_assoc() {
    AssociationTable t;
    t.pos = {{"outer", Pos::Adjective}, {"space", Pos::Noun}, {"star", Pos::Noun}};
    t.edges = {{"outer", "space", 0.17, 0.07, 0.12}, {"space", "star", 0.3, 0.1, 0.2}};
    return t;
}

} // namespace

TEST_CASE("wa_graph: nodes, weights, isolates") {
    const WeightedGraph g = wa_graph(small_assoc());
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 2);
    CHECK(g.kind() == GraphKind::WA);

    // paper pair lands as a single weighted edge
    bool found = false;
    for (const auto& e : g.edges()) {
        if (g.nodes()[e.a] == "outer" && g.nodes()[e.b] == "space") {
            CHECK(e.weight == doctest::Approx(0.12));
            found = true;
        }
    }
    CHECK(found);

    SUBCASE("isolated vocabulary entry stays as an isolate node") {
        AssociationTable t = small_assoc();
        t.pos["lonely"] = Pos::Noun;
        const WeightedGraph with_isolate = wa_graph(t);
        CHECK(with_isolate.node_count() == 4);
        CHECK(with_isolate.edge_count() == 2);
    }
    SUBCASE("empty table is an error") { CHECK_THROWS_AS(wa_graph(AssociationTable{}), DataError); }
}

TEST_CASE("we_graph: complete mode and thresholding") {
    const auto table = bundle_table();
    const std::vector<std::string> words = {"a1", "a2", "b1", "b2"};

    const WeightedGraph complete = we_graph(words, table);
    CHECK(complete.edge_count() == 6); // K4
    for (const auto& e : complete.edges()) CHECK(e.weight >= 0.0);

    const WeightedGraph none = we_graph(words, table, 1.1);
    CHECK(none.edge_count() == 0);
    CHECK(none.node_count() == 4); // isolates preserved

    const WeightedGraph tight = we_graph(words, table, 0.77);
    CHECK(tight.edge_count() == 2); // only the intra-bundle pairs
    for (const auto& e : tight.edges()) CHECK(e.weight >= 0.77);

    SUBCASE("monotone sparsification") {
        Rng rng(41);
        EmbeddingTable big(8);
        std::vector<std::string> vocab;
        for (int i = 0; i < 30; ++i) {
            WordVector v(8);
            for (auto& x : v) x = rng.gaussian();
            big.insert("w" + std::to_string(i), v);
            vocab.push_back("w" + std::to_string(i));
        }
        const auto loose = we_graph(vocab, big, 0.2);
        const auto strict = we_graph(vocab, big, 0.5);
        CHECK(strict.edge_count() <= loose.edge_count());
        // strict edges are a subset of loose edges
        std::set<std::pair<std::uint32_t, std::uint32_t>> loose_set;
        for (const auto& e : loose.edges()) loose_set.emplace(e.a, e.b);
        for (const auto& e : strict.edges()) CHECK(loose_set.count({e.a, e.b}) == 1);
    }
    SUBCASE("missing word is an error") {
        CHECK_THROWS_AS(we_graph({"a1", "nope"}, table), DataError);
    }
}

TEST_CASE("wa and we graphs share the node list") {
    const WeightedGraph wa = wa_graph(small_assoc());
    const WeightedGraph we = we_graph(wa.nodes(), [] {
        EmbeddingTable t(3);
        t.insert("outer", {1, 0.1, 0});
        t.insert("space", {1, -0.1, 0});
        t.insert("star", {0.9, 0, 0.2});
        return t;
    }());
    CHECK(wa.nodes() == we.nodes());
}

TEST_CASE("modularity: hand-derived fixtures") {
    // two disjoint unit triangles
    std::vector<std::string> nodes = {"a", "b", "c", "d", "e", "f"};
    std::vector<GraphEdge> edges = {{0, 1, 1}, {0, 2, 1}, {1, 2, 1},
                                    {3, 4, 1}, {3, 5, 1}, {4, 5, 1}};
    const WeightedGraph two_triangles(GraphKind::WA, nodes, edges);
    const Partition components = Partition::from_labels({0, 0, 0, 1, 1, 1});
    CHECK(modularity(two_triangles, components) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(modularity(two_triangles, Partition::one_cluster(6)) == doctest::Approx(0.0));

    // complete K4, split into two pairs: -1/6
    std::vector<std::string> k4 = {"a", "b", "c", "d"};
    std::vector<GraphEdge> k4_edges = {{0, 1, 1}, {0, 2, 1}, {0, 3, 1},
                                       {1, 2, 1}, {1, 3, 1}, {2, 3, 1}};
    const WeightedGraph complete4(GraphKind::WA, k4, k4_edges);
    CHECK(modularity(complete4, Partition::from_labels({0, 0, 1, 1})) ==
          doctest::Approx(-1.0 / 6.0).epsilon(1e-9));

    SUBCASE("weightless graph is an error") {
        const WeightedGraph empty(GraphKind::WA, {"a", "b"}, {});
        CHECK_THROWS_AS(modularity(empty, Partition::singletons(2)), DataError);
    }
}

TEST_CASE("modularity range on random partitions") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const WeightedGraph g = oracles::random_graph(seed, 10);
        Rng rng(seed * 7);
        std::vector<std::uint32_t> labels(10);
        for (auto& l : labels) l = static_cast<std::uint32_t>(rng.uniform_int(4));
        const double q = modularity(g, Partition::from_labels(labels));
        CHECK(q >= -0.5 - 1e-12);
        CHECK(q <= 1.0 + 1e-12);
        CHECK(modularity(g, Partition::one_cluster(10)) == doctest::Approx(0.0));
    }
}

TEST_CASE("average_degree") {
    const WeightedGraph triangle(GraphKind::WA, {"a", "b", "c"},
                                 {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}});
    CHECK(average_degree(triangle) == 2.0);

    const WeightedGraph isolates(GraphKind::WA, {"a", "b", "c", "d"}, {});
    CHECK(average_degree(isolates) == 0.0);

    const WeightedGraph k4(GraphKind::WA, {"a", "b", "c", "d"},
                           {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {1, 2, 1}, {1, 3, 1}, {2, 3, 1}});
    CHECK(average_degree(k4) == 3.0);
    CHECK_THROWS_AS(average_degree(WeightedGraph(GraphKind::WA, {}, {})), DataError);
}

TEST_CASE("network_stats sparsity") {
    const WeightedGraph triangle(GraphKind::WA, {"a", "b", "c"},
                                 {{0, 1, 1}, {0, 2, 1}, {1, 2, 1}});
    const auto s = network_stats(triangle, Partition::one_cluster(3));
    CHECK(s.sparsity == 0.0);
    CHECK(s.average_degree == 2.0);
    CHECK(s.node_count == 3);
    CHECK(s.edge_count == 3);

    const WeightedGraph sparse(GraphKind::WA, {"a", "b", "c", "d"}, {{0, 1, 1}});
    CHECK(network_stats(sparse, Partition::from_labels({0, 0, 1, 2})).sparsity ==
          doctest::Approx(5.0 / 6.0));
}

TEST_CASE("graph invariants enforced") {
    CHECK_THROWS_AS(WeightedGraph(GraphKind::WA, {"a", "a"}, {}), DataError); // dup node
    CHECK_THROWS_AS(WeightedGraph(GraphKind::WA, {"a", "b"}, {{0, 0, 1}}), DataError); // loop
    CHECK_THROWS_AS(WeightedGraph(GraphKind::WA, {"a", "b"}, {{0, 1, -1}}), DataError);
    CHECK_THROWS_AS(WeightedGraph(GraphKind::WA, {"a", "b"}, {{0, 1, 1}, {0, 1, 2}}), DataError);
    CHECK_THROWS_AS(WeightedGraph(GraphKind::WA, {"a", "b"}, {{0, 2, 1}}), DataError);
}

TEST_CASE("threshold table: published defaults and class lookup") {
    const ThresholdTable t = ThresholdTable::published_defaults();
    CHECK(t.class_threshold(Pos::Noun, std::nullopt) == 0.71);
    CHECK(t.class_threshold(Pos::Noun, StrengthClass{StrengthClass::Level::Low}) == 0.72);
    CHECK(t.class_threshold(Pos::Noun, StrengthClass{StrengthClass::Level::Moderate}) == 0.74);
    CHECK(t.class_threshold(Pos::Noun, StrengthClass{StrengthClass::Level::High}) == 0.77);
    CHECK(t.class_threshold(Pos::Verb, StrengthClass{StrengthClass::Level::High}) == 0.78);
    CHECK(t.class_threshold(Pos::Adjective, StrengthClass{StrengthClass::Level::High}) == 0.81);
    CHECK_THROWS_AS(t.class_threshold(Pos::Adverb, std::nullopt), ConfigError);

    SUBCASE("round-trips through TSV") {
        std::ostringstream out;
        write_threshold_table(t, out);
        std::istringstream in(out.str());
        const ThresholdTable back = read_threshold_table(in);
        CHECK(back.class_threshold(Pos::Verb, std::nullopt) == 0.72);
        CHECK(back.bands.size() == t.bands.size());
    }
    SUBCASE("non-increasing thresholds rejected") {
        ThresholdTable bad;
        bad.bands[Pos::Noun] = {{0.0, 0.01, 0.70}, {0.05, 0.10, 0.65}};
        CHECK_THROWS_AS(bad.validate(), ConfigError);
    }
}

TEST_CASE("graph files round-trip") {
    AssociationTable t = small_assoc();
    t.pos["lonely"] = Pos::Noun; // exercises the isolate path through the manifest
    const WeightedGraph g = wa_graph(t);
    const std::string stem =
        (std::filesystem::temp_directory_path() / "conceptmap_graph_test").string();
    write_graph(g, stem);
    const WeightedGraph back = read_graph(stem, GraphKind::WA);
    CHECK(back.nodes() == g.nodes());
    REQUIRE(back.edge_count() == g.edge_count());
    for (std::size_t i = 0; i < g.edge_count(); ++i) {
        CHECK(back.edges()[i].a == g.edges()[i].a);
        CHECK(back.edges()[i].b == g.edges()[i].b);
        CHECK(back.edges()[i].weight == g.edges()[i].weight);
    }
    std::filesystem::remove(stem + ".nodes.tsv");
    std::filesystem::remove(stem + ".edges.tsv");
}
