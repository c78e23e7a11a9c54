#include "conceptmap/embedding.hpp"
#include "conceptmap/error.hpp"
#include "conceptmap/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace conceptmap;

namespace {

EmbeddingTable parse_text(const std::string& text,
                          const std::unordered_set<std::string>* filter = nullptr) {
    std::istringstream in(text);
    return parse_embeddings(in, filter);
}

} // namespace

TEST_CASE("parse: minimal well-formed file") {
    const auto t = parse_text("2 3\ncat 1 0 0\ndog 0 1 0\n");
    CHECK(t.dim() == 3);
    CHECK(t.size() == 2);
    CHECK(t.declared_count() == 2);
    CHECK(t.vector("cat")[0] == 1.0);
    CHECK(t.vector("dog")[1] == 1.0);
}

TEST_CASE("parse: vocab filter keeps only requested tokens") {
    // header promises more rows than we keep; declared_count is recorded as-is
    const std::unordered_set<std::string> filter = {"b", "d", "zz"};
    const auto t = parse_text("2000000 300\n" + [] {
        std::string lines;
        for (const char* tok : {"a", "b", "c", "d"}) {
            lines += tok;
            for (int i = 0; i < 300; ++i) lines += " 0.5";
            lines += '\n';
        }
        return lines;
    }(), &filter);
    CHECK(t.size() == 2);
    CHECK(t.dim() == 300);
    CHECK(t.declared_count() == 2000000);
    CHECK(t.contains("b"));
    CHECK(!t.contains("a"));
}

TEST_CASE("parse: dimension mismatch rejected") {
    CHECK_THROWS_AS(parse_text("2 3\ncat 1 0\ndog 0 1 0\n"), DataError);
    // filtered-out lines are still structurally validated
    const std::unordered_set<std::string> filter = {"dog"};
    CHECK_THROWS_AS(parse_text("2 3\ncat 1 0\ndog 0 1 0\n", &filter), DataError);
}

TEST_CASE("parse: malformed header / bad components / duplicates") {
    CHECK_THROWS_AS(parse_text("banana\ncat 1 0 0\n"), DataError);
    CHECK_THROWS_AS(parse_text("1 0\n"), DataError);
    CHECK_THROWS_AS(parse_text("1 2\ncat 1 bad\n"), DataError);
    CHECK_THROWS_AS(parse_text("2 2\ncat 1 0\ncat 0 1\n"), DataError);
}

TEST_CASE("parse: CRLF accepted") {
    const auto t = parse_text("1 2\r\ncat 1 2\r\n");
    CHECK(t.vector("cat")[1] == 2.0);
}

TEST_CASE("cosine basics") {
    CHECK(cosine(WordVector{1, 2, 3}, WordVector{1, 2, 3}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cosine(WordVector{1, 0}, WordVector{0, 1}) == 0.0);
    CHECK(cosine(WordVector{1, 1}, WordVector{1, 0}) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
    CHECK_THROWS_AS(cosine(WordVector{0, 0}, WordVector{1, 0}), DataError);
    CHECK_THROWS_AS(cosine(WordVector{1, 0}, WordVector{1, 0, 0}), DataError);
}

TEST_CASE("cosine symmetry, self-similarity and scale invariance") {
    Rng rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        WordVector u(8), v(8);
        for (auto& x : u) x = rng.gaussian();
        for (auto& x : v) x = rng.gaussian();
        CHECK(cosine(u, v) == cosine(v, u));
        CHECK(cosine(u, u) == doctest::Approx(1.0).epsilon(1e-12));
        WordVector scaled = u;
        const double alpha = rng.uniform(0.001, 1000.0);
        for (auto& x : scaled) x *= alpha;
        CHECK(cosine(scaled, v) == doctest::Approx(cosine(u, v)).epsilon(1e-12));
    }
}

TEST_CASE("sum_vectors") {
    CHECK(sum_vectors({{1, 0}}) == WordVector{1, 0});
    CHECK(sum_vectors({{1, 0}, {0, 1}}) == WordVector{1, 1});
    CHECK(sum_vectors({{1, 2}, {3, 4}, {-4, -6}}) == WordVector{0, 0});
    CHECK_THROWS_AS(sum_vectors({}), DataError);
    CHECK_THROWS_AS(sum_vectors({{1, 0}, {1}}), DataError);
}

TEST_CASE("nearest_label: exact match and lexicographic tie-break") {
    const auto t = parse_text("2 2\na 1 0\nb 0 1\n");
    CHECK(nearest_label(WordVector{1, 0}, t) == "a");
    CHECK(nearest_label(WordVector{1, 1}, t) == "a"); // equal cosines -> lexicographic
    CHECK(nearest_label(WordVector{1, 1}, t, {"a"}) == "b");
    CHECK_THROWS_AS(nearest_label(WordVector{1, 1}, t, {"a", "b"}), DataError);
    CHECK_THROWS_AS(nearest_label(WordVector{0, 0}, t), DataError);
}

TEST_CASE("nearest_label: planted near-duplicates recovered, verified by scan") {
    Rng rng(5);
    EmbeddingTable t(16);
    WordVector center(16, 0.0);
    center[3] = 1.0;
    std::vector<WordVector> planted;
    for (int i = 0; i < 5; ++i) {
        WordVector v = center;
        for (auto& x : v) x += rng.gaussian(0.0, 0.01);
        t.insert("x" + std::to_string(i), v);
        planted.push_back(v);
    }
    for (int i = 0; i < 40; ++i) {
        WordVector v(16);
        for (auto& x : v) x = rng.gaussian();
        t.insert("bg" + std::to_string(i), v);
    }
    const WordVector query = sum_vectors(planted);
    const std::string label = nearest_label(query, t);
    CHECK(label.substr(0, 1) == "x");

    // exhaustive scan oracle
    std::string best;
    double best_cos = -2.0;
    for (const auto& token : t.tokens()) {
        const double c = cosine(query, t.vector(token));
        if (c > best_cos || (c == best_cos && token < best)) {
            best = token;
            best_cos = c;
        }
    }
    CHECK(label == best);
}

TEST_CASE("nearest_label(vector(t)) == t when unique") {
    Rng rng(17);
    EmbeddingTable t(12);
    for (int i = 0; i < 30; ++i) {
        WordVector v(12);
        for (auto& x : v) x = rng.gaussian();
        t.insert("w" + std::to_string(i), v);
    }
    for (const auto& token : t.tokens()) {
        CHECK(nearest_label(t.vector(token), t) == token);
    }
}

TEST_CASE("parse -> serialize -> parse round-trips to an identical table") {
    Rng rng(23);
    std::string text = "6 5\n";
    for (int i = 0; i < 6; ++i) {
        text += "tok" + std::to_string(i);
        for (int k = 0; k < 5; ++k) {
            text += " " + std::to_string(rng.uniform(-2.0, 2.0));
        }
        text += '\n';
    }
    const auto a = parse_text(text);
    std::ostringstream serialized;
    write_embeddings(a, serialized);
    const auto b = parse_text(serialized.str());

    REQUIRE(a.size() == b.size());
    CHECK(a.dim() == b.dim());
    CHECK(a.tokens() == b.tokens());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto ra = a.row(i), rb = b.row(i);
        for (std::size_t k = 0; k < a.dim(); ++k) CHECK(ra[k] == rb[k]);
    }

    std::ostringstream again;
    write_embeddings(b, again);
    CHECK(serialized.str() == again.str());
}
