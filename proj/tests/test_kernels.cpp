#include "conceptmap/kernels.hpp"
#include "conceptmap/error.hpp"
#include "conceptmap/rng.hpp"

#include <doctest.h>

#include <vector>

using namespace conceptmap;

namespace {

std::vector<double> random_matrix(std::uint64_t seed, std::size_t n, std::size_t dim) {
    Rng rng(seed);
    std::vector<double> data(n * dim);
    for (auto& x : data) x = rng.gaussian();
    return data;
}

} // namespace

TEST_CASE("condensed index walks the upper triangle") {
    const std::size_t n = 5;
    std::size_t expected = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            CHECK(kernels::condensed_index(n, i, j) == expected);
            ++expected;
        }
    }
    CHECK(expected == n * (n - 1) / 2);
}

TEST_CASE("parallel kernels are bit-identical to the serial references") {
    const std::size_t n = 173, dim = 64;
    const auto data = random_matrix(11, n, dim);
    const auto query = random_matrix(12, 1, dim);

    const auto norms_s = kernels::row_norms_serial(data.data(), n, dim);
    const auto cos_s = kernels::cosine_matrix_serial(data.data(), n, dim);
    const auto q_s = kernels::query_cosines_serial(query.data(), data.data(), n, dim);

    for (int threads : {1, 2, 0}) { // 0 = hardware default
        kernels::set_max_threads(threads);
        const auto norms_p = kernels::row_norms(data.data(), n, dim);
        const auto cos_p = kernels::cosine_matrix(data.data(), n, dim);
        const auto q_p = kernels::query_cosines(query.data(), data.data(), n, dim);
        CHECK(norms_p == norms_s);
        CHECK(cos_p == cos_s);
        CHECK(q_p == q_s);
    }
    kernels::set_max_threads(0);
}

TEST_CASE("cosine kernels clamp to [-1, 1] and reject zero rows") {
    std::vector<double> dup = {1, 2, 3, 1, 2, 3}; // identical rows
    const auto cos = kernels::cosine_matrix(dup.data(), 2, 3);
    CHECK(cos[0] == 1.0);

    std::vector<double> with_zero = {1, 0, 0, 0}; // second row zero
    CHECK_THROWS_AS(kernels::cosine_matrix(with_zero.data(), 2, 2), DataError);
    CHECK_THROWS_AS(kernels::query_cosines(with_zero.data() + 2, with_zero.data(), 1, 2),
                    DataError);
}

TEST_CASE("thread cap is honored and restorable") {
    kernels::set_max_threads(1);
    CHECK(kernels::max_threads() == 1);
    kernels::set_max_threads(0);
    CHECK(kernels::max_threads() >= 1);
}
