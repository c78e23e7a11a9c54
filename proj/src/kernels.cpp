#include "conceptmap/kernels.hpp"
#include "conceptmap/error.hpp"

#include <cmath>
#include <omp.h>

namespace conceptmap::kernels {

namespace {
int g_max_threads = 0;

int effective_threads() {
    return g_max_threads > 0 ? g_max_threads : omp_get_max_threads();
}

double dot(const double* a, const double* b, std::size_t dim) {
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) s += a[k] * b[k];
    return s;
}

// Rounding can push a cosine a few ulp outside [-1, 1]; downstream code
// relies on the exact range (linkage heights in [0, 2]).
double clamp1(double x) { return x < -1.0 ? -1.0 : (x > 1.0 ? 1.0 : x); }
} // namespace

void set_max_threads(int n) { g_max_threads = n > 0 ? n : 0; }
int max_threads() { return effective_threads(); }

std::vector<double> row_norms_serial(const double* data, std::size_t n, std::size_t dim) {
    std::vector<double> norms(n);
    for (std::size_t i = 0; i < n; ++i) {
        norms[i] = std::sqrt(dot(data + i * dim, data + i * dim, dim));
    }
    return norms;
}

std::vector<double> row_norms(const double* data, std::size_t n, std::size_t dim) {
    std::vector<double> norms(n);
#pragma omp parallel for schedule(static) num_threads(effective_threads())
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        norms[i] = std::sqrt(dot(data + i * dim, data + i * dim, dim));
    }
    return norms;
}

namespace {
void check_norms(const std::vector<double>& norms) {
    for (std::size_t i = 0; i < norms.size(); ++i) {
        if (norms[i] == 0.0) {
            throw DataError("cosine undefined: row " + std::to_string(i) + " has zero norm");
        }
    }
}
} // namespace

std::vector<double> cosine_matrix_serial(const double* data, std::size_t n, std::size_t dim) {
    const std::vector<double> norms = row_norms_serial(data, n, dim);
    check_norms(norms);
    std::vector<double> out(n * (n - 1) / 2);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            out[condensed_index(n, i, j)] =
                clamp1(dot(data + i * dim, data + j * dim, dim) / (norms[i] * norms[j]));
        }
    }
    return out;
}

std::vector<double> cosine_matrix(const double* data, std::size_t n, std::size_t dim) {
    const std::vector<double> norms = row_norms(data, n, dim);
    check_norms(norms);
    std::vector<double> out(n * (n - 1) / 2);
    // dynamic schedule: row i has n-1-i pairs, static chunks would be lopsided
#pragma omp parallel for schedule(dynamic, 8) num_threads(effective_threads())
    for (long long i = 0; i < static_cast<long long>(n) - 1; ++i) {
        const std::size_t base = condensed_index(n, i, i + 1);
        for (std::size_t j = i + 1; j < n; ++j) {
            out[base + (j - i - 1)] =
                clamp1(dot(data + i * dim, data + j * dim, dim) / (norms[i] * norms[j]));
        }
    }
    return out;
}

std::vector<double> query_cosines_serial(const double* query, const double* data, std::size_t n,
                                         std::size_t dim) {
    const double qn = std::sqrt(dot(query, query, dim));
    if (qn == 0.0) throw DataError("cosine undefined: query has zero norm");
    const std::vector<double> norms = row_norms_serial(data, n, dim);
    check_norms(norms);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = clamp1(dot(query, data + i * dim, dim) / (qn * norms[i]));
    }
    return out;
}

std::vector<double> query_cosines(const double* query, const double* data, std::size_t n,
                                  std::size_t dim) {
    const double qn = std::sqrt(dot(query, query, dim));
    if (qn == 0.0) throw DataError("cosine undefined: query has zero norm");
    const std::vector<double> norms = row_norms(data, n, dim);
    check_norms(norms);
    std::vector<double> out(n);
#pragma omp parallel for schedule(static) num_threads(effective_threads())
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        out[i] = clamp1(dot(query, data + i * dim, dim) / (qn * norms[i]));
    }
    return out;
}

} // namespace conceptmap::kernels
