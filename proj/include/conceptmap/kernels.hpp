#pragma once

#include <cstddef>
#include <vector>

// Data-parallel inner loops shared by the embedding and network modules.
// Every kernel has a serial reference implementation (`*_serial`) kept for
// testing; the OpenMP versions must produce bit-identical output because
// each output element is computed independently (no shared reductions).

namespace conceptmap::kernels {

// Caps OpenMP threads for all kernels. 0 restores the hardware default.
void set_max_threads(int n);
int max_threads();

// Condensed upper-triangle index for the pair (i, j), i < j, over n items.
inline std::size_t condensed_index(std::size_t n, std::size_t i, std::size_t j) {
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

// Euclidean norm per row of an n x dim row-major matrix.
std::vector<double> row_norms(const double* data, std::size_t n, std::size_t dim);
std::vector<double> row_norms_serial(const double* data, std::size_t n, std::size_t dim);

// All pairwise cosines, condensed upper triangle (size n*(n-1)/2).
// Throws DataError if any row has zero norm.
std::vector<double> cosine_matrix(const double* data, std::size_t n, std::size_t dim);
std::vector<double> cosine_matrix_serial(const double* data, std::size_t n, std::size_t dim);

// Cosine of one query row against every row of the matrix.
std::vector<double> query_cosines(const double* query, const double* data, std::size_t n,
                                  std::size_t dim);
std::vector<double> query_cosines_serial(const double* query, const double* data, std::size_t n,
                                         std::size_t dim);

} // namespace conceptmap::kernels
