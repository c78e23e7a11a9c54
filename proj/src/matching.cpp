#include "conceptmap/matching.hpp"

#include <algorithm>
#include <limits>

namespace conceptmap {

// Classic potentials formulation over a padded square matrix, minimizing
// negated values. Indices are 1-based internally.
std::vector<std::pair<std::uint32_t, std::uint32_t>>
max_value_assignment(const std::vector<double>& value, std::size_t rows, std::size_t cols) {
    const std::size_t n = std::max(rows, cols);
    if (n == 0) return {};
    const double inf = std::numeric_limits<double>::infinity();

    auto cost = [&](std::size_t i, std::size_t j) -> double {
        if (i < rows && j < cols) return -value[i * cols + j];
        return 0.0; // padding
    };

    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> match(n + 1, 0); // column -> row
    std::vector<std::size_t> way(n + 1, 0);

    for (std::size_t i = 1; i <= n; ++i) {
        match[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = match[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0);
    }

    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    for (std::size_t j = 1; j <= n; ++j) {
        const std::size_t i = match[j];
        if (i >= 1 && i - 1 < rows && j - 1 < cols && value[(i - 1) * cols + (j - 1)] > 0.0) {
            out.emplace_back(static_cast<std::uint32_t>(i - 1), static_cast<std::uint32_t>(j - 1));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace conceptmap
