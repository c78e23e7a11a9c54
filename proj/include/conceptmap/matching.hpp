#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace conceptmap {

// Maximum-value assignment on a rectangular value matrix (rows x cols,
// row-major). Hungarian algorithm with potentials, O(n^3). Returns matched
// (row, col) pairs with value > 0; zero-valued cells mean "unmatchable".
std::vector<std::pair<std::uint32_t, std::uint32_t>>
max_value_assignment(const std::vector<double>& value, std::size_t rows, std::size_t cols);

} // namespace conceptmap
