#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace ridel {

/// Number of divisions n with n * step == 1; throws InvalidInput otherwise.
std::size_t grid_divisions(double step);

/// Number of points {k / n : k in N^dim, |k| = n}; saturates at SIZE_MAX.
std::size_t simplex_grid_size(std::size_t dim, std::size_t divisions);

/// Calls visit(point) for every grid point in lexicographic order of the counts.
void for_each_simplex_point(std::size_t dim, std::size_t divisions,
                            const std::function<void(const std::vector<double>&)>& visit);

/// Exact maximizer of sum_i terms[i](x_i) over the grid by dynamic programming.
/// Ties go to the lexicographically smallest count vector.
std::vector<double> maximize_separable_on_simplex(
    const std::vector<std::function<double(double)>>& terms, std::size_t divisions);

}  // namespace ridel
