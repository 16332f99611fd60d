#include "ridel/simplex_grid.hpp"

#include <cmath>
#include <limits>

#include "ridel/errors.hpp"

namespace ridel {

std::size_t grid_divisions(double step) {
  if (!(step > 0.0 && step <= 1.0)) throw InvalidInput("grid step must lie in (0, 1]");
  const double n = std::round(1.0 / step);
  if (std::abs(n * step - 1.0) > 1e-9) throw InvalidInput("grid step must divide 1");
  return static_cast<std::size_t>(n);
}

std::size_t simplex_grid_size(std::size_t dim, std::size_t divisions) {
  if (dim == 0) return 0;
  // C(n + d - 1, d - 1), built up as a running product of exact binomials.
  std::size_t r = 1;
  for (std::size_t k = 1; k < dim; ++k) {
    const std::size_t num = divisions + k;
    if (r > std::numeric_limits<std::size_t>::max() / num) return std::numeric_limits<std::size_t>::max();
    r = r * num / k;
  }
  return r;
}

namespace {

void visit_from(std::size_t pos, std::size_t remaining, double n, std::vector<double>& x,
                const std::function<void(const std::vector<double>&)>& visit) {
  if (pos + 1 == x.size()) {
    x[pos] = static_cast<double>(remaining) / n;
    visit(x);
    return;
  }
  for (std::size_t k = 0; k <= remaining; ++k) {
    x[pos] = static_cast<double>(k) / n;
    visit_from(pos + 1, remaining - k, n, x, visit);
  }
}

}  // namespace

void for_each_simplex_point(std::size_t dim, std::size_t divisions,
                            const std::function<void(const std::vector<double>&)>& visit) {
  if (dim == 0) return;
  std::vector<double> x(dim, 0.0);
  visit_from(0, divisions, static_cast<double>(divisions), x, visit);
}

std::vector<double> maximize_separable_on_simplex(
    const std::vector<std::function<double(double)>>& terms, std::size_t divisions) {
  const std::size_t d = terms.size();
  if (d == 0) throw InvalidInput("no coordinates to optimize");
  const std::size_t n = divisions;
  const double nd = static_cast<double>(n);
  const double neg_inf = -std::numeric_limits<double>::infinity();

  // table[i][b]: value of the first i coordinates using b units in total.
  std::vector<std::vector<double>> f(d, std::vector<double>(n + 1));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t k = 0; k <= n; ++k) f[i][k] = terms[i](static_cast<double>(k) / nd);
  }
  std::vector<std::vector<double>> best(d + 1, std::vector<double>(n + 1, neg_inf));
  std::vector<std::vector<std::size_t>> choice(d + 1, std::vector<std::size_t>(n + 1, 0));
  best[0][0] = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t b = 0; b <= n; ++b) {
      for (std::size_t k = 0; k <= b; ++k) {
        const double prev = best[i][b - k];
        if (prev == neg_inf) continue;
        const double v = prev + f[i][k];
        if (v > best[i + 1][b]) {
          best[i + 1][b] = v;
          choice[i + 1][b] = k;
        }
      }
    }
  }
  std::vector<double> x(d);
  std::size_t b = n;
  for (std::size_t i = d; i-- > 0;) {
    const std::size_t k = choice[i + 1][b];
    x[i] = static_cast<double>(k) / nd;
    b -= k;
  }
  return x;
}

}  // namespace ridel
