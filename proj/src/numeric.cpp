#include "sgame/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace sgame {

ScalarMax golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                             double tol, int max_iterations) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < max_iterations && hi - lo > tol; ++it) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  const double x = 0.5 * (lo + hi);
  return {x, f(x)};
}

ScalarMax maximize_on_interval(const std::function<double(double)>& f, double lo, double hi,
                               std::size_t grid_n, double tol) {
  if (hi <= lo) {
    return {lo, f(lo)};
  }
  grid_n = std::max<std::size_t>(grid_n, 3);
  const double step = (hi - lo) / static_cast<double>(grid_n - 1);
  const auto at = [&](std::size_t i) {
    return i + 1 == grid_n ? hi : lo + step * static_cast<double>(i);
  };

  std::size_t best_i = 0;
  double best_v = f(lo);
  for (std::size_t i = 1; i < grid_n; ++i) {
    const double v = f(at(i));
    if (v > best_v) {
      best_v = v;
      best_i = i;
    }
  }
  ScalarMax best{at(best_i), best_v};

  const double left = at(best_i == 0 ? 0 : best_i - 1);
  const double right = at(std::min(best_i + 1, grid_n - 1));
  const ScalarMax refined = golden_section_max(f, left, right, tol);
  if (refined.value > best.value) {
    best = refined;
  }
  return best;
}

}  // namespace sgame
