#pragma once

#include <cstddef>
#include <functional>

namespace sgame {

struct ScalarMax {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section search for a maximum of a unimodal `f` on [lo, hi],
/// stopping once the bracket is narrower than `tol`.
ScalarMax golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                             double tol = 1e-8, int max_iterations = 500);

/// Global maximization of `f` on [lo, hi]: a uniform pre-scan of `grid_n`
/// points followed by golden-section refinement around the best grid point.
/// Unimodality is not assumed. Ties resolve to the smaller abscissa.
ScalarMax maximize_on_interval(const std::function<double(double)>& f, double lo, double hi,
                               std::size_t grid_n = 1000, double tol = 1e-8);

}  // namespace sgame
