#include "sgame/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "sgame/game_core.hpp"

namespace sgame {

namespace {

constexpr double kSplit = 1.0;
constexpr int kMaxTerms = 500;

double series_e1(double x) {
  // E1(x) = -gamma - ln x - sum_{k>=1} (-x)^k / (k k!)
  double sum = 0.0;
  double term = 1.0;
  for (int k = 1; k <= kMaxTerms; ++k) {
    term *= -x / k;
    const double contrib = term / k;
    sum += contrib;
    if (std::abs(contrib) < std::numeric_limits<double>::epsilon() * std::abs(sum)) {
      break;
    }
  }
  return -std::numbers::egamma - std::log(x) - sum;
}

// Modified Lentz evaluation of the continued fraction for exp(x) E1(x).
double continued_fraction_scaled_e1(double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxTerms; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < eps) {
      break;
    }
  }
  return h;
}

void require_positive(double x) {
  if (!(x > 0.0)) {
    throw DomainError("exp_integral_e1: argument must be > 0");
  }
}

}  // namespace

double exp_integral_e1(double x) {
  require_positive(x);
  if (x <= kSplit) {
    return series_e1(x);
  }
  return continued_fraction_scaled_e1(x) * std::exp(-x);
}

double scaled_exp_integral_e1(double x) {
  require_positive(x);
  if (x <= kSplit) {
    return std::exp(x) * series_e1(x);
  }
  return continued_fraction_scaled_e1(x);
}

}  // namespace sgame
