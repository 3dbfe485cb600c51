#pragma once

namespace sgame {

/// Exponential integral E1(x) = int_x^inf exp(-t)/t dt for x > 0.
/// Power series for x <= 1, continued fraction beyond.
double exp_integral_e1(double x);

/// exp(x) * E1(x), evaluated without forming exp(x) for large x.
double scaled_exp_integral_e1(double x);

}  // namespace sgame
