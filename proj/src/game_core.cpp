#include "sgame/game_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace sgame {

namespace {

constexpr double kLn4 = 2.0 * std::numbers::ln2;

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw PreconditionError(std::string("GameParams.") + name + " must be finite and > 0");
  }
}

}  // namespace

void GameParams::validate() const {
  require_positive(a, "a");
  require_positive(b, "b");
  require_positive(c, "c");
  require_positive(gamma_bar, "gamma_bar");
  require_positive(beta, "beta");
  require_positive(p0_max, "p0_max");
  require_positive(p1_max, "p1_max");
  require_positive(epsilon, "epsilon");
  if (epsilon >= p0_max) {
    throw PreconditionError("GameParams.epsilon must be smaller than p0_max");
  }
}

double GameParams::gamma() const { return gamma_bar / kLn4; }

double capacity(double x) {
  if (x < 0.0 || std::isnan(x)) {
    throw DomainError("capacity: SNR must be non-negative");
  }
  return 0.5 * std::log2(1.0 + x);
}

double pu_utility(const GameParams& params, double p0, double alpha) {
  return capacity(params.a * p0) - (1.0 - alpha) * capacity(params.b * p0) - params.gamma() * p0;
}

double pu_utility_secrecy(const GameParams& params, double p0, double alpha) {
  const double secrecy = capacity(params.a * p0) - (1.0 - alpha) * capacity(params.b * p0);
  return std::max(secrecy, 0.0) - params.gamma() * p0;
}

double su_utility(const GameParams& params, double p0, double alpha) {
  return alpha * (capacity(params.c * params.p1_max / (1.0 + params.a * p0)) - params.beta);
}

UtilityPair utilities(const GameParams& params, const Strategy& s) {
  return {pu_utility(params, s.p0, s.alpha), su_utility(params, s.p0, s.alpha)};
}

double threshold_q(const GameParams& params) {
  const double denom = std::exp2(2.0 * params.beta) - 1.0;
  if (denom == 0.0) {
    throw DomainError("threshold_q: beta must be non-zero");
  }
  return (params.c * params.p1_max / denom - 1.0) / params.a;
}

double p_hat(const GameParams& params, double alpha) {
  const double a = params.a;
  const double b = params.b;
  const double root = std::sqrt(1.0 - alpha);
  const double denom = a * b * (1.0 - root);
  if (denom == 0.0) {
    return b > a ? std::numeric_limits<double>::infinity()
                 : -std::numeric_limits<double>::infinity();
  }
  return (b * root - a) / denom;
}

std::optional<double> p_prime_unclamped(const GameParams& params, double alpha) {
  const double a = params.a;
  const double b = params.b;
  const double g = params.gamma_bar;
  const double x = alpha * a * b - g * (a + b);
  const double y = 4.0 * g * a * b * (g - a + b * (1.0 - alpha));
  const double disc = x * x - y;
  if (disc < 0.0) {
    return std::nullopt;
  }
  return (x + std::sqrt(disc)) / (2.0 * g * a * b);
}

std::optional<double> p_prime(const GameParams& params, double alpha) {
  const auto raw = p_prime_unclamped(params, alpha);
  if (!raw) {
    return std::nullopt;
  }
  return std::clamp(*raw, 0.0, params.p0_max);
}

double interior_candidate(const GameParams& params, double alpha) {
  return p_prime(params, alpha).value_or(params.p0_max);
}

double p_star(const GameParams& params, double alpha) {
  const double candidate = interior_candidate(params, alpha);
  return pu_utility(params, candidate, alpha) > 0.0 ? candidate : 0.0;
}

double p_star_full_alpha(const GameParams& params) {
  const double unconstrained = std::max(1.0 / params.gamma_bar - 1.0 / params.a, 0.0);
  return std::min(params.p0_max, unconstrained);
}

double backoff_distance(double a, double b, double gamma_bar, double q, double epsilon) {
  const double lo = std::max(q - epsilon, 0.0);
  const double hi = std::max(q, 0.0);
  // Both rate derivatives decrease in p, so the slope is bracketed by
  // mixing the interval ends.
  const double scale = 2.0 * std::numbers::ln2;
  const double upper = (a / (1.0 + a * lo) - b / (1.0 + b * hi) - gamma_bar) / scale;
  const double lower = (a / (1.0 + a * hi) - b / (1.0 + b * lo) - gamma_bar) / scale;
  const double slope = std::max(std::abs(upper), std::abs(lower));
  return epsilon / std::max(1.0, slope);
}

double alpha_q_raw(const GameParams& params) {
  const double a = params.a;
  const double b = params.b;
  const double q = threshold_q(params);
  return (params.gamma_bar * (q * (a + b + a * b * q) + 1.0) - a + b) / (b * (a * q + 1.0));
}

std::optional<double> alpha_q(const GameParams& params) {
  constexpr double slack = 1e-12;
  const double value = alpha_q_raw(params);
  if (!std::isfinite(value) || value < -slack || value > 1.0 + slack) {
    return std::nullopt;
  }
  return std::clamp(value, 0.0, 1.0);
}

double AlphaTilde::clamped() const {
  switch (kind) {
    case Kind::below:
      return 0.0;
    case Kind::above:
      return 1.0;
    case Kind::interior:
      break;
  }
  return std::clamp(value, 0.0, 1.0);
}

AlphaTilde alpha_tilde(const GameParams& params) {
  const auto h = [&](double alpha) {
    return pu_utility(params, interior_candidate(params, alpha), alpha);
  };
  if (h(0.0) > 0.0) {
    return {AlphaTilde::Kind::below, 0.0};
  }
  const double h1 = h(1.0);
  if (h1 < 0.0) {
    return {AlphaTilde::Kind::above, 1.0};
  }
  if (h1 <= 0.0) {
    return {AlphaTilde::Kind::interior, 1.0};
  }
  // Invariant: h(lo) <= 0 < h(hi). Converges to the last zero of h.
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) {
      break;
    }
    if (h(mid) <= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double pick = std::abs(h(lo)) <= std::abs(h(hi)) ? lo : hi;
  return {AlphaTilde::Kind::interior, pick};
}

std::string to_string(AlphaTilde::Kind kind) {
  switch (kind) {
    case AlphaTilde::Kind::below:
      return "below";
    case AlphaTilde::Kind::interior:
      return "interior";
    case AlphaTilde::Kind::above:
      return "above";
  }
  return "unknown";
}

}  // namespace sgame
