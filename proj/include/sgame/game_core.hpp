#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace sgame {

/// Raised when an argument lies outside the mathematical domain of a function.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a solver is called on inputs that violate its stated precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Channel gains and cost constants of the two-player primary/secondary game.
///
/// `gamma_bar` is the scaled power cost (gamma * ln 4). All utilities use
/// gamma = gamma_bar / ln 4 internally, so stationarity conditions are
/// expressed directly in gamma_bar.
struct GameParams {
  double a = 1.0;          ///< primary channel power gain
  double b = 1.0;          ///< eavesdropper channel power gain
  double c = 1.0;          ///< secondary channel power gain
  double gamma_bar = 1.0;  ///< scaled PU power cost
  double beta = 1.0;       ///< SU energy cost per unit transmission time
  double p0_max = 1.0;     ///< PU power budget
  double p1_max = 1.0;     ///< SU transmit power
  double epsilon = 1e-3;   ///< Stackelberg backoff

  /// Throws PreconditionError when a field violates its invariant.
  void validate() const;

  /// Unit power cost gamma = gamma_bar / ln 4.
  double gamma() const;

  /// True in the regime a >= b (ties are routed here).
  bool primary_dominates() const { return a >= b; }
};

struct Strategy {
  double p0 = 0.0;
  double alpha = 0.0;
};

struct UtilityPair {
  double u0 = 0.0;
  double u1 = 0.0;
};

/// C(x) = log2(1 + x) / 2.
double capacity(double x);

/// Un-clipped PU utility C(a p0) - (1 - alpha) C(b p0) - gamma p0.
double pu_utility(const GameParams& params, double p0, double alpha);

/// PU secrecy utility [C(a p0) - (1 - alpha) C(b p0)]^+ - gamma p0.
double pu_utility_secrecy(const GameParams& params, double p0, double alpha);

/// SU utility alpha (C(c p1_max / (1 + a p0)) - beta).
double su_utility(const GameParams& params, double p0, double alpha);

UtilityPair utilities(const GameParams& params, const Strategy& s);

/// PU power at which the SU's transmission payoff vanishes. May be negative.
double threshold_q(const GameParams& params);

/// Boundary between the convex (below) and concave (above) parts of
/// pu_utility in p0. At alpha = 0 returns -inf when a >= b and +inf otherwise.
double p_hat(const GameParams& params, double alpha);

/// Larger stationary point of pu_utility(., alpha), clamped to [0, p0_max].
/// Empty when no real stationary point exists.
std::optional<double> p_prime(const GameParams& params, double alpha);

/// Unclamped larger stationary point; empty when the discriminant is negative.
std::optional<double> p_prime_unclamped(const GameParams& params, double alpha);

/// The non-zero candidate compared against silence by p_star:
/// p_prime when it exists, otherwise p0_max.
double interior_candidate(const GameParams& params, double alpha);

/// PU best response: the better of {0, p_prime(alpha)}; ties resolve to 0.
double p_star(const GameParams& params, double alpha);

/// PU best response to alpha = 1: min{p0_max, [1/gamma_bar - 1/a]^+}.
double p_star_full_alpha(const GameParams& params);

/// Distance below a breakpoint q at which a leader costs itself at most
/// `epsilon` on the utility C(a p) - C(b p) - gamma p (b = 0: nobody
/// eavesdrops). Equals epsilon / max(1, L), with L bounding |slope| on
/// [q - epsilon, q], so it is epsilon whenever the slope stays within 1.
double backoff_distance(double a, double b, double gamma_bar, double q, double epsilon);

/// Closed-form alpha solving p_prime(alpha) = Q, unrestricted.
double alpha_q_raw(const GameParams& params);

/// alpha_q_raw when it lies in [0, 1], else empty.
std::optional<double> alpha_q(const GameParams& params);

/// Location of the zero crossing of h(alpha) = pu_utility(interior_candidate(alpha), alpha).
struct AlphaTilde {
  enum class Kind { below, interior, above };
  Kind kind = Kind::interior;
  double value = 0.0;  ///< meaningful only for Kind::interior

  /// The crossing clamped into [0, 1].
  double clamped() const;
};

AlphaTilde alpha_tilde(const GameParams& params);

std::string to_string(AlphaTilde::Kind kind);

}  // namespace sgame
