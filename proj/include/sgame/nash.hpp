#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "sgame/game_core.hpp"

namespace sgame {

/// Best-response correspondence of one player to a fixed opponent strategy.
struct ReactionSet {
  enum class Kind { point, interval, two_point };
  Kind kind = Kind::point;
  double first = 0.0;   ///< the point, the lower interval end, or the smaller member
  double second = 0.0;  ///< the upper interval end or the larger member

  static ReactionSet point(double x) { return {Kind::point, x, x}; }
  static ReactionSet interval(double lo, double hi) { return {Kind::interval, lo, hi}; }
  static ReactionSet two_point(double x, double y) { return {Kind::two_point, x, y}; }

  bool contains(double x, double tol = 0.0) const;
};

/// Support family declared for the SU's mixed strategy.
enum class SuSupport { singleton, interval_to_alpha_tilde, unit_interval };

/// PU distribution over a finite support plus the SU's expected time split.
/// The SU side is characterized only by E[alpha]; any distribution on the
/// declared support with that mean is an equilibrium.
struct MixedStrategy {
  std::vector<std::pair<double, double>> pu_support;  ///< (p0, probability)
  double su_expected_alpha = 0.0;
  SuSupport su_support = SuSupport::singleton;

  bool is_pure() const {
    return pu_support.size() == 1 && su_support == SuSupport::singleton;
  }
  /// Point-mass proxy: the largest PU support point and E[alpha].
  Strategy representative() const;
};

enum class NashCase {
  t1_low_q,
  t1_mid_q,
  t1_high_q,
  t2_neg_q,
  t2_zero_q,
  t2_mixed,
  t2_mid_q,
  t2_high_q,
};

std::string to_string(NashCase c);

struct NashOutcome {
  NashCase case_tag = NashCase::t1_low_q;
  MixedStrategy strategy;
  UtilityPair utilities;  ///< expected utilities under `strategy`
};

ReactionSet su_best_response(const GameParams& params, double p0);
ReactionSet pu_best_response(const GameParams& params, double alpha);

/// Probabilities (at 0, at p_prime(alpha_tilde)) that make the SU
/// indifferent at alpha_tilde. Throws PreconditionError when the mixture
/// would be degenerate.
std::pair<double, double> mixed_pu_probs(const GameParams& params);

/// Full equilibrium classification for both channel regimes.
NashOutcome solve_nash(const GameParams& params);

/// Expected utilities of a (possibly mixed) profile. The SU enters only
/// through E[alpha] since both utilities are linear in alpha.
UtilityPair expected_utilities(const GameParams& params, const MixedStrategy& s);

struct VerificationReport {
  bool pass = false;
  double worst_pu_deviation = 0.0;  ///< best unilateral PU gain found
  double worst_su_deviation = 0.0;  ///< best unilateral SU gain found
  double indifference_gap = 0.0;    ///< mixed outcomes only
  double tolerance = 0.0;
};

/// Grid check that neither player gains more than the tolerance by a
/// unilateral deviation. Tolerance is 1e-6 plus a Lipschitz slack
/// (a + b + c p1_max) * grid step.
VerificationReport verify_equilibrium(const GameParams& params, const NashOutcome& outcome,
                                      std::size_t grid_n = 100000);

}  // namespace sgame
