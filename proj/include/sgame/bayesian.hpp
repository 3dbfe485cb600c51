#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sgame/game_core.hpp"
#include "sgame/stackelberg.hpp"

namespace sgame {

/// The PU's belief about the eavesdropper gain: exponential with mean b_bar
/// (power gain of a Rayleigh channel).
struct BeliefModel {
  double b_bar = 1.0;

  void validate() const;
  double density(double b) const;
};

/// E_b[C(b p0)] under the belief; zero at p0 = 0.
double expected_eavesdrop_rate(const BeliefModel& belief, double p0);

/// E_b[pu_utility]. `params.b` is ignored.
double expected_pu_utility(const GameParams& params, const BeliefModel& belief, double p0,
                           double alpha);

/// PU best response to alpha when only the belief about b is known.
double p_b(const GameParams& params, const BeliefModel& belief, double alpha);

/// PU-led epsilon-Stackelberg strategy when b is hidden. Mirrors the
/// revealed-b case table with p_b in place of p_star and expected utility in
/// place of pu_utility. Reported u0 is the PU's expected utility.
StackelbergOutcome bayes_sep(const GameParams& params, const BeliefModel& belief);

struct ComparisonRecord {
  double b_bar = 0.0;
  double c = 0.0;
  double avg_u0_revealed = 0.0;
  double avg_u0_hidden = 0.0;
  double avg_u1_revealed = 0.0;
  double avg_u1_hidden = 0.0;
  double se_u0_diff = 0.0;  ///< standard error of the paired u0 difference
  double se_u1_diff = 0.0;  ///< standard error of the paired u1 difference
  double hidden_leader_power = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// Averages realized utilities over exponential draws of b for every
/// (c, b_bar) pair, comparing the revealed-b SEP against the hidden-b SEP
/// (the SU always best-responds with the true b). Records are ordered
/// c-major; each pair uses its own counter-based stream so the output is
/// independent of `workers`.
std::vector<ComparisonRecord> monte_carlo_compare(const GameParams& params,
                                                  std::span<const double> c_values,
                                                  std::span<const double> b_bar_values,
                                                  std::size_t n_samples, std::uint64_t seed,
                                                  std::size_t workers = 1);

}  // namespace sgame
