#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sgame/game_core.hpp"

namespace sgame {

struct SuProfile {
  int id = 0;
  double b = 1.0;      ///< eavesdropper gain
  double c = 1.0;      ///< secondary gain
  double p_max = 1.0;  ///< transmit power
  double beta = 1.0;   ///< energy cost

  double k() const { return c * p_max; }
};

/// SU ids from highest decoding priority (decoded last) to lowest.
/// The SUs ahead of SU i interfere with decoding SU i.
struct DecodingOrder {
  std::vector<int> priority;
};

struct MultiGame {
  double a = 1.0;
  double gamma_bar = 1.0;
  double p0_max = 1.0;
  double epsilon = 1e-3;
  std::vector<SuProfile> sus;
  DecodingOrder order;

  /// Throws PreconditionError on non-positive fields, duplicate ids or an
  /// order that is not a permutation of the ids.
  void validate() const;
  double gamma() const;
  std::size_t size() const { return sus.size(); }

  /// Index into `sus` of every priority rank (rank 0 is the highest priority).
  std::vector<std::size_t> ranked_indices() const;

  /// Two-player view of the PU against SU `index` alone.
  GameParams pair_params(std::size_t index) const;
};

/// Order giving priority by listing position: sus[0] highest.
DecodingOrder listing_order(const MultiGame& game);

struct MultiPuUtility {
  double value = 0.0;
  int dominating = -1;  ///< index into sus of the largest eavesdrop term; -1 when all vanish
};

/// PU utility with the largest eavesdropped rate subtracted. alphas are
/// indexed like game.sus.
MultiPuUtility pu_utility_multi(const MultiGame& game, double p0, const std::vector<double>& alphas);

/// C(a p0) - gamma p0: the PU utility when no SU eavesdrops.
double pu_utility_open(const MultiGame& game, double p0);

double su_utility_multi(const MultiGame& game, std::size_t index, double p0,
                        const std::vector<double>& alphas);

/// Threshold of SU `index` given the decisions of the SUs ahead of it.
double threshold_qi(const MultiGame& game, std::size_t index, const std::vector<double>& alphas);

/// Thresholds with every SU transmitting, indexed like game.sus.
std::vector<double> thresholds_all_transmit(const MultiGame& game);

/// Follower responses to a leader power, resolved in priority order.
/// SUs outside `allowed` (when given, indexed like game.sus) are blocked and
/// eavesdrop. Ties at the threshold resolve to eavesdropping.
std::vector<double> followers_cascade(const MultiGame& game, double p0,
                                      const std::vector<bool>* allowed = nullptr);

/// Descending-b priority. Requires c*p_max and beta equal across SUs.
DecodingOrder optimal_order_uniform(const MultiGame& game);

/// True when c*p_max and beta agree across SUs within 1e-12 (relative).
bool has_uniform_parameters(const MultiGame& game);

struct MultiOutcome {
  double p0_sep = 0.0;
  std::vector<double> alphas;      ///< indexed like game.sus
  std::vector<int> allowed_sus;    ///< ids with alpha = 1, in priority order
  double u0_sep = 0.0;
  std::vector<double> su_utilities;
  int dominating = -1;
  std::string warning;
};

/// Outcome with the PU playing p0 and the followers' cascade response.
MultiOutcome evaluate_leader_power(const MultiGame& game, double p0,
                                   const std::vector<bool>* allowed = nullptr);

/// Iterative spectrum-grant search for the PU power and the granted SUs.
/// The game's order must list SUs by non-increasing b.
MultiOutcome grant_algorithm(const MultiGame& game);

/// Best PU power for the game's fixed order against the follower cascade.
/// Scans each piece of constant follower response, with the epsilon backoff
/// below every breakpoint, plus a grid_n safety scan.
MultiOutcome leader_best_power(const MultiGame& game, std::size_t grid_n = 1000,
                               const std::vector<bool>* allowed = nullptr);

struct OrderResult {
  DecodingOrder order;
  MultiOutcome outcome;
};

struct BruteForceResult {
  OrderResult best;
  std::vector<OrderResult> all;  ///< every permutation, lexicographic in ids
};

/// Exhaustive search over decoding orders. Refuses N > 8.
BruteForceResult brute_force_order(const MultiGame& game, std::size_t grid_n = 1000);

struct MultiProfile {
  double p0 = 0.0;
  std::vector<double> alphas;
  double u0 = 0.0;
  std::vector<double> su_utilities;
};

/// Simultaneous-move equilibrium by synchronous best-response iteration
/// from all-transmit and all-eavesdrop starts. Returns every start that
/// converged (state unchanged for 2 rounds).
std::vector<MultiProfile> simultaneous_equilibria(const MultiGame& game,
                                                  std::size_t max_rounds = 200);

/// Stackelberg outcome with SU `leader` (index) committing first to a time
/// split on a grid of `alpha_grid` points; the PU and other SUs then play a
/// simultaneous game. Empty when no grid point yields a converged follower
/// equilibrium.
std::optional<MultiProfile> su_led_equilibrium(const MultiGame& game, std::size_t leader,
                                               std::size_t alpha_grid = 51);

}  // namespace sgame
