#pragma once

#include <string>

#include "sgame/game_core.hpp"
#include "sgame/nash.hpp"

namespace sgame {

enum class Leader { pu, su };

std::string to_string(Leader leader);

/// Leader/follower outcome. For a PU-led game the leader strategy is a
/// power and the follower strategy a time split; for an SU-led game the
/// roles swap.
struct StackelbergOutcome {
  Leader leader = Leader::pu;
  double leader_strategy = 0.0;
  double follower_strategy = 0.0;
  UtilityPair utilities;
  double leader_value = 0.0;  ///< supremal guaranteed PU value (PU-led only)
  double epsilon_used = 0.0;
  std::string warning;        ///< non-empty when the backoff had to be clamped

  /// The played (p0, alpha) pair regardless of who leads.
  Strategy profile() const;
};

struct DominanceReport {
  UtilityPair se_utilities;
  UtilityPair ne_utilities;
  bool dominates = false;
  double margin_u0 = 0.0;
  double margin_u1 = 0.0;
};

/// SU reaction used by a PU leader: transmit strictly below Q, otherwise
/// eavesdrop. At exactly Q the pessimistic (for the PU) alpha = 0 is taken.
double follower_alpha(const GameParams& params, double p0);

/// Supremum over PU powers of the infimum over the SU's reaction set.
/// Covers both channel regimes.
double leader_value(const GameParams& params);

/// epsilon-Stackelberg equilibrium with the PU leading.
StackelbergOutcome sep_strategy(const GameParams& params);

/// Stackelberg equilibrium with the SU leading.
StackelbergOutcome ses_strategy(const GameParams& params);

/// Both players' SE utilities against the NE (expected) utilities, with a
/// 1e-9 slack.
DominanceReport dominance_check(const GameParams& params, const StackelbergOutcome& se,
                                const NashOutcome& ne);

/// The outcome the game settles on: the SU accepts to follow.
StackelbergOutcome predicted_outcome(const GameParams& params);

}  // namespace sgame
