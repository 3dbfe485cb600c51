#include "sgame/stackelberg.hpp"

#include <algorithm>
#include <cmath>

#include "sgame/numeric.hpp"

namespace sgame {

namespace {

constexpr double kDominanceSlack = 1e-9;

/// Power just below Q costing the PU at most epsilon against u0(Q, 1),
/// clamped at zero. Records a warning when clamping occurs.
double backoff(const GameParams& params, double q, std::string& warning) {
  const double p0 = q - backoff_distance(params.a, 0.0, params.gamma_bar, q, params.epsilon);
  if (p0 < 0.0) {
    warning = "backoff Q - epsilon is negative; leader power clamped to 0";
    return 0.0;
  }
  return std::min(p0, params.p0_max);
}

StackelbergOutcome pu_led(const GameParams& params, double p0, std::string warning) {
  StackelbergOutcome out;
  out.leader = Leader::pu;
  out.leader_strategy = p0;
  out.follower_strategy = follower_alpha(params, p0);
  out.utilities = utilities(params, out.profile());
  out.leader_value = leader_value(params);
  out.epsilon_used = params.epsilon;
  out.warning = std::move(warning);
  return out;
}

}  // namespace

std::string to_string(Leader leader) { return leader == Leader::pu ? "PU" : "SU"; }

Strategy StackelbergOutcome::profile() const {
  return leader == Leader::pu ? Strategy{leader_strategy, follower_strategy}
                              : Strategy{follower_strategy, leader_strategy};
}

double follower_alpha(const GameParams& params, double p0) {
  return p0 < threshold_q(params) ? 1.0 : 0.0;
}

double leader_value(const GameParams& params) {
  const double q = threshold_q(params);
  const double silent_best = p_star(params, 0.0);
  const double loud_best = p_star(params, 1.0);
  if (q <= 0.0) {
    return pu_utility(params, silent_best, 0.0);
  }
  if (q < silent_best) {
    return std::max(pu_utility(params, q, 1.0), pu_utility(params, silent_best, 0.0));
  }
  if (q <= loud_best) {
    return pu_utility(params, q, 1.0);
  }
  return pu_utility(params, loud_best, 1.0);
}

StackelbergOutcome sep_strategy(const GameParams& params) {
  params.validate();
  const double q = threshold_q(params);
  const double loud_best = p_star(params, 1.0);
  std::string warning;

  if (!params.primary_dominates()) {
    if (q <= 0.0) {
      return pu_led(params, 0.0, "");
    }
    if (q <= loud_best) {
      const double p0 = backoff(params, q, warning);
      return pu_led(params, p0, warning);
    }
    return pu_led(params, loud_best, "");
  }

  const double silent_best = p_star(params, 0.0);
  if (q <= 0.0) {
    return pu_led(params, silent_best, "");
  }
  if (q < silent_best) {
    const double below = backoff(params, q, warning);
    const double u_below = pu_utility(params, below, follower_alpha(params, below));
    const double u_silent = pu_utility(params, silent_best, follower_alpha(params, silent_best));
    return u_below >= u_silent ? pu_led(params, below, warning) : pu_led(params, silent_best, "");
  }
  if (q <= loud_best) {
    const double p0 = backoff(params, q, warning);
    return pu_led(params, p0, warning);
  }
  return pu_led(params, loud_best, "");
}

StackelbergOutcome ses_strategy(const GameParams& params) {
  params.validate();
  StackelbergOutcome out;
  out.leader = Leader::su;
  out.epsilon_used = params.epsilon;

  if (params.primary_dominates()) {
    const auto objective = [&](double alpha) {
      return su_utility(params, p_star(params, alpha), alpha);
    };
    const ScalarMax best = maximize_on_interval(objective, 0.0, 1.0, 1000, 1e-8);
    out.leader_strategy = best.x;
    out.follower_strategy = p_star(params, best.x);
  } else {
    // Just below alpha_tilde the PU stays silent; transmission only pays when Q > 0.
    const AlphaTilde tilde = alpha_tilde(params);
    double alpha = 0.0;
    if (threshold_q(params) > 0.0) {
      alpha = std::max(tilde.clamped() - params.epsilon, 0.0);
      if (tilde.clamped() - params.epsilon < 0.0) {
        out.warning = "alpha_tilde - epsilon is negative; leader split clamped to 0";
      }
    }
    out.leader_strategy = alpha;
    out.follower_strategy = 0.0;
  }
  out.utilities = utilities(params, out.profile());
  return out;
}

DominanceReport dominance_check(const GameParams& params, const StackelbergOutcome& se,
                                const NashOutcome& ne) {
  DominanceReport report;
  report.se_utilities = utilities(params, se.profile());
  report.ne_utilities = expected_utilities(params, ne.strategy);
  report.margin_u0 = report.se_utilities.u0 - report.ne_utilities.u0;
  report.margin_u1 = report.se_utilities.u1 - report.ne_utilities.u1;
  report.dominates = report.margin_u0 >= -kDominanceSlack && report.margin_u1 >= -kDominanceSlack;
  return report;
}

StackelbergOutcome predicted_outcome(const GameParams& params) { return sep_strategy(params); }

}  // namespace sgame
