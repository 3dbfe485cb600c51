#include "sgame/nash.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sgame {

bool ReactionSet::contains(double x, double tol) const {
  switch (kind) {
    case Kind::point:
      return std::abs(x - first) <= tol;
    case Kind::interval:
      return x >= first - tol && x <= second + tol;
    case Kind::two_point:
      return std::abs(x - first) <= tol || std::abs(x - second) <= tol;
  }
  return false;
}

Strategy MixedStrategy::representative() const {
  double p0 = 0.0;
  for (const auto& [x, prob] : pu_support) {
    if (prob > 0.0) {
      p0 = std::max(p0, x);
    }
  }
  return {p0, su_expected_alpha};
}

std::string to_string(NashCase c) {
  switch (c) {
    case NashCase::t1_low_q:
      return "T1-low-Q";
    case NashCase::t1_mid_q:
      return "T1-mid-Q";
    case NashCase::t1_high_q:
      return "T1-high-Q";
    case NashCase::t2_neg_q:
      return "T2-negQ";
    case NashCase::t2_zero_q:
      return "T2-zeroQ";
    case NashCase::t2_mixed:
      return "T2-mixed";
    case NashCase::t2_mid_q:
      return "T2-mid-Q";
    case NashCase::t2_high_q:
      return "T2-high-Q";
  }
  return "unknown";
}

ReactionSet su_best_response(const GameParams& params, double p0) {
  const double q = threshold_q(params);
  if (p0 < q) {
    return ReactionSet::point(1.0);
  }
  if (p0 > q) {
    return ReactionSet::point(0.0);
  }
  return ReactionSet::interval(0.0, 1.0);
}

ReactionSet pu_best_response(const GameParams& params, double alpha) {
  if (params.primary_dominates()) {
    return ReactionSet::point(p_star(params, alpha));
  }
  const AlphaTilde tilde = alpha_tilde(params);
  switch (tilde.kind) {
    case AlphaTilde::Kind::below:
      return ReactionSet::point(p_star(params, alpha));
    case AlphaTilde::Kind::above:
      return ReactionSet::point(0.0);
    case AlphaTilde::Kind::interior:
      break;
  }
  if (alpha < tilde.value) {
    return ReactionSet::point(0.0);
  }
  if (alpha > tilde.value) {
    return ReactionSet::point(p_star(params, alpha));
  }
  const double candidate = interior_candidate(params, tilde.value);
  return candidate > 0.0 ? ReactionSet::two_point(0.0, candidate) : ReactionSet::point(0.0);
}

std::pair<double, double> mixed_pu_probs(const GameParams& params) {
  if (params.primary_dominates()) {
    throw PreconditionError("mixed_pu_probs: requires a < b");
  }
  const AlphaTilde tilde = alpha_tilde(params);
  const double support_hi = interior_candidate(params, tilde.clamped());
  const double rate_silent = capacity(params.c * params.p1_max);
  const double rate_loud = capacity(params.c * params.p1_max / (1.0 + params.a * support_hi));
  const double prob_zero = (params.beta - rate_loud) / (rate_silent - rate_loud);
  if (!(prob_zero > 0.0 && prob_zero < 1.0)) {
    throw PreconditionError("mixed_pu_probs: beta outside the open rate interval; no interior mixture");
  }
  return {prob_zero, 1.0 - prob_zero};
}

UtilityPair expected_utilities(const GameParams& params, const MixedStrategy& s) {
  UtilityPair u;
  for (const auto& [p0, prob] : s.pu_support) {
    u.u0 += prob * pu_utility(params, p0, s.su_expected_alpha);
    u.u1 += prob * su_utility(params, p0, s.su_expected_alpha);
  }
  return u;
}

namespace {

NashOutcome pure(const GameParams& params, NashCase tag, double p0, double alpha,
                 SuSupport family = SuSupport::singleton) {
  NashOutcome out;
  out.case_tag = tag;
  out.strategy.pu_support = {{p0, 1.0}};
  out.strategy.su_expected_alpha = alpha;
  out.strategy.su_support = family;
  out.utilities = expected_utilities(params, out.strategy);
  return out;
}

NashOutcome solve_primary_dominant(const GameParams& params) {
  const double q = threshold_q(params);
  const double silent_best = p_star(params, 0.0);
  const double loud_best = p_star(params, 1.0);
  if (q < silent_best) {
    return pure(params, NashCase::t1_low_q, silent_best, 0.0);
  }
  if (q <= loud_best) {
    return pure(params, NashCase::t1_mid_q, q, std::clamp(alpha_q_raw(params), 0.0, 1.0));
  }
  return pure(params, NashCase::t1_high_q, loud_best, 1.0);
}

NashOutcome solve_eavesdropper_dominant(const GameParams& params) {
  const AlphaTilde tilde = alpha_tilde(params);
  if (tilde.kind != AlphaTilde::Kind::interior) {
    throw std::logic_error("solve_nash: alpha_tilde outside [0, 1] with a < b (" +
                           to_string(tilde.kind) + ")");
  }
  const double q = threshold_q(params);
  const double tilde_power = interior_candidate(params, tilde.value);
  const double loud_best = p_star(params, 1.0);

  if (q < 0.0) {
    return pure(params, NashCase::t2_neg_q, 0.0, 0.0);
  }
  if (q == 0.0) {
    return pure(params, NashCase::t2_zero_q, 0.0, 0.5 * tilde.value,
                SuSupport::interval_to_alpha_tilde);
  }
  if (q < tilde_power) {
    const auto [prob_zero, prob_hi] = mixed_pu_probs(params);
    NashOutcome out;
    out.case_tag = NashCase::t2_mixed;
    out.strategy.pu_support = {{0.0, prob_zero}, {tilde_power, prob_hi}};
    out.strategy.su_expected_alpha = tilde.value;
    out.strategy.su_support = SuSupport::unit_interval;
    out.utilities = expected_utilities(params, out.strategy);
    return out;
  }
  if (q <= loud_best) {
    return pure(params, NashCase::t2_mid_q, q, std::clamp(alpha_q_raw(params), 0.0, 1.0),
                SuSupport::unit_interval);
  }
  return pure(params, NashCase::t2_high_q, loud_best, 1.0);
}

}  // namespace

NashOutcome solve_nash(const GameParams& params) {
  params.validate();
  return params.primary_dominates() ? solve_primary_dominant(params)
                                    : solve_eavesdropper_dominant(params);
}

VerificationReport verify_equilibrium(const GameParams& params, const NashOutcome& outcome,
                                      std::size_t grid_n) {
  grid_n = std::max<std::size_t>(grid_n, 2);
  const MixedStrategy& s = outcome.strategy;
  const double alpha = s.su_expected_alpha;
  const UtilityPair value = expected_utilities(params, s);

  VerificationReport report;
  const double max_slope = params.a + params.b + params.c * params.p1_max;
  const double step = std::max(params.p0_max, 1.0) / static_cast<double>(grid_n - 1);
  report.tolerance = 1e-6 + max_slope * step;

  double best_pu = value.u0;
  for (std::size_t i = 0; i < grid_n; ++i) {
    const double p0 = params.p0_max * static_cast<double>(i) / static_cast<double>(grid_n - 1);
    best_pu = std::max(best_pu, pu_utility(params, p0, alpha));
  }
  report.worst_pu_deviation = best_pu - value.u0;

  // SU payoff against the PU mixture is linear in alpha with this slope.
  double slope = 0.0;
  for (const auto& [p0, prob] : s.pu_support) {
    slope += prob * su_utility(params, p0, 1.0);
  }
  double best_su = value.u1;
  for (std::size_t i = 0; i < grid_n; ++i) {
    const double a = static_cast<double>(i) / static_cast<double>(grid_n - 1);
    best_su = std::max(best_su, a * slope);
  }
  report.worst_su_deviation = best_su - value.u1;

  // Indifference on the support of each mixing player.
  if (s.pu_support.size() > 1) {
    for (const auto& [p0, prob] : s.pu_support) {
      report.indifference_gap =
          std::max(report.indifference_gap, std::abs(pu_utility(params, p0, alpha) - value.u0));
    }
  }
  if (s.su_support != SuSupport::singleton) {
    report.indifference_gap = std::max(report.indifference_gap, std::abs(slope));
  }

  report.pass = report.worst_pu_deviation <= report.tolerance &&
                report.worst_su_deviation <= report.tolerance &&
                report.indifference_gap <= report.tolerance;
  return report;
}

}  // namespace sgame
