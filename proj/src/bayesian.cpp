#include "sgame/bayesian.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sgame/numeric.hpp"
#include "sgame/parallel.hpp"
#include "sgame/rng.hpp"
#include "sgame/special_functions.hpp"

namespace sgame {

void BeliefModel::validate() const {
  if (!(b_bar > 0.0) || !std::isfinite(b_bar)) {
    throw PreconditionError("BeliefModel.b_bar must be finite and > 0");
  }
}

double BeliefModel::density(double b) const {
  return b < 0.0 ? 0.0 : std::exp(-b / b_bar) / b_bar;
}

double expected_eavesdrop_rate(const BeliefModel& belief, double p0) {
  if (p0 <= 0.0) {
    return 0.0;
  }
  const double x = 1.0 / (belief.b_bar * p0);
  return scaled_exp_integral_e1(x) / (2.0 * std::numbers::ln2);
}

double expected_pu_utility(const GameParams& params, const BeliefModel& belief, double p0,
                           double alpha) {
  if (p0 <= 0.0) {
    return 0.0;
  }
  return capacity(params.a * p0) - (1.0 - alpha) * expected_eavesdrop_rate(belief, p0) -
         params.gamma() * p0;
}

double p_b(const GameParams& params, const BeliefModel& belief, double alpha) {
  const auto objective = [&](double p0) {
    return expected_pu_utility(params, belief, p0, alpha);
  };
  return maximize_on_interval(objective, 0.0, params.p0_max, 1000, 1e-8).x;
}

StackelbergOutcome bayes_sep(const GameParams& params, const BeliefModel& belief) {
  params.validate();
  belief.validate();
  const double q = threshold_q(params);
  const double silent_best = p_b(params, belief, 0.0);
  const double loud_best = p_b(params, belief, 1.0);
  const auto value = [&](double p0) {
    return expected_pu_utility(params, belief, p0, follower_alpha(params, p0));
  };

  StackelbergOutcome out;
  out.leader = Leader::pu;
  out.epsilon_used = params.epsilon;

  // Below Q the SU transmits, so the eavesdrop term is absent there.
  const double step = backoff_distance(params.a, 0.0, params.gamma_bar, q, params.epsilon);
  const double below = std::min(std::max(q - step, 0.0), params.p0_max);
  double lead = 0.0;
  if (q <= 0.0) {
    lead = silent_best;
    out.leader_value = expected_pu_utility(params, belief, silent_best, 0.0);
  } else if (q < silent_best) {
    lead = value(below) >= value(silent_best) ? below : silent_best;
    out.leader_value = std::max(expected_pu_utility(params, belief, q, 1.0),
                                expected_pu_utility(params, belief, silent_best, 0.0));
  } else if (q <= loud_best) {
    lead = below;
    out.leader_value = expected_pu_utility(params, belief, q, 1.0);
  } else {
    lead = loud_best;
    out.leader_value = expected_pu_utility(params, belief, loud_best, 1.0);
  }
  if (q > 0.0 && lead == below && q - step < 0.0) {
    out.warning = "backoff Q - epsilon is negative; leader power clamped to 0";
  }

  out.leader_strategy = lead;
  out.follower_strategy = follower_alpha(params, lead);
  out.utilities.u0 = value(lead);
  out.utilities.u1 = su_utility(params, lead, out.follower_strategy);
  return out;
}

namespace {

struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
  }
  double standard_error(std::size_t n) const {
    if (n < 2) {
      return 0.0;
    }
    const double mean = sum / static_cast<double>(n);
    const double var = std::max(sum_sq / static_cast<double>(n) - mean * mean, 0.0) *
                       static_cast<double>(n) / static_cast<double>(n - 1);
    return std::sqrt(var / static_cast<double>(n));
  }
};

ComparisonRecord compare_point(const GameParams& base, double c, double b_bar,
                               std::size_t n_samples, std::uint64_t seed, std::uint64_t stream) {
  GameParams params = base;
  params.c = c;
  const BeliefModel belief{b_bar};
  const StackelbergOutcome hidden = bayes_sep(params, belief);
  const double hidden_p0 = hidden.leader_strategy;
  const double hidden_alpha = follower_alpha(params, hidden_p0);

  const CounterRng rng(seed, stream);
  Moments u0_rev, u0_hid, u1_rev, u1_hid, d0, d1;
  for (std::size_t k = 0; k < n_samples; ++k) {
    params.b = rng.exponential(k, b_bar);
    const StackelbergOutcome revealed = sep_strategy(params);
    const double r0 = revealed.utilities.u0;
    const double r1 = revealed.utilities.u1;
    const double h0 = pu_utility(params, hidden_p0, hidden_alpha);
    const double h1 = su_utility(params, hidden_p0, hidden_alpha);
    u0_rev.add(r0);
    u0_hid.add(h0);
    u1_rev.add(r1);
    u1_hid.add(h1);
    d0.add(r0 - h0);
    d1.add(r1 - h1);
  }

  const double n = static_cast<double>(n_samples);
  ComparisonRecord rec;
  rec.b_bar = b_bar;
  rec.c = c;
  rec.avg_u0_revealed = u0_rev.sum / n;
  rec.avg_u0_hidden = u0_hid.sum / n;
  rec.avg_u1_revealed = u1_rev.sum / n;
  rec.avg_u1_hidden = u1_hid.sum / n;
  rec.se_u0_diff = d0.standard_error(n_samples);
  rec.se_u1_diff = d1.standard_error(n_samples);
  rec.hidden_leader_power = hidden_p0;
  rec.n_samples = n_samples;
  rec.seed = seed;
  return rec;
}

}  // namespace

std::vector<ComparisonRecord> monte_carlo_compare(const GameParams& params,
                                                  std::span<const double> c_values,
                                                  std::span<const double> b_bar_values,
                                                  std::size_t n_samples, std::uint64_t seed,
                                                  std::size_t workers) {
  if (n_samples < 1) {
    throw PreconditionError("monte_carlo_compare: n_samples must be >= 1");
  }
  for (double v : c_values) {
    if (!(v > 0.0)) throw PreconditionError("monte_carlo_compare: c values must be > 0");
  }
  for (double v : b_bar_values) {
    if (!(v > 0.0)) throw PreconditionError("monte_carlo_compare: b_bar values must be > 0");
  }
  const std::size_t nb = b_bar_values.size();
  std::vector<ComparisonRecord> out(c_values.size() * nb);
  parallel_for(out.size(), workers, [&](std::size_t i) {
    out[i] = compare_point(params, c_values[i / nb], b_bar_values[i % nb], n_samples, seed, i);
  });
  return out;
}

}  // namespace sgame
