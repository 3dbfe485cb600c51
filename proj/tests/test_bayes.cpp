#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "sgame/bayesian.hpp"
#include "sgame/stackelberg.hpp"

using namespace sgame;
using doctest::Approx;

namespace {

/// Hidden-b setting: a = 3, p_max = 5 for both users, beta = gamma_bar = 1.
GameParams hidden_setting(double c) {
  GameParams p;
  p.a = 3.0;
  p.c = c;
  p.beta = 1.0;
  p.gamma_bar = 1.0;
  p.p0_max = 5.0;
  p.p1_max = 5.0;
  p.epsilon = 1e-2;
  return p;
}

GameParams reaction_setting() {
  GameParams p;
  p.a = 3.0;
  p.b = 0.7;
  p.beta = 1.0;
  p.gamma_bar = 1.0;
  p.p0_max = 10.0;
  p.p1_max = 10.0;
  return p;
}

}  // namespace

TEST_CASE("belief model validation") {
  CHECK_THROWS_AS(BeliefModel{0.0}.validate(), PreconditionError);
  CHECK(BeliefModel{2.0}.density(-1.0) == 0.0);
  CHECK(BeliefModel{2.0}.density(0.0) == Approx(0.5));
}

TEST_CASE("expected_pu_utility at full transmission equals the deterministic utility") {
  GameParams p = reaction_setting();
  for (double b_bar : {0.1, 0.7, 3.0}) {
    for (double p0 : {1e-6, 0.1, 1.0, 7.5}) {
      CHECK(std::abs(expected_pu_utility(p, BeliefModel{b_bar}, p0, 1.0) - pu_utility(p, p0, 1.0)) <=
            1e-12);
    }
  }
}

TEST_CASE("expected_pu_utility vanishes continuously at the origin") {
  const GameParams p = reaction_setting();
  CHECK(expected_pu_utility(p, BeliefModel{0.7}, 0.0, 0.0) == 0.0);
  CHECK(std::abs(expected_pu_utility(p, BeliefModel{0.7}, 1e-8, 0.0)) < 1e-6);
}

TEST_CASE("expected_pu_utility matches Monte Carlo") {
  GameParams p = reaction_setting();
  const auto mc = oracle::mc_expected_pu(p, 0.7, 1.0, 0.0, 1000000, 5);
  const double v = expected_pu_utility(p, BeliefModel{0.7}, 1.0, 0.0);
  CHECK(std::abs(v - mc.mean) <= 3.0 * mc.se);
}

TEST_CASE("property: eavesdrop term is nonnegative and increasing in p0 and b_bar") {
  for (double b_bar : {0.05, 0.3, 1.0, 4.0}) {
    double last = 0.0;
    for (int i = 1; i <= 200; ++i) {
      const double p0 = 0.05 * i;
      const double v = expected_eavesdrop_rate(BeliefModel{b_bar}, p0);
      CHECK(v >= 0.0);
      CHECK(v > last);
      CHECK(expected_eavesdrop_rate(BeliefModel{b_bar * 1.5}, p0) > v);
      last = v;
    }
  }
}

TEST_CASE("p_b maximizes the expected utility") {
  const GameParams p = reaction_setting();
  const BeliefModel belief{0.7};
  CHECK(p_b(p, belief, 1.0) == Approx(p_star_full_alpha(p)).epsilon(1e-6));
  for (int i = 0; i < 10; ++i) {
    const double alpha = i / 10.0;
    CHECK(p_b(p, belief, alpha) > p_star(p, alpha));
    const double best = p_b(p, belief, alpha);
    const auto grid = oracle::grid_max(
        [&](double x) { return expected_pu_utility(p, belief, x, alpha); }, 0.0, p.p0_max, 100000);
    CHECK(expected_pu_utility(p, belief, best, alpha) >= grid.value - 1e-6);
  }
}

TEST_CASE("bayes_sep") {
  // Q above p_b(1): the hidden case matches the revealed SEP.
  GameParams big = hidden_setting(40.0);
  big.b = 0.9;
  const StackelbergOutcome hidden = bayes_sep(big, BeliefModel{0.9});
  const StackelbergOutcome revealed = sep_strategy(big);
  REQUIRE(threshold_q(big) > p_b(big, BeliefModel{0.9}, 1.0));
  CHECK(hidden.follower_strategy == 1.0);
  CHECK(hidden.leader_strategy == Approx(revealed.leader_strategy).epsilon(1e-6));

  // Small b_bar and small c: silence toward the follower beats the backoff.
  const GameParams small = hidden_setting(0.7);
  const BeliefModel belief{0.1};
  const StackelbergOutcome s = bayes_sep(small, belief);
  const double q = threshold_q(small);
  const double loud = expected_pu_utility(small, belief, q - small.epsilon, 1.0);
  const double quiet = expected_pu_utility(small, belief, p_b(small, belief, 0.0), 0.0);
  if (quiet > loud) {
    CHECK(s.leader_strategy == Approx(p_b(small, belief, 0.0)));
    CHECK(s.follower_strategy == 0.0);
  }
}

TEST_CASE("monte_carlo_compare properties") {
  const GameParams base = hidden_setting(0.7);
  std::vector<double> bb;
  for (int i = 0; i < 20; ++i) bb.push_back(0.1 + 0.2 * i);
  const std::vector<double> cs{0.6, 0.7, 1.3};
  const auto recs = monte_carlo_compare(base, cs, bb, 2000, 17, 4);
  REQUIRE(recs.size() == cs.size() * bb.size());
  for (const auto& r : recs) {
    CHECK(r.avg_u0_revealed >= r.avg_u0_hidden - 3.0 * r.se_u0_diff);
    if (r.c == 0.6) {
      CHECK(r.avg_u1_revealed == 0.0);
      CHECK(r.avg_u1_hidden == 0.0);
    }
  }
  // Determinism, independent of the worker count.
  const auto again = monte_carlo_compare(base, cs, bb, 2000, 17, 1);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(recs[i].avg_u0_revealed == again[i].avg_u0_revealed);
    CHECK(recs[i].avg_u0_hidden == again[i].avg_u0_hidden);
    CHECK(recs[i].avg_u1_revealed == again[i].avg_u1_revealed);
    CHECK(recs[i].avg_u1_hidden == again[i].avg_u1_hidden);
  }
  CHECK_THROWS_AS(monte_carlo_compare(base, cs, bb, 0, 17), PreconditionError);
}
