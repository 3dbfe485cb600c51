#include "sgame/multi_user.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "sgame/numeric.hpp"

namespace sgame {

namespace {

constexpr double kUniformTol = 1e-12;
constexpr double kGridReplaceSlack = 1e-12;
constexpr std::size_t kBruteForceLimit = 8;

bool close_rel(double x, double y) {
  return std::abs(x - y) <= kUniformTol * std::max(1.0, std::abs(x));
}

double eavesdrop_dominated(const MultiGame& game, std::size_t index, double p0) {
  return pu_utility(game.pair_params(index), p0, 0.0);
}

}  // namespace

void MultiGame::validate() const {
  const auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(a) || !positive(gamma_bar) || !positive(p0_max) || !positive(epsilon)) {
    throw PreconditionError("MultiGame: a, gamma_bar, p0_max and epsilon must be finite and > 0");
  }
  if (epsilon >= p0_max) {
    throw PreconditionError("MultiGame: epsilon must be smaller than p0_max");
  }
  std::set<int> ids;
  for (const SuProfile& su : sus) {
    if (!positive(su.b) || !positive(su.c) || !positive(su.p_max) || !positive(su.beta)) {
      throw PreconditionError("MultiGame: SU " + std::to_string(su.id) +
                              " has a non-positive field");
    }
    if (!ids.insert(su.id).second) {
      throw PreconditionError("MultiGame: duplicate SU id " + std::to_string(su.id));
    }
  }
  const std::set<int> ordered(order.priority.begin(), order.priority.end());
  if (order.priority.size() != sus.size() || ordered != ids) {
    throw PreconditionError("MultiGame: order must be a permutation of the SU ids");
  }
}

double MultiGame::gamma() const {
  GameParams p;
  p.gamma_bar = gamma_bar;
  return p.gamma();
}

std::vector<std::size_t> MultiGame::ranked_indices() const {
  std::vector<std::size_t> out;
  out.reserve(order.priority.size());
  for (int id : order.priority) {
    const auto it = std::find_if(sus.begin(), sus.end(), [&](const SuProfile& s) { return s.id == id; });
    if (it == sus.end()) {
      throw PreconditionError("MultiGame: order references unknown SU id " + std::to_string(id));
    }
    out.push_back(static_cast<std::size_t>(it - sus.begin()));
  }
  return out;
}

GameParams MultiGame::pair_params(std::size_t index) const {
  const SuProfile& su = sus.at(index);
  GameParams p;
  p.a = a;
  p.b = su.b;
  p.c = su.c;
  p.gamma_bar = gamma_bar;
  p.beta = su.beta;
  p.p0_max = p0_max;
  p.p1_max = su.p_max;
  p.epsilon = epsilon;
  return p;
}

DecodingOrder listing_order(const MultiGame& game) {
  DecodingOrder order;
  for (const SuProfile& su : game.sus) {
    order.priority.push_back(su.id);
  }
  return order;
}

MultiPuUtility pu_utility_multi(const MultiGame& game, double p0, const std::vector<double>& alphas) {
  MultiPuUtility out;
  double worst = 0.0;
  for (std::size_t i = 0; i < game.sus.size(); ++i) {
    const double term = (1.0 - alphas.at(i)) * capacity(game.sus[i].b * p0);
    if (term > worst) {
      worst = term;
      out.dominating = static_cast<int>(i);
    }
  }
  out.value = capacity(game.a * p0) - worst - game.gamma() * p0;
  return out;
}

double pu_utility_open(const MultiGame& game, double p0) {
  return capacity(game.a * p0) - game.gamma() * p0;
}

namespace {

double interference_ahead(const MultiGame& game, std::size_t index,
                          const std::vector<double>& alphas) {
  double sum = 0.0;
  for (int id : game.order.priority) {
    const auto it =
        std::find_if(game.sus.begin(), game.sus.end(), [&](const SuProfile& s) { return s.id == id; });
    const auto j = static_cast<std::size_t>(it - game.sus.begin());
    if (j == index) {
      return sum;
    }
    sum += alphas.at(j) * game.sus[j].k();
  }
  throw PreconditionError("MultiGame: SU index missing from the decoding order");
}

}  // namespace

double su_utility_multi(const MultiGame& game, std::size_t index, double p0,
                        const std::vector<double>& alphas) {
  const SuProfile& su = game.sus.at(index);
  const double noise = 1.0 + game.a * p0 + interference_ahead(game, index, alphas);
  return alphas.at(index) * (capacity(su.k() / noise) - su.beta);
}

double threshold_qi(const MultiGame& game, std::size_t index, const std::vector<double>& alphas) {
  const SuProfile& su = game.sus.at(index);
  const double denom = std::exp2(2.0 * su.beta) - 1.0;
  return (su.k() / denom - 1.0 - interference_ahead(game, index, alphas)) / game.a;
}

std::vector<double> thresholds_all_transmit(const MultiGame& game) {
  const std::vector<double> ones(game.sus.size(), 1.0);
  std::vector<double> q(game.sus.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    q[i] = threshold_qi(game, i, ones);
  }
  return q;
}

std::vector<double> followers_cascade(const MultiGame& game, double p0,
                                      const std::vector<bool>* allowed) {
  std::vector<double> alphas(game.sus.size(), 0.0);
  double ahead = 0.0;  // same summation order as threshold_qi
  for (std::size_t i : game.ranked_indices()) {
    const SuProfile& su = game.sus[i];
    if (allowed == nullptr || allowed->at(i)) {
      const double q = (su.k() / (std::exp2(2.0 * su.beta) - 1.0) - 1.0 - ahead) / game.a;
      alphas[i] = p0 < q ? 1.0 : 0.0;
    }
    ahead += alphas[i] * su.k();
  }
  return alphas;
}

bool has_uniform_parameters(const MultiGame& game) {
  for (const SuProfile& su : game.sus) {
    if (!close_rel(game.sus.front().k(), su.k()) || !close_rel(game.sus.front().beta, su.beta)) {
      return false;
    }
  }
  return true;
}

DecodingOrder optimal_order_uniform(const MultiGame& game) {
  game.validate();
  if (!has_uniform_parameters(game)) {
    throw PreconditionError(
        "optimal_order_uniform: c*p_max and beta differ across SUs; use brute_force_order");
  }
  std::vector<std::size_t> ranked = game.ranked_indices();
  std::stable_sort(ranked.begin(), ranked.end(),
                   [&](std::size_t x, std::size_t y) { return game.sus[x].b > game.sus[y].b; });
  DecodingOrder order;
  for (std::size_t i : ranked) {
    order.priority.push_back(game.sus[i].id);
  }
  return order;
}

MultiOutcome evaluate_leader_power(const MultiGame& game, double p0,
                                   const std::vector<bool>* allowed) {
  MultiOutcome out;
  out.p0_sep = p0;
  out.alphas = followers_cascade(game, p0, allowed);
  const MultiPuUtility pu = pu_utility_multi(game, p0, out.alphas);
  out.u0_sep = pu.value;
  out.dominating = pu.dominating;
  for (std::size_t i = 0; i < game.sus.size(); ++i) {
    out.su_utilities.push_back(su_utility_multi(game, i, p0, out.alphas));
  }
  for (std::size_t i : game.ranked_indices()) {
    if (out.alphas[i] == 1.0) {
      out.allowed_sus.push_back(game.sus[i].id);
    }
  }
  return out;
}

MultiOutcome grant_algorithm(const MultiGame& game) {
  game.validate();
  GameParams open_params;
  open_params.a = game.a;
  open_params.gamma_bar = game.gamma_bar;
  open_params.p0_max = game.p0_max;
  const double full_best = p_star_full_alpha(open_params);
  if (game.sus.empty()) {
    return evaluate_leader_power(game, full_best);
  }

  const std::vector<std::size_t> ranked = game.ranked_indices();
  for (std::size_t r = 1; r < ranked.size(); ++r) {
    if (game.sus[ranked[r]].b > game.sus[ranked[r - 1]].b) {
      throw PreconditionError("grant_algorithm: decoding order must list SUs by non-increasing b");
    }
  }
  const std::vector<double> q = thresholds_all_transmit(game);

  const auto first_low = std::find_if(ranked.begin(), ranked.end(),
                                      [&](std::size_t i) { return !(q[i] > full_best); });
  if (first_low == ranked.end()) {
    return evaluate_leader_power(game, full_best);
  }

  // u0 when SUs up to rank r transmit and the next-ranked SU dominates.
  const auto value_after = [&](std::size_t r, double p0) {
    return r + 1 < ranked.size() ? eavesdrop_dominated(game, ranked[r + 1], p0)
                                 : pu_utility_open(game, p0);
  };

  double p_sep = 0.0;
  double u_sep = 0.0;
  for (auto r = static_cast<std::size_t>(first_low - ranked.begin()); r < ranked.size(); ++r) {
    const std::size_t i = ranked[r];
    const double qi = q[i];
    const double silent = p_star(game.pair_params(i), 0.0);
    const bool has_backoff = qi > 0.0;
    const double next_b = r + 1 < ranked.size() ? game.sus[ranked[r + 1]].b : 0.0;
    const double step = backoff_distance(game.a, next_b, game.gamma_bar, qi, game.epsilon);
    const double backoff = std::min(std::max(qi - step, 0.0), game.p0_max);

    if (qi >= silent && has_backoff) {
      p_sep = backoff;
      u_sep = value_after(r, backoff);
      continue;
    }
    const double q_prev = r == 0 ? std::numeric_limits<double>::infinity() : q[ranked[r - 1]];
    const double u_silent = eavesdrop_dominated(game, i, silent);
    if (u_silent >= u_sep && silent <= q_prev) {
      p_sep = silent;
      u_sep = u_silent;
    }
    if (has_backoff && value_after(r, backoff) >= u_sep) {
      p_sep = backoff;
      u_sep = value_after(r, backoff);
    }
  }

  MultiOutcome out = evaluate_leader_power(game, p_sep);
  if (!has_uniform_parameters(game)) {
    out.warning = "non-uniform SU parameters; descending-b order is heuristic";
  }
  return out;
}

MultiOutcome leader_best_power(const MultiGame& game, std::size_t grid_n,
                               const std::vector<bool>* allowed) {
  game.validate();
  grid_n = std::max<std::size_t>(grid_n, 2);
  const std::vector<std::size_t> ranked = game.ranked_indices();
  GameParams open_params;
  open_params.a = game.a;
  open_params.gamma_bar = game.gamma_bar;
  open_params.p0_max = game.p0_max;

  const auto value = [&](double p0) {
    return pu_utility_multi(game, p0, followers_cascade(game, p0, allowed)).value;
  };

  double best_p = 0.0;
  double best_u = value(0.0);
  const auto offer = [&](double p0, double slack) {
    const double u = value(p0);
    if (u > best_u + slack) {
      best_p = p0;
      best_u = u;
    }
  };

  double lo = 0.0;
  for (;;) {
    const std::vector<double> alphas = followers_cascade(game, lo, allowed);
    double hi = game.p0_max;
    bool last = true;
    for (std::size_t i : ranked) {
      if (allowed != nullptr && !allowed->at(i)) {
        continue;
      }
      const double qi = threshold_qi(game, i, alphas);
      if (qi > lo && qi < hi) {
        hi = qi;
        last = false;
      }
    }
    // The SU with the largest b among eavesdroppers sets u0 on this piece.
    int strongest = -1;
    for (std::size_t i = 0; i < game.sus.size(); ++i) {
      if (alphas[i] == 0.0 && (strongest < 0 || game.sus[i].b > game.sus[strongest].b)) {
        strongest = static_cast<int>(i);
      }
    }
    const double piece_b = strongest < 0 ? 0.0 : game.sus[static_cast<std::size_t>(strongest)].b;
    const double top =
        last ? hi : hi - backoff_distance(game.a, piece_b, game.gamma_bar, hi, game.epsilon);
    std::optional<double> stationary =
        strongest < 0 ? std::optional<double>(p_star_full_alpha(open_params))
                      : p_prime(game.pair_params(static_cast<std::size_t>(strongest)), 0.0);

    std::vector<double> candidates{lo};
    if (top >= lo) {
      candidates.push_back(top);
    }
    if (stationary && *stationary >= lo && (last ? *stationary <= hi : *stationary < hi)) {
      candidates.push_back(*stationary);
    }
    std::sort(candidates.begin(), candidates.end());
    for (double p0 : candidates) {
      offer(p0, 0.0);
    }
    for (std::size_t m = 0; m < grid_n; ++m) {
      const double p0 = game.p0_max * static_cast<double>(m) / static_cast<double>(grid_n - 1);
      if (p0 >= lo && p0 <= top) {
        offer(p0, kGridReplaceSlack);
      }
    }
    if (last) {
      break;
    }
    lo = hi;
  }
  return evaluate_leader_power(game, best_p, allowed);
}

BruteForceResult brute_force_order(const MultiGame& game, std::size_t grid_n) {
  game.validate();
  if (game.sus.size() > kBruteForceLimit) {
    throw PreconditionError("brute_force_order: N = " + std::to_string(game.sus.size()) +
                            " exceeds the limit of 8 SUs");
  }
  std::vector<int> ids = listing_order(game).priority;
  std::sort(ids.begin(), ids.end());

  BruteForceResult result;
  bool have_best = false;
  do {
    MultiGame trial = game;
    trial.order.priority = ids;
    OrderResult r{trial.order, leader_best_power(trial, grid_n)};
    if (!have_best || r.outcome.u0_sep > result.best.outcome.u0_sep) {
      result.best = r;
      have_best = true;
    }
    result.all.push_back(std::move(r));
  } while (std::next_permutation(ids.begin(), ids.end()));
  return result;
}

namespace {

struct BestResponder {
  const MultiGame& game;
  std::optional<std::size_t> fixed;  ///< SU whose split is held fixed
  double fixed_alpha = 0.0;

  double pu(const std::vector<double>& alphas) const {
    // With binary splits the largest-b eavesdropper dominates at every power.
    if (std::all_of(alphas.begin(), alphas.end(), [](double x) { return x == 0.0 || x == 1.0; })) {
      int strongest = -1;
      for (std::size_t i = 0; i < game.sus.size(); ++i) {
        if (alphas[i] == 0.0 && (strongest < 0 || game.sus[i].b > game.sus[strongest].b)) {
          strongest = static_cast<int>(i);
        }
      }
      if (strongest < 0) {
        GameParams open_params;
        open_params.a = game.a;
        open_params.gamma_bar = game.gamma_bar;
        open_params.p0_max = game.p0_max;
        return p_star_full_alpha(open_params);
      }
      return p_star(game.pair_params(static_cast<std::size_t>(strongest)), 0.0);
    }
    const auto objective = [&](double p0) { return pu_utility_multi(game, p0, alphas).value; };
    return maximize_on_interval(objective, 0.0, game.p0_max, 1000, 1e-10).x;
  }

  MultiProfile step(const MultiProfile& s) const {
    MultiProfile next;
    next.p0 = pu(s.alphas);
    next.alphas = s.alphas;
    for (std::size_t i = 0; i < game.sus.size(); ++i) {
      if (fixed && *fixed == i) {
        next.alphas[i] = fixed_alpha;
        continue;
      }
      std::vector<double> trial = s.alphas;
      trial[i] = 1.0;
      next.alphas[i] = su_utility_multi(game, i, s.p0, trial) > 0.0 ? 1.0 : 0.0;
    }
    return next;
  }

  std::optional<MultiProfile> iterate(std::vector<double> start, std::size_t max_rounds) const {
    if (fixed) {
      start[*fixed] = fixed_alpha;
    }
    MultiProfile s;
    s.alphas = std::move(start);
    s.p0 = pu(s.alphas);
    int unchanged = 0;
    for (std::size_t round = 0; round < max_rounds; ++round) {
      MultiProfile next = step(s);
      unchanged = next.p0 == s.p0 && next.alphas == s.alphas ? unchanged + 1 : 0;
      s = std::move(next);
      if (unchanged >= 2) {
        s.u0 = pu_utility_multi(game, s.p0, s.alphas).value;
        for (std::size_t i = 0; i < game.sus.size(); ++i) {
          s.su_utilities.push_back(su_utility_multi(game, i, s.p0, s.alphas));
        }
        return s;
      }
    }
    return std::nullopt;
  }
};

}  // namespace

std::vector<MultiProfile> simultaneous_equilibria(const MultiGame& game, std::size_t max_rounds) {
  game.validate();
  const BestResponder responder{game, std::nullopt, 0.0};
  std::vector<MultiProfile> out;
  for (double start : {1.0, 0.0}) {
    auto eq = responder.iterate(std::vector<double>(game.sus.size(), start), max_rounds);
    if (eq && std::none_of(out.begin(), out.end(), [&](const MultiProfile& m) {
          return m.p0 == eq->p0 && m.alphas == eq->alphas;
        })) {
      out.push_back(std::move(*eq));
    }
  }
  return out;
}

std::optional<MultiProfile> su_led_equilibrium(const MultiGame& game, std::size_t leader,
                                               std::size_t alpha_grid) {
  game.validate();
  if (leader >= game.sus.size()) {
    throw PreconditionError("su_led_equilibrium: leader index out of range");
  }
  alpha_grid = std::max<std::size_t>(alpha_grid, 2);
  std::optional<MultiProfile> best;
  for (std::size_t m = 0; m < alpha_grid; ++m) {
    const double alpha = static_cast<double>(m) / static_cast<double>(alpha_grid - 1);
    const BestResponder responder{game, leader, alpha};
    for (double start : {1.0, 0.0}) {
      auto eq = responder.iterate(std::vector<double>(game.sus.size(), start), 200);
      if (!eq) {
        continue;
      }
      if (!best || eq->su_utilities[leader] > best->su_utilities[leader]) {
        best = std::move(eq);
      }
      break;
    }
  }
  return best;
}

}  // namespace sgame
