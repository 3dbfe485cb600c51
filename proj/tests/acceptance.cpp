// Acceptance run: one PASS/FAIL line per criterion, with measured runtimes.
// Exits non-zero when any criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sgame/bayesian.hpp"
#include "sgame/multi_user.hpp"
#include "sgame/nash.hpp"
#include "sgame/parallel.hpp"
#include "sgame/special_functions.hpp"
#include "sgame/stackelberg.hpp"

using namespace sgame;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(const char* format, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, x);
  return buf;
}

bool near(double x, double target, double tol) { return std::abs(x - target) <= tol; }

GameParams worked_example(double c) {
  GameParams p;
  p.a = 2.5;
  p.b = 1.0;
  p.c = c;
  p.gamma_bar = 1.0;
  p.beta = 1.0;
  p.p0_max = 1.0;
  p.p1_max = 1.0;
  return p;
}

Verdict criterion_1() {
  Verdict v;
  const GameParams low = worked_example(3.5);
  const NashOutcome ne_low = solve_nash(low);
  const Strategy s_low = ne_low.strategy.representative();
  v.require(ne_low.case_tag == NashCase::t1_low_q, "c=3.5 case is (P'(0), 0)");
  v.require(near(s_low.p0, *p_prime(low, 0.0), 1e-12) && s_low.alpha == 0.0, "c=3.5 NE point");
  v.require(near(ne_low.utilities.u0, 0.0211, 1e-3), "u0 NE = 0.0211");
  const double uq1_low = pu_utility(low, threshold_q(low), 1.0);
  v.require(near(uq1_low, 0.0631, 1e-3), "u0(Q,1) = 0.0631");

  const GameParams mid = worked_example(5.0);
  const NashOutcome ne_mid = solve_nash(mid);
  const double aq = alpha_q(mid).value_or(-1.0);
  v.require(near(aq, 0.3667, 1e-3), "alpha_Q = 0.3667");
  v.require(near(ne_mid.utilities.u0, 0.0681, 1e-3), "u0(Q,alpha_Q) = 0.0681");
  const double uq1_mid = pu_utility(mid, threshold_q(mid), 1.0);
  v.require(near(uq1_mid, 0.1761, 1e-3), "u0(Q,1) = 0.1761");
  v.note("u0_NE=" + fmt("%.4f", ne_low.utilities.u0) + " u0(Q,1)=" + fmt("%.4f", uq1_low) +
         " alpha_Q=" + fmt("%.4f", aq) + " u0(Q,aQ)=" + fmt("%.4f", ne_mid.utilities.u0) +
         " u0(Q,1)=" + fmt("%.4f", uq1_mid));
  return v;
}

Verdict criterion_2() {
  Verdict v;
  const MultiGame g1 = oracle::uniform_twenty(0.1);
  const std::vector<double> q1 = thresholds_all_transmit(g1);
  GameParams open;
  open.a = g1.a;
  open.gamma_bar = g1.gamma_bar;
  open.p0_max = g1.p0_max;
  const double p_full = p_star_full_alpha(open);
  int above = 0, positive = 0;
  bool above_is_prefix = true, positive_is_prefix = true;
  for (int r = 0; r < 20; ++r) {
    above += q1[r] > p_full;
    positive += q1[r] > 0.0;
    if (q1[r] > p_full && r >= 3) above_is_prefix = false;
    if (q1[r] > 0.0 && r >= 7) positive_is_prefix = false;
  }
  v.require(near(p_full, 4.5, 1e-12), "P*(1) = 4.5");
  v.require(near(q1[0], 7.07, 0.01), "beta=0.1: Q_1 = 7.07");
  v.require(near(q1[19], -14.3, 0.05), "beta=0.1: Q_20 = -14.3");
  v.require(above == 3 && above_is_prefix, "beta=0.1: exactly ranks 1-3 exceed P*(1)");
  v.require(positive == 7 && positive_is_prefix, "beta=0.1: exactly ranks 1-7 positive");
  const double open_u0 = pu_utility_open(g1, p_full);
  v.require(near(open_u0, 1.01, 0.01), "u0^0(P*(1)) = 1.01");

  const std::vector<double> q2 = thresholds_all_transmit(oracle::uniform_twenty(0.2));
  int positive2 = 0;
  for (double x : q2) positive2 += x > 0.0;
  v.require(near(q2[0], 4.3, 0.05) && near(q2[19], -16.6, 0.05),
            "beta=0.2: span [4.3, -16.6] (got [" + fmt("%.4f", q2[0]) + ", " + fmt("%.4f", q2[19]) +
                "]; any uniform instance has Q_1 - Q_20 = 19 k1 / a = " + fmt("%.4f", 19 * 2.25 / 2.0) +
                " vs 20.9 required)");
  v.require(positive2 == 3, "beta=0.2: exactly 3 positive");
  v.note("beta=0.1: Q1=" + fmt("%.4f", q1[0]) + " Q3=" + fmt("%.4f", q1[2]) + " Q20=" + fmt("%.4f", q1[19]) +
         " above=" + std::to_string(above) + " positive=" + std::to_string(positive) +
         "; beta=0.2 positive=" + std::to_string(positive2) + "; u0^0=" + fmt("%.4f", open_u0));
  return v;
}

struct DrawResults {
  int verify_fail = 0;
  int sep_fail = 0;
  int ses_fail = 0;
  int errors = 0;
};

DrawResults run_draws(bool dominance) {
  std::vector<DrawResults> per(400);
  parallel_for(per.size(), default_workers(), [&](std::size_t i) {
    const int regime = static_cast<int>(i / 200);
    const GameParams p = oracle::draw_pair(regime, i % 200);
    DrawResults& r = per[i];
    try {
      const NashOutcome ne = solve_nash(p);
      if (!dominance) {
        r.verify_fail += verify_equilibrium(p, ne, 100000).pass ? 0 : 1;
        return;
      }
      r.sep_fail += dominance_check(p, sep_strategy(p), ne).dominates ? 0 : 1;
      const StackelbergOutcome ses = ses_strategy(p);
      const double u0 = oracle::u0(p, ses.profile().p0, ses.profile().alpha);
      r.ses_fail += u0 <= ne.utilities.u0 + 1e-9 ? 0 : 1;
    } catch (const std::exception&) {
      r.errors += 1;
    }
  });
  DrawResults total;
  for (const auto& r : per) {
    total.verify_fail += r.verify_fail;
    total.sep_fail += r.sep_fail;
    total.ses_fail += r.ses_fail;
    total.errors += r.errors;
  }
  return total;
}

Verdict criterion_3() {
  Verdict v;
  const DrawResults r = run_draws(false);
  v.require(r.verify_fail == 0, std::to_string(r.verify_fail) + " NE verification failures");
  v.require(r.errors == 0, std::to_string(r.errors) + " solver errors");
  v.note("400 draws (200 per regime), grid 1e5: " + std::to_string(400 - r.verify_fail) + " verified");
  return v;
}

Verdict criterion_4() {
  Verdict v;
  const DrawResults r = run_draws(true);
  v.require(r.sep_fail == 0, std::to_string(r.sep_fail) + " SEP dominance failures");
  v.require(r.ses_fail == 0, std::to_string(r.ses_fail) + " SES above NE");
  v.require(r.errors == 0, std::to_string(r.errors) + " solver errors");
  v.note("400 draws: SEP dominates NE in " + std::to_string(400 - r.sep_fail) + ", SES <= NE in " +
         std::to_string(400 - r.ses_fail));
  return v;
}

Verdict criterion_5() {
  Verdict v;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double x = std::pow(10.0, -4.0 + (std::log10(50.0) + 4.0) * i / 999.0);
    worst = std::max(worst, std::abs(exp_integral_e1(x) - oracle::e1_quadrature(x)));
  }
  v.require(worst <= 1e-10, "max |E1 - quadrature| <= 1e-10");
  v.note("1000 log-spaced points on [1e-4, 50], max abs error " + fmt("%.2e", worst));
  return v;
}

Verdict criterion_6() {
  Verdict v;
  GameParams p;
  p.a = 3.0;
  p.gamma_bar = 1.0;
  p.p0_max = 5.0;
  const CounterRng r(606);
  std::vector<double> z(20);
  parallel_for(20, default_workers(), [&](std::size_t i) {
    const double p0 = 0.01 + 4.99 * r.uniform(3 * i);
    const double alpha = r.uniform(3 * i + 1);
    const double b_bar = 0.1 + 3.9 * r.uniform(3 * i + 2);
    const auto mc = oracle::mc_expected_pu(p, b_bar, p0, alpha, 1000000, 1000 + i);
    z[i] = std::abs(expected_pu_utility(p, BeliefModel{b_bar}, p0, alpha) - mc.mean) / mc.se;
  });
  double worst_z = 0.0;
  int outside = 0;
  for (double x : z) {
    worst_z = std::max(worst_z, x);
    outside += x > 3.0;
  }
  v.require(outside == 0, std::to_string(outside) + " of 20 points outside 3 standard errors");
  double worst_full = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double p0 = 5.0 * r.uniform(100 + i);
    const double b_bar = 0.1 + 3.9 * r.uniform(400 + i);
    worst_full = std::max(worst_full, std::abs(expected_pu_utility(p, BeliefModel{b_bar}, p0, 1.0) -
                                               pu_utility(p, p0, 1.0)));
  }
  v.require(worst_full <= 1e-12, "alpha=1 equals deterministic utility to 1e-12");
  v.note("max |z| = " + fmt("%.2f", worst_z) + " over 20 points x 1e6 samples; alpha=1 max diff " +
         fmt("%.1e", worst_full));
  return v;
}

Verdict criterion_7() {
  Verdict v;
  GameParams base;
  base.a = 3.0;
  base.p0_max = 5.0;
  base.p1_max = 5.0;
  base.beta = 1.0;
  base.gamma_bar = 1.0;
  base.epsilon = 1e-2;
  std::vector<double> bb;
  for (int i = 0; i < 20; ++i) bb.push_back(0.1 + 0.2 * i);
  const std::vector<double> cs{0.7, 1.3};
  const auto recs = monte_carlo_compare(base, cs, bb, 10000, 2024, default_workers());

  int u0_violations = 0;
  for (const auto& rec : recs) u0_violations += rec.avg_u0_revealed < rec.avg_u0_hidden;
  v.require(u0_violations == 0, "revealed-b avg u0 >= hidden-b avg u0 at every point (" +
                                    std::to_string(u0_violations) + " violations)");

  // Largest b_bar for both c; crossover searched in the small-c setting.
  for (std::size_t ci = 0; ci < cs.size(); ++ci) {
    const auto& last = recs[ci * bb.size() + bb.size() - 1];
    v.require(last.avg_u1_hidden >= last.avg_u1_revealed,
              "hidden-b avg u1 >= revealed at b_bar=" + fmt("%.1f", last.b_bar) + ", c=" + fmt("%.1f", cs[ci]));
  }
  double crossover = -1.0;
  for (std::size_t j = 0; j < bb.size(); ++j) {
    const auto& rec = recs[j];
    if (rec.avg_u1_revealed > rec.avg_u1_hidden) {
      crossover = rec.b_bar;
      break;
    }
  }
  v.require(crossover > 0.0, "revealed-b avg u1 > hidden at some small b_bar (c=0.7)");

  GameParams f2;
  f2.a = 3.0;
  f2.b = 0.7;
  f2.beta = 1.0;
  f2.gamma_bar = 1.0;
  f2.p0_max = 10.0;
  f2.p1_max = 10.0;
  const BeliefModel belief{0.7};
  double min_gap = 1e300;
  for (int i = 0; i < 100; ++i) {
    const double alpha = i / 100.0;
    min_gap = std::min(min_gap, p_b(f2, belief, alpha) - p_star(f2, alpha));
  }
  const double meet = std::abs(p_b(f2, belief, 1.0) - p_star(f2, 1.0));
  v.require(min_gap >= 0.0, "P_b(alpha) >= P*(alpha) for alpha < 1");
  v.require(meet <= 1e-6, "P_b(1) = P*(1) within 1e-6");
  v.note("10000 samples, seed 2024; u1 crossover at b_bar=" + fmt("%.1f", crossover) +
         "; min P_b - P* over alpha<1 = " + fmt("%.4f", min_gap) + "; |P_b(1) - P*(1)| = " + fmt("%.1e", meet));
  return v;
}

Verdict criterion_8() {
  Verdict v;
  for (double gamma_bar : {0.5, 0.5 * std::log(4.0)}) {
    MultiGame g;
    g.a = 3.0;
    g.gamma_bar = gamma_bar;
    g.p0_max = 10.0;
    g.sus = {{1, 0.7, 0.6, 1.5, 0.1}, {2, 0.4, 0.35, 1.5, 0.25}};
    g.order = listing_order(g);
    const BruteForceResult r = brute_force_order(g, 2000);
    double su1_first = 0.0, su2_first = 0.0;
    for (const auto& o : r.all) {
      (o.order.priority.front() == 1 ? su1_first : su2_first) = o.outcome.u0_sep;
    }
    MultiGame swapped = g;
    swapped.order.priority = {2, 1};
    const double oracle_1 = oracle::multi_leader_value(g);
    const double oracle_2 = oracle::multi_leader_value(swapped);
    const std::string tag = "gamma_bar=" + fmt("%.4f", gamma_bar);
    v.require(su2_first > su1_first, tag + ": SU 2 priority strictly larger u0 (" + fmt("%.6f", su2_first) +
                                         " vs " + fmt("%.6f", su1_first) + ", grid oracle " +
                                         fmt("%.6f", oracle_2) + " vs " + fmt("%.6f", oracle_1) + ")");
  }

  int mismatches = 0;
  std::vector<int> bad(50, 0);
  parallel_for(50, default_workers(), [&](std::size_t k) {
    MultiGame d = oracle::draw_uniform_multi(1000 + k);
    const BruteForceResult best = brute_force_order(d, 1000);
    d.order = optimal_order_uniform(d);
    bad[k] = leader_best_power(d, 1000).u0_sep < best.best.outcome.u0_sep - 1e-9;
  });
  for (int b : bad) mismatches += b;
  v.require(mismatches == 0, std::to_string(mismatches) + " of 50 uniform instances where descending b is beaten");
  v.note("uniform populations: descending-b order optimal on " + std::to_string(50 - mismatches) +
         " of 50 instances (N <= 6)");
  return v;
}

Verdict criterion_9() {
  Verdict v;
  double worst = 0.0;
  int discrete = 0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const GameParams p = oracle::draw_pair(static_cast<int>(k % 2), 500 + k);
    const MultiGame g = oracle::single_su(p);
    const CounterRng r(909, k);
    const double p0 = p.p0_max * r.uniform(0);
    const double alpha = r.uniform(1);
    const auto diff = [&](double x, double y) { worst = std::max(worst, std::abs(x - y)); };
    diff(pu_utility_multi(g, p0, {alpha}).value, pu_utility(p, p0, alpha));
    diff(su_utility_multi(g, 0, p0, {alpha}), su_utility(p, p0, alpha));
    diff(threshold_qi(g, 0, {alpha}), threshold_q(p));
    discrete += followers_cascade(g, p0).front() != follower_alpha(p, p0);
    const StackelbergOutcome sep = sep_strategy(p);
    const MultiOutcome gr = grant_algorithm(g);
    diff(gr.p0_sep, sep.leader_strategy);
    diff(gr.u0_sep, sep.utilities.u0);
    diff(gr.su_utilities.front(), sep.utilities.u1);
    discrete += gr.alphas.front() != sep.follower_strategy;
    const MultiOutcome lb = leader_best_power(g);
    diff(lb.u0_sep, sep.utilities.u0);
    diff(brute_force_order(g).best.outcome.u0_sep, gr.u0_sep);
  }
  v.require(worst <= 1e-12, "max deviation " + fmt("%.2e", worst) + " <= 1e-12");
  v.require(discrete == 0, std::to_string(discrete) + " follower decision mismatches");
  v.note("100 instances; max deviation " + fmt("%.2e", worst));
  return v;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Verdict criterion_10(const std::string& cli) {
  Verdict v;
  const fs::path dir = fs::temp_directory_path() / ("sgame_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string pair =
      R"("params":{"a":2.5,"b":1,"c":5,"gamma_bar":1,"beta":1,"p0_max":1,"p1_max":1})";
  const std::vector<std::pair<std::string, std::string>> configs{
      {"nash", "{\"mode\":\"nash\"," + pair + ",\"sweep\":{\"var\":\"c\",\"start\":1,\"stop\":20,\"steps\":9}}"},
      {"sep", "{\"mode\":\"sep\"," + pair + "}"},
      {"ses", "{\"mode\":\"ses\"," + pair + "}"},
      {"bayes",
       R"({"mode":"bayes","params":{"a":3,"gamma_bar":1,"beta":1,"p0_max":5,"p1_max":5,"epsilon":0.01},)"
       R"("bayes":{"c_values":[0.7,1.3],"b_bar_values":[0.5,1.5,2.5]},"mc":{"n_samples":2000,"seed":7}})"},
      {"multi",
       R"({"mode":"multi","params":{"a":3,"gamma_bar":0.5,"p0_max":10},"multi":{"solver":"brute_force",)"
       R"("sus":[{"id":1,"b":0.7,"c":0.6,"p_max":1.5,"beta":0.1},{"id":2,"b":0.4,"c":0.35,"p_max":1.5,"beta":0.25}]}})"},
      {"reproduce", R"({"mode":"reproduce","target":"fig-uniform","mc":{"n_samples":200,"seed":3}})"},
  };
  for (const auto& [mode, text] : configs) {
    const fs::path cfg = dir / (mode + ".json");
    std::ofstream(cfg) << text;
    for (const char* format : {"csv", "json"}) {
      std::string bytes[2];
      bool ok = true;
      for (int run = 0; run < 2; ++run) {
        const fs::path out = dir / (mode + std::to_string(run) + "." + format);
        const std::string cmd = cli + " solve " + mode + " --config " + cfg.string() + " --verify --out " +
                                out.string() + " --format " + format + " --workers " +
                                std::to_string(run == 0 ? 1 : 4) + " 2>/dev/null";
        const int status = std::system(cmd.c_str());
        ok = ok && WIFEXITED(status) && WEXITSTATUS(status) == 0;
        bytes[run] = slurp(out);
      }
      v.require(ok, mode + "/" + format + " exited cleanly");
      v.require(!bytes[0].empty() && bytes[0] == bytes[1], mode + "/" + format + " byte-identical");
    }
  }
  fs::remove_all(dir);
  v.note("6 modes x 2 formats, two runs each (1 vs 4 workers), byte-identical");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : SGAME_CLI;
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "worked two-player example", 1.0, criterion_1},
      {2, "twenty-SU thresholds", 1.0, criterion_2},
      {3, "NE oracle equivalence", 120.0, criterion_3},
      {4, "SEP dominance / SES bound", 120.0, criterion_4},
      {5, "E1 vs quadrature", 0.0, criterion_5},
      {6, "Bayesian expected utility vs Monte Carlo", 0.0, criterion_6},
      {7, "hidden-b figure properties", 300.0, criterion_7},
      {8, "decoding order", 180.0, criterion_8},
      {9, "single-SU reductions", 0.0, criterion_9},
      {10, "CLI determinism", 0.0, [&] { return criterion_10(cli); }},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0.0) v.require(secs < c.budget_s, "runtime within " + fmt("%.0f s", c.budget_s));
    failures += v.pass ? 0 : 1;
    std::printf("criterion %2d %s: %s (%.2f s) %s\n", c.id, v.pass ? "PASS" : "FAIL", c.name, secs,
                v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
