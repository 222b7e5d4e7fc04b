// Acceptance suite: ten numbered criteria, one PASS/FAIL line each.
//
// Criteria R1-R4 compare against the two-bus reference values transcribed
// from the historical evaluation of this market design. Cross-checking the
// model with an independent external LP solver (and by hand against the KKT
// conditions) shows that several of those recorded values are mutually
// inconsistent -- no parameterization of the model reproduces them in one
// solve. Two examples: (a) the recorded money-flow base column implies a
// base-case bus-2 price of 20 $/MWh, but G1's strictly interior dispatch
// pins the bus-1 energy price at its 8 $/MWh bid in every optimal dual
// solution, which caps the base column at far smaller values; (b) the
// recorded dispatch g=(8.0,16.4,0.6) is the midpoint of a degenerate
// optimal face (it appears only at shedding price 320 and is never a basic
// solution), so a simplex-based solve cannot return it for any shedding
// price. The affected checks are kept verbatim rather than retuned and are
// expected to FAIL; the consistent subset of reference values is verified
// in the unit tests.
//
// Usage: acceptance [--only N]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "coopt/experiments.hpp"
#include "coopt/reports_io.hpp"
#include "coopt/verify.hpp"
#include "lp_oracle.hpp"

using namespace coopt;

namespace {

struct Criterion {
  int failures = 0;
  std::string detail;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      ++failures;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void expect_close(double got, double want, double tol, const std::string& what) {
    if (!(std::abs(got - want) <= tol)) {
      ++failures;
      if (!detail.empty()) detail += "; ";
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s got %.6g want %.6g (tol %.3g)", what.c_str(), got,
                    want, tol);
      detail += buf;
    }
  }
};

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// R1: two-bus clearing and prices against the recorded reference table.
Criterion criterion1() {
  Criterion cr;
  auto t0 = std::chrono::steady_clock::now();
  MarketCase c = builtin_two_bus();
  ClearingSolution s = clear_cooptimization(c);
  PriceReport p = compute_prices(c, s);
  double dt = elapsed_s(t0);

  const double tol = 0.05;
  const double g_ref[] = {8.0, 16.4, 0.6};
  const double ru_ref[] = {2.4, 1.6, 4.0};
  const double rd_ref[] = {0.8, 0.0, 0.4};
  const double eg_ref[] = {8.0, 20.0, 20.0};
  const double eu_ref[] = {2.0, 7.0, 6.0};
  const double ed_ref[] = {2.0, 2.0, 2.5};
  const char* gid[] = {"G1", "G2", "G3"};
  for (int j = 0; j < 3; ++j) {
    cr.expect_close(s.g[j], g_ref[j], tol, std::string("g(") + gid[j] + ")");
    cr.expect_close(s.r_up[j], ru_ref[j], tol, std::string("r_U(") + gid[j] + ")");
    cr.expect_close(s.r_dn[j], rd_ref[j], tol, std::string("r_D(") + gid[j] + ")");
    cr.expect_close(p.eta_g[j], eg_ref[j], tol, std::string("eta_g(") + gid[j] + ")");
    cr.expect_close(p.eta_up[j], eu_ref[j], tol, std::string("eta_U(") + gid[j] + ")");
    cr.expect_close(p.eta_dn[j], ed_ref[j], tol, std::string("eta_D(") + gid[j] + ")");
  }
  cr.expect(dt < 1.0, "runtime under one second");
  return cr;
}

// R2: proportional re-dispatch ratios against the recorded 1.20 / 8.80,
// and the ratio-equals-omega identity.
Criterion criterion2() {
  Criterion cr;
  MarketCase c = builtin_two_bus();
  ClearingSolution s = clear_cooptimization(c);
  PriceReport p = compute_prices(c, s);
  SettlementReport r = settle(c, s, p, FluctuationScheme::ExAnte);

  const double ref[] = {1.20, 8.80};
  const int scen[] = {1, 3};  // S2, S4
  for (int i = 0; i < 2; ++i) {
    int k = scen[i];
    for (int j : {1, 2}) {  // G2, G3
      double up = s.adjustments[k].redispatch_up[j];
      if (up <= 1e-7) {
        cr.expect(false, "re-dispatch inactive where the reference expects it");
        continue;
      }
      double ratio = r.total_up_k[k][j] / up;
      char what[64];
      std::snprintf(what, sizeof what, "ratio S%d G%d", k + 1, j + 1);
      cr.expect_close(ratio, ref[i], 0.005, what);
      std::snprintf(what, sizeof what, "ratio==omega S%d G%d", k + 1, j + 1);
      cr.expect_close(ratio, p.omega_k[k][1], 1e-6, what);
    }
  }
  return cr;
}

// R3: full money-flow matrix against the recorded table (0.05 per cell at
// one-decimal rendering) and the full-precision revenue-adequacy balance.
Criterion criterion3() {
  Criterion cr;
  MarketCase c = builtin_two_bus();
  ClearingSolution s = clear_cooptimization(c);
  PriceReport p = compute_prices(c, s);
  SettlementReport r = settle(c, s, p, FluctuationScheme::ExAnte);
  MoneyFlowMatrix m = money_flow_matrix(c, r);

  // Recorded reference money flow (rows as in money_flow_matrix, columns
  // Base,S1..S5; the Total column is their sum).
  const double ref[9][6] = {
      {482.0, 8.0, 23.8, 6.7, 187.4, 37.4},   // Gamma^d
      {0.0, 0.0, 7.5, 0.2, 59.5, 3.0},        // Gamma^pi
      {476.0, 3.2, 21.7, 6.4, 176.5, 37.4},   // Gamma^g
      {0.0, 0.0, 4.6, 0.0, 35.2, 0.1},        // Gamma^U
      {0.0, 1.7, 0.0, 0.1, 0.0, 0.8},         // Gamma^D
      {0.0, 1.1, 2.3, 0.4, 22.2, 3.5},        // eps*Phi^U
      {0.0, -0.8, -0.1, -0.2, 0.0, -1.4},     // eps*Phi^D
      {0.0, 0.0, 1.4, 0.0, 0.0, 0.0},         // eps*Phi^d
      {6.0, 2.9, 1.2, 0.2, 13.0, 0.0},        // Delta
  };
  for (int row = 0; row < 9; ++row)
    for (int col = 0; col < 6; ++col) {
      char what[48];
      std::snprintf(what, sizeof what, "%s[%s]", m.row_names[row].c_str(),
                    col == 0 ? "Base" : ("S" + std::to_string(col)).c_str());
      cr.expect_close(m.cells[row][col], ref[row][col], 0.05, what);
    }

  double scale = 1.0;
  for (const auto& row : m.cells)
    for (double v : row) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < r.balance_residuals.size(); ++i) {
    char what[48];
    std::snprintf(what, sizeof what, "balance[%zu]", i);
    cr.expect(std::abs(r.balance_residuals[i]) <= 1e-6 * scale, what);
  }
  return cr;
}

// R4: realized-scenario generator profits against the recorded values.
Criterion criterion4() {
  Criterion cr;
  MarketCase c = builtin_two_bus();
  ClearingSolution s = clear_cooptimization(c);
  PriceReport p = compute_prices(c, s);
  std::vector<double> profit = generator_profit(c, s, p, "S1");
  const double ref[] = {101.60, 298.28, 21.62};
  const char* gid[] = {"G1", "G2", "G3"};
  for (int j = 0; j < 3; ++j)
    cr.expect_close(profit[j], ref[j], 0.01, std::string("profit(") + gid[j] + ")");
  return cr;
}

// R5: theorem property suite over 500 seeded random cases.
Criterion criterion5() {
  Criterion cr;
  auto t0 = std::chrono::steady_clock::now();
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    MarketCase c = random_case(seed);
    ClearingSolution s = clear_cooptimization(c);
    PriceReport p = compute_prices(c, s);
    SettlementReport r = settle(c, s, p, FluctuationScheme::ExAnte);
    char what[64];
    if (!check_theorem1(c, p, 1e-7).pass) {
      std::snprintf(what, sizeof what, "theorem1 seed %llu",
                    static_cast<unsigned long long>(seed));
      cr.expect(false, what);
    }
    if (!check_theorem2(c, s, r, p, 1e-6).pass) {
      std::snprintf(what, sizeof what, "theorem2 seed %llu",
                    static_cast<unsigned long long>(seed));
      cr.expect(false, what);
    }
    if (!check_theorem3(c, s, p, 1e-6).pass) {
      std::snprintf(what, sizeof what, "theorem3 seed %llu",
                    static_cast<unsigned long long>(seed));
      cr.expect(false, what);
    }
    if (!check_theorem4(c, r, 1e-6).pass) {
      std::snprintf(what, sizeof what, "theorem4 seed %llu",
                    static_cast<unsigned long long>(seed));
      cr.expect(false, what);
    }
  }
  double dt = elapsed_s(t0);
  char buf[64];
  std::snprintf(buf, sizeof buf, "runtime %.1fs under 300s", dt);
  cr.expect(dt < 300.0, buf);
  if (cr.failures == 0) {
    std::snprintf(buf, sizeof buf, "500 cases, %.1fs", dt);
    cr.detail = buf;
  }
  return cr;
}

// R6: shift-factor vs phase-angle objective equivalence.
Criterion criterion6() {
  Criterion cr;
  {
    MarketCase c = builtin_two_bus();
    double a = clear_cooptimization(c).objective;
    double b = clear_cooptimization_angle(c).objective;
    cr.expect(std::abs(a - b) <= 1e-6 * std::max(1.0, std::abs(a)), "two-bus equivalence");
  }
  {
    MarketCase c = load_case(std::string(COOPT_SOURCE_DIR) + "/cases/six_bus.json");
    double a = clear_cooptimization(c).objective;
    double b = clear_cooptimization_angle(c).objective;
    cr.expect(std::abs(a - b) <= 1e-6 * std::max(1.0, std::abs(a)), "six-bus equivalence");
  }
  for (std::uint64_t seed = 2001; seed <= 2200; ++seed) {
    MarketCase c = random_case(seed);
    double a = clear_cooptimization(c).objective;
    double b = clear_cooptimization_angle(c).objective;
    if (!(std::abs(a - b) <= 1e-6 * std::max(1.0, std::abs(a)))) {
      char what[64];
      std::snprintf(what, sizeof what, "equivalence seed %llu",
                    static_cast<unsigned long long>(seed));
      cr.expect(false, what);
    }
  }
  return cr;
}

// R7: exact-mode dominance over the traditional model plus the u-shaped
// requirement curve.
Criterion criterion7() {
  Criterion cr;
  MarketCase c = builtin_two_bus();
  std::vector<double> grid;
  for (double f = 0.0; f <= 0.4 + 1e-12; f += 0.02) grid.push_back(f);
  ComparisonResult r = compare_models(c, grid);
  bool decreased = false, increased_after = false;
  double prev = -1.0;
  for (const auto& pt : r.points) {
    if (!pt.feasible) continue;
    if (!(r.proposed_total <= pt.avg_total + 1e-9 * std::max(1.0, pt.avg_total))) {
      char what[48];
      std::snprintf(what, sizeof what, "dominance at fraction %.2f", pt.fraction);
      cr.expect(false, what);
    }
    if (prev >= 0.0) {
      if (pt.avg_total < prev - 1e-9) decreased = true;
      if (decreased && pt.avg_total > prev + 1e-9) increased_after = true;
    }
    prev = pt.avg_total;
  }
  cr.expect(decreased && increased_after, "traditional curve decreases then increases");
  return cr;
}

// R8: fluctuation-payment volatility study over 100k trials.
Criterion criterion8() {
  Criterion cr;
  MarketCase c = builtin_two_bus();
  const int n = 100000;
  VolatilityResult r = volatility_study(c, n, 20240601);
  cr.expect(r.var_ex_ante_payment == 0.0, "ex-ante payment variance is zero");
  cr.expect(r.var_ex_post_payment > 0.0, "ex-post payment variance is positive");
  auto sample_sd = [&](const std::vector<double>& v, double mean) {
    double acc = 0.0;
    for (double x : v) acc += (x - mean) * (x - mean);
    return std::sqrt(acc / v.size());
  };
  double sd_a = sample_sd(r.net_revenue_ex_ante, r.mean_net_ex_ante);
  double sd_p = sample_sd(r.net_revenue_ex_post, r.mean_net_ex_post);
  cr.expect(std::abs(r.mean_net_ex_ante) <= 3.0 * sd_a / std::sqrt(double(n)) + 1e-9,
            "ex-ante net revenue within the 3-sigma band of zero");
  cr.expect(std::abs(r.mean_net_ex_post) <= 3.0 * sd_p / std::sqrt(double(n)) + 1e-9,
            "ex-post net revenue within the 3-sigma band of zero");
  return cr;
}

// R9: empirical base-case frequency.
Criterion criterion9() {
  Criterion cr;
  MarketCase c = builtin_two_bus();
  const int n = 100000;
  std::vector<int> draws = sample_scenarios(c, n, 7);
  int base = 0;
  for (int k : draws) base += (k == -1);
  double freq = static_cast<double>(base) / n;
  double sigma = std::sqrt(0.54 * 0.46 / n);
  char what[96];
  std::snprintf(what, sizeof what, "frequency %.4f within 3 sigma of 0.54", freq);
  cr.expect(std::abs(freq - 0.54) <= 3.0 * sigma, what);
  if (cr.failures == 0) cr.detail = what;
  return cr;
}

// R10: lp core certificates on 1000 random small LPs plus anti-cycling.
Criterion criterion10() {
  Criterion cr;
  std::mt19937_64 rng(314159);
  for (int rep = 0; rep < 1000; ++rep) {
    LinearProgram lp = coopt::testutil::random_feasible_lp(rng, 6, 6);
    LpSolution s = solve(lp);
    if (s.status != LpStatus::Optimal) {
      cr.expect(false, "random LP not optimal at rep " + std::to_string(rep));
      continue;
    }
    double scale = std::max(1.0, std::abs(s.objective));
    if (!(s.residuals.duality_gap <= 1e-7 * scale))
      cr.expect(false, "duality gap at rep " + std::to_string(rep));
    double oracle = coopt::testutil::vertex_enumeration_optimum(lp);
    if (!(std::abs(s.objective - oracle) <= 1e-8 * scale))
      cr.expect(false, "vertex oracle at rep " + std::to_string(rep));
  }
  {
    LinearProgram lp;
    for (int j = 0; j < 4; ++j) lp.add_variable("x" + std::to_string(j), 0.0, 10.0, -1.0);
    for (int r = 0; r < 12; ++r) {
      std::vector<std::pair<int, double>> t;
      for (int j = 0; j < 4; ++j) t.emplace_back(j, 1.0);
      lp.add_ub("rep" + std::to_string(r), std::move(t), 2.0);
    }
    LpSolution s = solve(lp);
    cr.expect(s.status == LpStatus::Optimal && s.iterations < 200,
              "degenerate fixture terminates");
  }
  return cr;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[i + 1]);

  struct Entry {
    int id;
    const char* name;
    Criterion (*fn)();
  };
  const Entry entries[] = {
      {1, "two-bus clearing and prices vs reference table", criterion1},
      {2, "re-dispatch ratio reproduction (1.20 / 8.80)", criterion2},
      {3, "money-flow matrix vs reference + balance identity", criterion3},
      {4, "generator profits vs reference", criterion4},
      {5, "theorem suite on 500 random cases", criterion5},
      {6, "shift-factor vs phase-angle equivalence", criterion6},
      {7, "dominance over the traditional model", criterion7},
      {8, "fluctuation-settlement volatility", criterion8},
      {9, "base-case sampling frequency", criterion9},
      {10, "lp certificates vs vertex enumeration", criterion10},
  };

  int failed = 0;
  for (const Entry& e : entries) {
    if (only != 0 && e.id != only) continue;
    Criterion cr = e.fn();
    std::printf("R%-2d %-52s %s", e.id, e.name, cr.failures == 0 ? "PASS" : "FAIL");
    if (!cr.detail.empty()) std::printf("  [%s]", cr.detail.c_str());
    std::printf("\n");
    std::fflush(stdout);
    if (cr.failures > 0) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
