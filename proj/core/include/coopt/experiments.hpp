#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coopt/settlement.hpp"

namespace coopt {

/// i.i.d. draws over {base, scenarios} with the declared probabilities.
/// Entry -1 is the base case, otherwise a scenario index. Trial t uses a
/// splitmix64 substream of (seed, t), so any parallel evaluation order
/// reproduces the serial sequence.
std::vector<int> sample_scenarios(const MarketCase& c, int n, std::uint64_t seed);

/// Scenario draw for a single trial (the substream primitive).
int draw_scenario(const MarketCase& c, std::uint64_t seed, std::uint64_t trial);

struct ComparisonPoint {
  double fraction = 0.0;  // of total base load
  double requirement = 0.0;
  bool feasible = false;          // traditional clearing solved
  double base_cost = 0.0;         // bid-in procurement cost
  double avg_recourse = 0.0;      // expected / Monte Carlo average
  double avg_total = 0.0;
  int infeasible_samples = 0;     // recourse failures (penalty applied)
};

struct ComparisonResult {
  std::vector<ComparisonPoint> points;
  double proposed_total = 0.0;  // model (II) expected cost
  bool monte_carlo = false;
  std::uint64_t seed = 0;
  int samples = 0;
};

/// Traditional-vs-proposed average cost comparison over a grid of reserve
/// requirements R = fraction * total load (same for up and down).
/// mode_samples == 0: exact expectation over declared scenarios.
ComparisonResult compare_models(const MarketCase& c, const std::vector<double>& fractions,
                                int mode_samples = 0, std::uint64_t seed = 0);

struct VolatilityResult {
  std::uint64_t seed = 0;
  std::string rng_name = "splitmix64";
  std::vector<int> realized;            // per trial: -1 base or scenario index
  double ex_ante_payment = 0.0;         // constant across trials
  std::vector<double> ex_post_payment;  // per trial
  std::vector<double> net_revenue_ex_ante;  // per trial, congestion rent excluded
  std::vector<double> net_revenue_ex_post;
  double mean_net_ex_ante = 0.0, mean_net_ex_post = 0.0;
  double var_ex_ante_payment = 0.0, var_ex_post_payment = 0.0;
};

/// Ex-ante vs ex-post fluctuation settlement volatility study. Net revenue
/// counts load payments minus generator credits minus realized re-adjustment
/// payments minus congestion rent; by revenue adequacy its expectation is
/// zero under both schemes.
VolatilityResult volatility_study(const MarketCase& c, int n, std::uint64_t seed);

enum class SweepParameter { RedispatchUp, RedispatchDown };

struct SweepPoint {
  double value = 0.0;
  double reserve_price = 0.0;  // eta^U or eta^D of the swept generator
};

/// Re-clears and re-prices per parameter value.
std::vector<SweepPoint> sensitivity_sweep(const MarketCase& c, const std::string& gen_id,
                                          SweepParameter parameter,
                                          const std::vector<double>& values);

std::string comparison_csv(const ComparisonResult& r);
std::string volatility_csv(const VolatilityResult& r);
std::string sweep_csv(const std::vector<SweepPoint>& pts);

}  // namespace coopt
