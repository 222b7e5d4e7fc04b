#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coopt/pricing.hpp"

namespace coopt {

enum class FluctuationScheme {
  ExAnte,  // loads pay omega_k * pi_k across all scenarios
  ExPost,  // realized scenario only, at the probability-removed price
};

/// Two-stage money flow. "Per scenario" vectors are indexed by case scenario
/// order; credits to participants are positive in their own tables.
struct SettlementReport {
  FluctuationScheme scheme = FluctuationScheme::ExAnte;
  std::optional<int> realized_scenario;  // set for the ex-post scheme

  // Generators.
  std::vector<double> gen_energy_base;                  // Gamma^g_0
  std::vector<std::vector<double>> gen_energy_k;        // [k][gen]
  std::vector<std::vector<double>> reserve_up_k;        // Gamma^U_k
  std::vector<std::vector<double>> reserve_dn_k;        // Gamma^D_k
  std::vector<std::vector<double>> redispatch_up_k;     // Phi^U_k (per realization)
  std::vector<std::vector<double>> redispatch_dn_k;     // Phi^D_k (negative pay-back)
  std::vector<std::vector<double>> total_up_k;          // Pi^U_k
  std::vector<std::vector<double>> total_dn_k;          // Pi^D_k

  // Loads.
  std::vector<double> load_energy_base;                 // Gamma^d_0
  std::vector<std::vector<double>> load_energy_k;       // Gamma^d_k
  std::vector<std::vector<double>> fluctuation_k;       // Gamma^pi_k
  std::vector<std::vector<double>> shed_comp_k;         // Phi^d_k

  // System.
  double congestion_base = 0.0;                         // Delta_0 = f^T mu
  std::vector<double> congestion_k;                     // Delta_k = f_k^T mu_k

  /// Theorem-4 balance residuals: [0] base, then one per scenario.
  std::vector<double> balance_residuals;
};

/// Computes the full money flow for a (case, solution, prices) triple.
/// Ex-post scheme requires a realized scenario id; throws SchemeMismatch
/// when it is missing or its probability is zero.
SettlementReport settle(const MarketCase& c, const ClearingSolution& s,
                        const PriceReport& p, FluctuationScheme scheme,
                        const std::string& realized_scenario_id = {});

/// Credit minus bid-in cost of energy/reserve/re-dispatch. Re-dispatch and
/// shedding are settled at cost, so the value is the same for every
/// realized scenario; the argument is validated when present.
std::vector<double> generator_profit(const MarketCase& c, const ClearingSolution& s,
                                     const PriceReport& p,
                                     const std::string& realized_scenario_id = {});

struct CongestionRent {
  double base = 0.0;
  std::vector<double> per_scenario;
  double total = 0.0;
};

CongestionRent congestion_rent(const MarketCase& c, const ClearingSolution& s);

/// Money-flow matrix shaped like the reference table: rows Gamma^d,
/// Gamma^pi, Gamma^g, Gamma^U, Gamma^D, eps*Phi^U, eps*Phi^D, eps*Phi^d,
/// Delta; columns Base, scenarios..., Total. Values rendered to 1 decimal.
std::string money_flow_csv(const MarketCase& c, const SettlementReport& r);

/// Row sums of the money-flow matrix at full precision, in the same order
/// as in the CSV (base, per scenario, total).
struct MoneyFlowMatrix {
  std::vector<std::string> row_names;
  std::vector<std::vector<double>> cells;  // [row][column]; column 0 = base
};
MoneyFlowMatrix money_flow_matrix(const MarketCase& c, const SettlementReport& r);

}  // namespace coopt
