#pragma once

#include <optional>
#include <string>
#include <vector>

#include "coopt/case.hpp"
#include "coopt/lp.hpp"
#include "coopt/network.hpp"

namespace coopt {

/// Per-scenario primal adjustments (aligned with case generator/load order).
struct ScenarioAdjustment {
  std::vector<double> redispatch_up;    // delta g^U_k
  std::vector<double> redispatch_down;  // delta g^D_k
  std::vector<double> shed;             // delta d_k
};

/// Full dual vector set of a clearing solve, keyed by constraint identity.
/// Inequality duals are >= 0 (they enter the Lagrangian on the <= rows).
struct ClearingDuals {
  double lambda = 0.0;                          // base energy balance
  std::vector<double> mu_base;                  // base flow limits, per line
  std::vector<double> lambda_k;                 // scenario balances
  std::vector<std::vector<double>> mu_k;        // [scenario][surviving line]
  std::vector<std::vector<std::string>> surviving_lines;  // [scenario]
  std::vector<double> cap_hi;                   // g + r_U <= Gmax
  std::vector<double> cap_lo;                   // Gmin + r_D <= g
  std::vector<double> res_up_lo, res_up_hi;     // 0 <= r_U <= ramp_up
  std::vector<double> res_dn_lo, res_dn_hi;     // 0 <= r_D <= ramp_down
  std::vector<std::vector<double>> alpha_hi, alpha_lo;  // [k][gen] redispatch-up range
  std::vector<std::vector<double>> beta_hi, beta_lo;    // [k][gen] redispatch-down range
  std::vector<std::vector<double>> tau_hi, tau_lo;      // [k][load] shed range
  // Filled only by the phase-angle builder: nodal balance duals.
  std::vector<double> nodal_price_base;            // Lambda per bus
  std::vector<std::vector<double>> nodal_price_k;  // [scenario][bus]
};

struct ClearingSolution {
  LpStatus status = LpStatus::Optimal;
  std::vector<double> g, r_up, r_dn;
  std::vector<ScenarioAdjustment> adjustments;
  double objective = 0.0;  // expected system total cost
  ClearingDuals duals;
  KktResiduals kkt;
};

struct TraditionalSolution {
  LpStatus status = LpStatus::Optimal;
  std::vector<double> g, r_up, r_dn;
  double lambda = 0.0;
  std::vector<double> mu;  // base flow duals
  double gamma_up = 0.0, gamma_dn = 0.0;  // reserve requirement duals
  double objective = 0.0;  // bid-in cost
};

/// Variable/row index map of the co-optimization LP; dual extraction and the
/// envelope cross-checks rely on this fixed layout.
struct CooptIndex {
  int n_gen = 0, n_load = 0, n_scen = 0;
  int var_g(int j) const { return j; }
  int var_ru(int j) const { return n_gen + j; }
  int var_rd(int j) const { return 2 * n_gen + j; }
  int scen_base(int k) const { return 3 * n_gen + k * (2 * n_gen + n_load); }
  int var_du(int k, int j) const { return scen_base(k) + j; }
  int var_dd(int k, int j) const { return scen_base(k) + n_gen + j; }
  int var_shed(int k, int l) const { return scen_base(k) + 2 * n_gen + l; }

  int eq_balance_base = -1;
  std::vector<int> eq_balance_k;
  std::vector<int> ub_flow_base;
  std::vector<std::vector<int>> ub_flow_k;
  std::vector<int> ub_cap_hi, ub_cap_lo;
  std::vector<std::vector<int>> ub_alpha, ub_beta;
};

/// Shift-factor co-optimization LP (model II). Exposed for the LP text dump
/// and for fixed-resource re-solves in the verification module.
std::pair<LinearProgram, CooptIndex> build_cooptimization_lp(const MarketCase& c);

/// Base-case + per-scenario shift factor matrices for a case.
PtdfSet make_ptdf_set(const MarketCase& c);

/// Clears the scenario-oriented co-optimization (model II).
/// Throws InfeasibleProblem (a defect: finite shedding prices and connected
/// scenarios guarantee feasibility) or NumericalFailure.
ClearingSolution clear_cooptimization(const MarketCase& c);

/// Clears the traditional model (I) with fixed system-wide reserve
/// requirements. Infeasible requirements are reported via status.
TraditionalSolution clear_traditional(const MarketCase& c, double req_up, double req_dn);

/// Phase-angle form (model V); same contract as clear_cooptimization.
/// duals.nodal_price_* carry the per-bus balance duals Lambda.
ClearingSolution clear_cooptimization_angle(const MarketCase& c);

struct RecourseResult {
  bool feasible = true;
  double cost = 0.0;  // re-adjustment cost, or the configured penalty
  std::vector<double> redispatch_up, redispatch_down, shed;
};

/// Ex-post re-adjustment LP for one scenario with procurement fixed.
/// On infeasibility returns feasible=false and the configured penalty.
RecourseResult solve_recourse(const MarketCase& c, const std::string& scenario_id,
                              const std::vector<double>& fixed_g,
                              const std::vector<double>& fixed_r_up,
                              const std::vector<double>& fixed_r_dn);

/// Objective recomputed from primal values per the cost definition.
double expected_cost_from_primal(const MarketCase& c, const ClearingSolution& s);

}  // namespace coopt
