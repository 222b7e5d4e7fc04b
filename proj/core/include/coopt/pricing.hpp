#pragma once

#include <string>
#include <vector>

#include "coopt/case.hpp"
#include "coopt/clearing.hpp"

namespace coopt {

/// Marginal prices derived from clearing duals (envelope-theorem
/// sensitivities of the expected system cost).
struct PriceReport {
  std::vector<double> omega0;                // per bus: lambda - S(.,b)^T mu
  std::vector<std::vector<double>> omega_k;  // [scenario][bus]
  std::vector<double> eta_g;                 // per generator, Eq. omega0 + sum omega_k
  std::vector<double> eta_up;                // per generator, sum alpha_hi
  std::vector<double> eta_dn;                // per generator, sum beta_hi
  std::vector<double> eta_d;                 // per load, includes -sum tau_hi
  std::vector<double> tau_sum;               // per load: sum_k tau_hi
  /// True when some load is fully shed in some scenario (tau_hi > dual_tol),
  /// i.e. the locational-uniform-pricing assumption does not hold.
  bool full_shed_flagged = false;
};

/// Throws MissingDuals when the solution carries no dual set.
PriceReport compute_prices(const MarketCase& c, const ClearingSolution& s);

struct PriceComponents {
  double energy = 0.0;      // lambda (or lambda_k)
  double congestion = 0.0;  // -S(.,b)^T mu (or scenario analog)
};

/// Decomposes omega at a bus into energy and congestion components.
/// scenario_id empty: base case. Throws UnknownBus / UnknownScenario.
PriceComponents price_decomposition(const MarketCase& c, const ClearingSolution& s,
                                    const std::string& bus,
                                    const std::string& scenario_id = {});

}  // namespace coopt
