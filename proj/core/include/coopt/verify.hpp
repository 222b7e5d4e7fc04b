#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coopt/settlement.hpp"

namespace coopt {

struct CheckReport {
  bool pass = true;
  double max_residual = 0.0;
  std::string detail;
};

/// Locational uniform pricing for energy: co-located generators and
/// not-fully-shed loads share one energy price.
CheckReport check_theorem1(const MarketCase& c, const PriceReport& p, double tol = 1e-7);

/// Proportional uniform pricing for re-dispatch: Pi^U_k/dg^U_k equals the
/// scenario energy-price component at the bus (and the downward analog
/// Pi^D_k/dg^D_k = -omega_k), wherever re-dispatch is strictly positive.
CheckReport check_theorem2(const MarketCase& c, const ClearingSolution& s,
                           const SettlementReport& r, const PriceReport& p,
                           double tol = 1e-6);

/// Individual rationality: each generator's cleared point maximizes its
/// profit at the posted prices (3-variable profit LP per generator).
/// Throws AssumptionViolated when some g_min > 0.
CheckReport check_theorem3(const MarketCase& c, const ClearingSolution& s,
                           const PriceReport& p, double tol = 1e-6);

/// Revenue adequacy: base and per-scenario money-flow balances.
CheckReport check_theorem4(const MarketCase& c, const SettlementReport& r,
                           double tol = 1e-6);

enum class EnvelopeQuantity { Generation, ReserveUp, ReserveDown, Demand, Fluctuation };

struct EnvelopeResult {
  double dual_price = 0.0;         // envelope (dual-based) sensitivity
  double finite_difference = 0.0;  // central difference of optimal cost
  double slope_left = 0.0;         // (f(0) - f(-h)) / h
  double slope_right = 0.0;        // (f(+h) - f(0)) / h
  bool basis_change = false;       // one-sided slopes disagree; the dual lies
                                   // between them but the central difference
                                   // is not comparable
};

/// Cross-checks a dual-based price against a +/-h re-solve. For generator
/// quantities the re-solves fix (g, r_U, r_D) of that generator and relax
/// its internal rows (the fixed-resource model); for demand/fluctuation the
/// case data is perturbed. scenario_id is required for Fluctuation.
EnvelopeResult envelope_crosscheck(const MarketCase& c, const ClearingSolution& s,
                                   const PriceReport& p, EnvelopeQuantity q,
                                   const std::string& entity_id,
                                   const std::string& scenario_id = {}, double h = 1e-4);

struct RandomCaseParams {
  int max_buses = 8;
  int max_scenarios = 6;
  int max_generators = 5;
  int max_loads = 5;
};

/// Seeded random market case: connected network, g_min = 0, finite shedding
/// prices, probability mass < 1, outages that keep every scenario connected,
/// and a feasible co-optimization (verified by a probe solve; the seed is
/// advanced deterministically until one is found).
MarketCase random_case(std::uint64_t seed, const RandomCaseParams& params = {});

}  // namespace coopt
