#include "coopt/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace coopt {

CheckReport check_theorem1(const MarketCase& c, const PriceReport& p, double tol) {
  CheckReport rep;
  double scale = 1.0;
  for (double v : p.eta_g) scale = std::max(scale, std::abs(v));
  for (int b = 0; b < c.network.bus_count(); ++b) {
    double lo = kInf, hi = -kInf;
    auto take = [&](double v) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    };
    for (std::size_t j = 0; j < c.generators.size(); ++j)
      if (c.network.bus_index(c.generators[j].bus) == b) take(p.eta_g[j]);
    for (std::size_t l = 0; l < c.loads.size(); ++l)
      if (c.network.bus_index(c.loads[l].bus) == b && p.tau_sum[l] <= c.options.dual_tol)
        take(p.eta_d[l]);
    if (hi > lo) rep.max_residual = std::max(rep.max_residual, hi - lo);
  }
  rep.pass = rep.max_residual <= tol * scale;
  std::ostringstream os;
  os << "max co-located energy-price spread = " << rep.max_residual;
  rep.detail = os.str();
  return rep;
}

CheckReport check_theorem2(const MarketCase& c, const ClearingSolution& s,
                           const SettlementReport& r, const PriceReport& p, double tol) {
  CheckReport rep;
  const double active = std::max(c.options.feas_tol, 1e-7);
  int checked = 0;
  for (std::size_t k = 0; k < c.scenarios.size(); ++k) {
    for (std::size_t j = 0; j < c.generators.size(); ++j) {
      const int b = c.network.bus_index(c.generators[j].bus);
      const double omega = p.omega_k[k][b];
      const double up = s.adjustments[k].redispatch_up[j];
      if (up > active) {
        double ratio = r.total_up_k[k][j] / up;
        rep.max_residual = std::max(rep.max_residual, std::abs(ratio - omega));
        ++checked;
      }
      const double dn = s.adjustments[k].redispatch_down[j];
      if (dn > active) {
        double ratio = r.total_dn_k[k][j] / dn;
        rep.max_residual = std::max(rep.max_residual, std::abs(ratio + omega));
        ++checked;
      }
    }
  }
  double scale = 1.0;
  for (const auto& row : p.omega_k)
    for (double v : row) scale = std::max(scale, std::abs(v));
  rep.pass = rep.max_residual <= tol * scale;
  std::ostringstream os;
  os << checked << " re-dispatch ratios checked, max |ratio - omega_k| = "
     << rep.max_residual;
  rep.detail = os.str();
  return rep;
}

CheckReport check_theorem3(const MarketCase& c, const ClearingSolution& s,
                           const PriceReport& p, double tol) {
  if (!c.zero_min_generation())
    throw AssumptionViolated("individual-rationality check requires g_min = 0");
  CheckReport rep;
  double scale = 1.0;
  for (std::size_t j = 0; j < c.generators.size(); ++j) {
    const Generator& gen = c.generators[j];
    // Profit maximization of one generator at the posted prices: the LP
    // minimizes the negated profit over the generator's own constraints.
    LinearProgram lp;
    int vg = lp.add_variable("g", 0.0, kInf, gen.c_energy - p.eta_g[j]);
    int vu = lp.add_variable("rU", 0.0, gen.ramp_up, gen.c_res_up - p.eta_up[j]);
    int vd = lp.add_variable("rD", 0.0, gen.ramp_down, gen.c_res_down - p.eta_dn[j]);
    lp.add_ub("cap_hi", {{vg, 1.0}, {vu, 1.0}}, gen.g_max);
    lp.add_ub("cap_lo", {{vd, 1.0}, {vg, -1.0}}, 0.0);
    LpSolution sol = solve(lp);
    if (sol.status != LpStatus::Optimal)
      throw NumericalFailure("profit-maximization LP failed for " + gen.id);
    const double best_profit = -sol.objective;
    const double cleared_profit = (p.eta_g[j] - gen.c_energy) * s.g[j] +
                                  (p.eta_up[j] - gen.c_res_up) * s.r_up[j] +
                                  (p.eta_dn[j] - gen.c_res_down) * s.r_dn[j];
    rep.max_residual = std::max(rep.max_residual, std::abs(best_profit - cleared_profit));
    scale = std::max(scale, std::abs(best_profit));
  }
  rep.pass = rep.max_residual <= tol * scale;
  std::ostringstream os;
  os << "max profit-maximization gap = " << rep.max_residual;
  rep.detail = os.str();
  return rep;
}

CheckReport check_theorem4(const MarketCase& c, const SettlementReport& r, double tol) {
  CheckReport rep;
  double scale = 1.0;
  const MoneyFlowMatrix m = money_flow_matrix(c, r);
  for (const auto& row : m.cells)
    for (double v : row) scale = std::max(scale, std::abs(v));
  for (double res : r.balance_residuals)
    rep.max_residual = std::max(rep.max_residual, std::abs(res));
  rep.pass = rep.max_residual <= tol * scale;
  std::ostringstream os;
  os << "max revenue-adequacy residual = " << rep.max_residual << " (scale " << scale
     << ")";
  rep.detail = os.str();
  return rep;
}

namespace {

double fixed_resource_optimum(const MarketCase& c, const ClearingSolution& s, int j,
                              double g_val, double ru_val, double rd_val) {
  auto [lp, ix] = build_cooptimization_lp(c);
  // Drop the generator's own bid costs and internal rows, then pin its
  // quantities: the optimum is the expected cost of everybody else.
  lp.set_cost(ix.var_g(j), 0.0);
  lp.set_cost(ix.var_ru(j), 0.0);
  lp.set_cost(ix.var_rd(j), 0.0);
  lp.set_ub_rhs(ix.ub_cap_hi[j], 1e12);
  lp.set_ub_rhs(ix.ub_cap_lo[j], 1e12);
  lp.set_bounds(ix.var_g(j), g_val, g_val);
  lp.set_bounds(ix.var_ru(j), ru_val, ru_val);
  lp.set_bounds(ix.var_rd(j), rd_val, rd_val);
  SolveControls ctl;
  ctl.feas_tol = c.options.feas_tol;
  ctl.dual_tol = c.options.dual_tol;
  LpSolution sol = solve(lp, ctl);
  if (sol.status != LpStatus::Optimal)
    throw InfeasibleProblem("fixed-resource re-solve infeasible");
  (void)s;
  return sol.objective;
}

}  // namespace

EnvelopeResult envelope_crosscheck(const MarketCase& c, const ClearingSolution& s,
                                   const PriceReport& p, EnvelopeQuantity q,
                                   const std::string& entity_id,
                                   const std::string& scenario_id, double h) {
  EnvelopeResult out;
  double f_plus = 0.0, f_minus = 0.0, f_zero = 0.0;
  switch (q) {
    case EnvelopeQuantity::Generation:
    case EnvelopeQuantity::ReserveUp:
    case EnvelopeQuantity::ReserveDown: {
      const int j = c.generator_index(entity_id);
      double g0 = s.g[j], ru0 = s.r_up[j], rd0 = s.r_dn[j];
      auto at = [&](double d) {
        double g = g0 + (q == EnvelopeQuantity::Generation ? d : 0.0);
        double ru = ru0 + (q == EnvelopeQuantity::ReserveUp ? d : 0.0);
        double rd = rd0 + (q == EnvelopeQuantity::ReserveDown ? d : 0.0);
        return fixed_resource_optimum(c, s, j, g, std::max(0.0, ru), std::max(0.0, rd));
      };
      f_plus = at(h);
      f_minus = at(-h);
      f_zero = at(0.0);
      // Envelope sensitivity of the others' cost: -eta for generator quantities.
      if (q == EnvelopeQuantity::Generation) out.dual_price = -p.eta_g[j];
      if (q == EnvelopeQuantity::ReserveUp) out.dual_price = -p.eta_up[j];
      if (q == EnvelopeQuantity::ReserveDown) out.dual_price = -p.eta_dn[j];
      break;
    }
    case EnvelopeQuantity::Demand: {
      const int l = c.load_index(entity_id);
      auto at = [&](double d) {
        MarketCase cc = c;
        cc.loads[l].demand += d;
        return clear_cooptimization(cc).objective;
      };
      f_plus = at(h);
      f_minus = at(-h);
      f_zero = at(0.0);
      out.dual_price = p.eta_d[l];
      break;
    }
    case EnvelopeQuantity::Fluctuation: {
      const int l = c.load_index(entity_id);
      const int k = c.scenario_index(scenario_id);
      auto at = [&](double d) {
        MarketCase cc = c;
        cc.loads[l].fluctuation[scenario_id] += d;
        return clear_cooptimization(cc).objective;
      };
      f_plus = at(h);
      f_minus = at(-h);
      f_zero = at(0.0);
      out.dual_price = p.omega_k[k][c.network.bus_index(c.loads[l].bus)];
      break;
    }
  }
  out.finite_difference = (f_plus - f_minus) / (2.0 * h);
  out.slope_right = (f_plus - f_zero) / h;
  out.slope_left = (f_zero - f_minus) / h;
  const double kink = std::abs(out.slope_right - out.slope_left);
  out.basis_change = kink > std::max(1e-6, 1e-3 * std::abs(out.finite_difference));
  return out;
}

namespace {

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  double uniform(double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(eng);
  }
  int uniform_int(int a, int b) { return std::uniform_int_distribution<int>(a, b)(eng); }
};

MarketCase random_case_attempt(std::uint64_t seed, const RandomCaseParams& prm) {
  Rng rng(seed);
  MarketCase c;
  c.name = "random-" + std::to_string(seed);
  const int nb = rng.uniform_int(2, prm.max_buses);
  for (int b = 0; b < nb; ++b) c.network.buses.push_back("b" + std::to_string(b));
  c.network.reference_bus = "b0";

  // Spanning tree plus a few extra edges.
  int line_no = 0;
  auto add_line = [&](int a, int b) {
    Line ln;
    ln.id = "l" + std::to_string(line_no++);
    ln.from_bus = c.network.buses[a];
    ln.to_bus = c.network.buses[b];
    ln.reactance = rng.uniform(0.05, 0.3);
    ln.capacity_base = 1.0;  // rescaled below
    ln.capacity_scenario = 1.0;
    c.network.lines.push_back(ln);
  };
  for (int b = 1; b < nb; ++b) add_line(rng.uniform_int(0, b - 1), b);
  const int extra = rng.uniform_int(0, std::max(1, nb / 2));
  for (int e = 0; e < extra; ++e) {
    int a = rng.uniform_int(0, nb - 1), b = rng.uniform_int(0, nb - 1);
    if (a != b) add_line(a, b);
  }

  const int ng = rng.uniform_int(1, prm.max_generators);
  for (int j = 0; j < ng; ++j) {
    Generator g;
    g.id = "g" + std::to_string(j);
    g.bus = c.network.buses[static_cast<std::size_t>(rng.uniform_int(0, nb - 1))];
    g.g_max = rng.uniform(5.0, 30.0);
    g.g_min = 0.0;
    g.ramp_up = rng.uniform(0.2, 1.0) * g.g_max;
    g.ramp_down = rng.uniform(0.3, 1.0) * g.g_max;
    g.c_energy = rng.uniform(5.0, 50.0);
    g.c_res_up = rng.uniform(0.5, 5.0);
    g.c_res_down = rng.uniform(0.5, 5.0);
    g.c_redisp_up = g.c_energy * rng.uniform(1.0, 1.3);
    g.c_redisp_down = g.c_energy * rng.uniform(0.7, 1.0);
    c.generators.push_back(g);
  }
  double cap_total = 0.0;
  for (const auto& g : c.generators) cap_total += g.g_max;

  const int nl = rng.uniform_int(1, prm.max_loads);
  std::vector<double> share(nl);
  double share_sum = 0.0;
  for (int l = 0; l < nl; ++l) {
    share[l] = rng.uniform(0.2, 1.0);
    share_sum += share[l];
  }
  const double demand_total = rng.uniform(0.3, 0.7) * cap_total;
  for (int l = 0; l < nl; ++l) {
    Load ld;
    ld.id = "d" + std::to_string(l);
    ld.bus = c.network.buses[static_cast<std::size_t>(rng.uniform_int(0, nb - 1))];
    ld.demand = demand_total * share[l] / share_sum;
    ld.c_shed = rng.uniform(100.0, 1000.0);
    c.loads.push_back(ld);
  }

  const int nk = rng.uniform_int(1, prm.max_scenarios);
  double mass = rng.uniform(0.1, 0.6);
  std::vector<double> w(nk);
  double wsum = 0.0;
  for (int k = 0; k < nk; ++k) {
    w[k] = rng.uniform(0.1, 1.0);
    wsum += w[k];
  }
  for (int k = 0; k < nk; ++k) {
    Scenario sc;
    sc.id = "s" + std::to_string(k);
    sc.probability = mass * w[k] / wsum;
    if (rng.uniform(0.0, 1.0) < 0.5 && c.network.line_count() > 1) {
      int pick = rng.uniform_int(0, c.network.line_count() - 1);
      std::set<std::string> out{c.network.lines[pick].id};
      if (c.network.connected_without(out)) sc.outaged_line_ids = out;
    }
    for (auto& ld : c.loads) {
      double pi = rng.uniform(-0.25, 0.35) * ld.demand;
      if (ld.demand + pi < 0) pi = -ld.demand;
      if (pi != 0.0) ld.fluctuation[sc.id] = pi;
    }
    c.scenarios.push_back(sc);
  }

  // Line capacities sized around the flows of a feasible proportional
  // dispatch, so the base case is always feasible and often congested.
  {
    Eigen::MatrixXd S = compute_ptdf(c.network, {});
    Eigen::VectorXd inj = Eigen::VectorXd::Zero(nb);
    for (const auto& g : c.generators)
      inj(c.network.bus_index(g.bus)) += g.g_max / cap_total * demand_total;
    for (const auto& l : c.loads) inj(c.network.bus_index(l.bus)) -= l.demand;
    Eigen::VectorXd flow = S * inj;
    for (int li = 0; li < c.network.line_count(); ++li) {
      double base = std::abs(flow(li)) * rng.uniform(1.05, 2.5) + 0.5;
      c.network.lines[li].capacity_base = base;
      c.network.lines[li].capacity_scenario = base * rng.uniform(0.9, 1.4);
    }
  }
  c.validate();
  return c;
}

}  // namespace

MarketCase random_case(std::uint64_t seed, const RandomCaseParams& params) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::uint64_t s = seed + 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(attempt);
    MarketCase c;
    try {
      c = random_case_attempt(s, params);
      ClearingSolution probe = clear_cooptimization(c);
      if (probe.status == LpStatus::Optimal) return c;
    } catch (const InfeasibleProblem&) {
    } catch (const ValidationError&) {
    } catch (const DisconnectedNetwork&) {
    }
  }
  throw NumericalFailure("random_case: no feasible case after 64 attempts");
}

}  // namespace coopt
