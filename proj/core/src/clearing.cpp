#include "coopt/clearing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace coopt {

namespace {

SolveControls controls_for(const MarketCase& c) {
  SolveControls ctl;
  ctl.feas_tol = c.options.feas_tol;
  ctl.dual_tol = c.options.dual_tol;
  return ctl;
}

std::vector<double> scenario_rhs_demand(const MarketCase& c, const Scenario& k) {
  std::vector<double> d(c.loads.size());
  for (std::size_t l = 0; l < c.loads.size(); ++l)
    d[l] = c.scenario_demand(c.loads[l], k);
  return d;
}

void apply_ramp_anchor(const MarketCase& c, LinearProgram& lp, const CooptIndex& ix) {
  for (const auto& [gid, anchor] : c.options.ramp_anchor) {
    int j = c.generator_index(gid);
    const Generator& gen = c.generators[j];
    double lo = std::max(0.0, anchor - gen.ramp_down);
    double hi = anchor + gen.ramp_up;
    lp.set_bounds(ix.var_g(j), lo, hi);
  }
}

}  // namespace

PtdfSet make_ptdf_set(const MarketCase& c) {
  PtdfSet p;
  p.base = compute_ptdf(c.network, {});
  for (const Line& ln : c.network.lines) p.base_lines.push_back(ln.id);
  for (const Scenario& k : c.scenarios) {
    p.per_scenario[k.id] = compute_ptdf(c.network, k.outaged_line_ids);
    std::vector<std::string> ids;
    for (const Line& ln : c.network.lines)
      if (!k.outaged_line_ids.count(ln.id)) ids.push_back(ln.id);
    p.surviving_lines[k.id] = std::move(ids);
  }
  return p;
}

std::pair<LinearProgram, CooptIndex> build_cooptimization_lp(const MarketCase& c) {
  const int ng = static_cast<int>(c.generators.size());
  const int nl = static_cast<int>(c.loads.size());
  const int nk = static_cast<int>(c.scenarios.size());

  CooptIndex ix;
  ix.n_gen = ng;
  ix.n_load = nl;
  ix.n_scen = nk;

  LinearProgram lp;
  for (const auto& g : c.generators)
    lp.add_variable("g:" + g.id, 0.0, kInf, g.c_energy);
  for (const auto& g : c.generators)
    lp.add_variable("rU:" + g.id, 0.0, g.ramp_up, g.c_res_up);
  for (const auto& g : c.generators)
    lp.add_variable("rD:" + g.id, 0.0, g.ramp_down, g.c_res_down);
  for (const auto& k : c.scenarios) {
    for (const auto& g : c.generators)
      lp.add_variable("dU:" + k.id + ":" + g.id, 0.0, kInf, k.probability * g.c_redisp_up);
    for (const auto& g : c.generators)
      lp.add_variable("dD:" + k.id + ":" + g.id, 0.0, kInf, -k.probability * g.c_redisp_down);
    for (const auto& l : c.loads) {
      double cap = c.scenario_demand(l, k);
      lp.add_variable("dd:" + k.id + ":" + l.id, 0.0, cap, k.probability * l.c_shed);
    }
  }

  // Base balance.
  {
    std::vector<std::pair<int, double>> t;
    for (int j = 0; j < ng; ++j) t.emplace_back(ix.var_g(j), 1.0);
    double rhs = c.total_demand();
    ix.eq_balance_base = lp.add_eq("balance:base", std::move(t), rhs);
  }

  const PtdfSet ptdf = make_ptdf_set(c);

  // Base flow limits: S_G g - S_D d <= f.
  for (int li = 0; li < c.network.line_count(); ++li) {
    std::vector<std::pair<int, double>> t;
    for (int j = 0; j < ng; ++j) {
      double s = ptdf.base(li, c.network.bus_index(c.generators[j].bus));
      if (s != 0.0) t.emplace_back(ix.var_g(j), s);
    }
    double rhs = c.network.lines[li].capacity_base;
    for (int l = 0; l < nl; ++l)
      rhs += ptdf.base(li, c.network.bus_index(c.loads[l].bus)) * c.loads[l].demand;
    ix.ub_flow_base.push_back(
        lp.add_ub("flow:base:" + c.network.lines[li].id, std::move(t), rhs));
  }

  // Generator capacity coupling.
  for (int j = 0; j < ng; ++j) {
    ix.ub_cap_hi.push_back(lp.add_ub("cap_hi:" + c.generators[j].id,
                                     {{ix.var_g(j), 1.0}, {ix.var_ru(j), 1.0}},
                                     c.generators[j].g_max));
    ix.ub_cap_lo.push_back(lp.add_ub("cap_lo:" + c.generators[j].id,
                                     {{ix.var_rd(j), 1.0}, {ix.var_g(j), -1.0}},
                                     -c.generators[j].g_min));
  }

  // Scenario blocks.
  ix.eq_balance_k.resize(nk);
  ix.ub_flow_k.resize(nk);
  ix.ub_alpha.resize(nk);
  ix.ub_beta.resize(nk);
  for (int k = 0; k < nk; ++k) {
    const Scenario& sc = c.scenarios[k];
    const std::vector<double> dk = scenario_rhs_demand(c, sc);
    {
      std::vector<std::pair<int, double>> t;
      for (int j = 0; j < ng; ++j) {
        t.emplace_back(ix.var_g(j), 1.0);
        t.emplace_back(ix.var_du(k, j), 1.0);
        t.emplace_back(ix.var_dd(k, j), -1.0);
      }
      for (int l = 0; l < nl; ++l) t.emplace_back(ix.var_shed(k, l), 1.0);
      double rhs = 0.0;
      for (double d : dk) rhs += d;
      ix.eq_balance_k[k] = lp.add_eq("balance:" + sc.id, std::move(t), rhs);
    }
    const Eigen::MatrixXd& Sk = ptdf.per_scenario.at(sc.id);
    const auto& lines = ptdf.surviving_lines.at(sc.id);
    for (std::size_t r = 0; r < lines.size(); ++r) {
      std::vector<std::pair<int, double>> t;
      for (int j = 0; j < ng; ++j) {
        double s = Sk(static_cast<int>(r), c.network.bus_index(c.generators[j].bus));
        if (s == 0.0) continue;
        t.emplace_back(ix.var_g(j), s);
        t.emplace_back(ix.var_du(k, j), s);
        t.emplace_back(ix.var_dd(k, j), -s);
      }
      double rhs = c.network.lines[c.network.line_index(lines[r])].capacity_scenario;
      for (int l = 0; l < nl; ++l) {
        double s = Sk(static_cast<int>(r), c.network.bus_index(c.loads[l].bus));
        if (s == 0.0) continue;
        rhs += s * dk[l];
        t.emplace_back(ix.var_shed(k, l), s);
      }
      ix.ub_flow_k[k].push_back(lp.add_ub("flow:" + sc.id + ":" + lines[r], std::move(t), rhs));
    }
    for (int j = 0; j < ng; ++j) {
      ix.ub_alpha[k].push_back(
          lp.add_ub("redisp_up:" + sc.id + ":" + c.generators[j].id,
                    {{ix.var_du(k, j), 1.0}, {ix.var_ru(j), -1.0}}, 0.0));
      ix.ub_beta[k].push_back(
          lp.add_ub("redisp_dn:" + sc.id + ":" + c.generators[j].id,
                    {{ix.var_dd(k, j), 1.0}, {ix.var_rd(j), -1.0}}, 0.0));
    }
  }

  apply_ramp_anchor(c, lp, ix);
  return {std::move(lp), std::move(ix)};
}

namespace {

ClearingSolution extract_solution(const MarketCase& c, const LpSolution& sol,
                                  const CooptIndex& ix, const PtdfSet& ptdf) {
  const int ng = ix.n_gen, nl = ix.n_load, nk = ix.n_scen;
  ClearingSolution out;
  out.status = sol.status;
  if (sol.status != LpStatus::Optimal) return out;
  out.objective = sol.objective;
  out.kkt = sol.residuals;
  out.g.resize(ng);
  out.r_up.resize(ng);
  out.r_dn.resize(ng);
  for (int j = 0; j < ng; ++j) {
    out.g[j] = sol.x[ix.var_g(j)];
    out.r_up[j] = sol.x[ix.var_ru(j)];
    out.r_dn[j] = sol.x[ix.var_rd(j)];
  }
  out.adjustments.resize(nk);
  for (int k = 0; k < nk; ++k) {
    auto& adj = out.adjustments[k];
    adj.redispatch_up.resize(ng);
    adj.redispatch_down.resize(ng);
    adj.shed.resize(nl);
    for (int j = 0; j < ng; ++j) {
      adj.redispatch_up[j] = sol.x[ix.var_du(k, j)];
      adj.redispatch_down[j] = sol.x[ix.var_dd(k, j)];
    }
    for (int l = 0; l < nl; ++l) adj.shed[l] = sol.x[ix.var_shed(k, l)];
  }

  ClearingDuals& du = out.duals;
  du.lambda = sol.eq_duals[ix.eq_balance_base];
  for (int r : ix.ub_flow_base) du.mu_base.push_back(sol.ub_duals[r]);
  du.lambda_k.resize(nk);
  du.mu_k.resize(nk);
  du.surviving_lines.resize(nk);
  du.alpha_hi.assign(nk, std::vector<double>(ng, 0.0));
  du.alpha_lo.assign(nk, std::vector<double>(ng, 0.0));
  du.beta_hi.assign(nk, std::vector<double>(ng, 0.0));
  du.beta_lo.assign(nk, std::vector<double>(ng, 0.0));
  du.tau_hi.assign(nk, std::vector<double>(nl, 0.0));
  du.tau_lo.assign(nk, std::vector<double>(nl, 0.0));
  for (int k = 0; k < nk; ++k) {
    du.lambda_k[k] = sol.eq_duals[ix.eq_balance_k[k]];
    for (int r : ix.ub_flow_k[k]) du.mu_k[k].push_back(sol.ub_duals[r]);
    du.surviving_lines[k] = ptdf.surviving_lines.at(c.scenarios[k].id);
    for (int j = 0; j < ng; ++j) {
      du.alpha_hi[k][j] = sol.ub_duals[ix.ub_alpha[k][j]];
      du.alpha_lo[k][j] = sol.lo_duals[ix.var_du(k, j)];
      du.beta_hi[k][j] = sol.ub_duals[ix.ub_beta[k][j]];
      du.beta_lo[k][j] = sol.lo_duals[ix.var_dd(k, j)];
    }
    for (int l = 0; l < nl; ++l) {
      du.tau_hi[k][l] = sol.hi_duals[ix.var_shed(k, l)];
      du.tau_lo[k][l] = sol.lo_duals[ix.var_shed(k, l)];
    }
  }
  du.cap_hi.resize(ng);
  du.cap_lo.resize(ng);
  du.res_up_lo.resize(ng);
  du.res_up_hi.resize(ng);
  du.res_dn_lo.resize(ng);
  du.res_dn_hi.resize(ng);
  for (int j = 0; j < ng; ++j) {
    du.cap_hi[j] = sol.ub_duals[ix.ub_cap_hi[j]];
    du.cap_lo[j] = sol.ub_duals[ix.ub_cap_lo[j]];
    du.res_up_lo[j] = sol.lo_duals[ix.var_ru(j)];
    du.res_up_hi[j] = sol.hi_duals[ix.var_ru(j)];
    du.res_dn_lo[j] = sol.lo_duals[ix.var_rd(j)];
    du.res_dn_hi[j] = sol.hi_duals[ix.var_rd(j)];
  }
  return out;
}

}  // namespace

ClearingSolution clear_cooptimization(const MarketCase& c) {
  auto [lp, ix] = build_cooptimization_lp(c);
  LpSolution sol = solve(lp, controls_for(c));
  if (sol.status == LpStatus::Infeasible)
    throw InfeasibleProblem(
        "co-optimization infeasible; with finite shedding prices and connected "
        "scenarios this indicates a defect in the case or builder");
  if (sol.status == LpStatus::Unbounded)
    throw NumericalFailure("co-optimization unbounded");
  return extract_solution(c, sol, ix, make_ptdf_set(c));
}

TraditionalSolution clear_traditional(const MarketCase& c, double req_up, double req_dn) {
  if (req_up < 0 || req_dn < 0)
    throw ValidationError("requirements", "reserve requirements must be >= 0");
  const int ng = static_cast<int>(c.generators.size());
  LinearProgram lp;
  for (const auto& g : c.generators) lp.add_variable("g:" + g.id, 0.0, kInf, g.c_energy);
  for (const auto& g : c.generators)
    lp.add_variable("rU:" + g.id, 0.0, g.ramp_up, g.c_res_up);
  for (const auto& g : c.generators)
    lp.add_variable("rD:" + g.id, 0.0, g.ramp_down, g.c_res_down);

  std::vector<std::pair<int, double>> t;
  for (int j = 0; j < ng; ++j) t.emplace_back(j, 1.0);
  int eq_bal = lp.add_eq("balance:base", std::move(t), c.total_demand());

  t.clear();
  for (int j = 0; j < ng; ++j) t.emplace_back(ng + j, 1.0);
  int eq_up = lp.add_eq("req_up", std::move(t), req_up);
  t.clear();
  for (int j = 0; j < ng; ++j) t.emplace_back(2 * ng + j, 1.0);
  int eq_dn = lp.add_eq("req_dn", std::move(t), req_dn);

  const Eigen::MatrixXd S = compute_ptdf(c.network, {});
  std::vector<int> flow_rows;
  for (int li = 0; li < c.network.line_count(); ++li) {
    std::vector<std::pair<int, double>> ft;
    for (int j = 0; j < ng; ++j) {
      double s = S(li, c.network.bus_index(c.generators[j].bus));
      if (s != 0.0) ft.emplace_back(j, s);
    }
    double rhs = c.network.lines[li].capacity_base;
    for (const auto& l : c.loads)
      rhs += S(li, c.network.bus_index(l.bus)) * l.demand;
    flow_rows.push_back(lp.add_ub("flow:base:" + c.network.lines[li].id, std::move(ft), rhs));
  }
  for (int j = 0; j < ng; ++j) {
    lp.add_ub("cap_hi:" + c.generators[j].id, {{j, 1.0}, {ng + j, 1.0}},
              c.generators[j].g_max);
    lp.add_ub("cap_lo:" + c.generators[j].id, {{2 * ng + j, 1.0}, {j, -1.0}},
              -c.generators[j].g_min);
  }

  LpSolution sol = solve(lp, controls_for(c));
  TraditionalSolution out;
  out.status = sol.status;
  if (sol.status != LpStatus::Optimal) return out;
  out.objective = sol.objective;
  out.g.assign(sol.x.begin(), sol.x.begin() + ng);
  out.r_up.assign(sol.x.begin() + ng, sol.x.begin() + 2 * ng);
  out.r_dn.assign(sol.x.begin() + 2 * ng, sol.x.begin() + 3 * ng);
  out.lambda = sol.eq_duals[eq_bal];
  out.gamma_up = sol.eq_duals[eq_up];
  out.gamma_dn = sol.eq_duals[eq_dn];
  for (int r : flow_rows) out.mu.push_back(sol.ub_duals[r]);
  return out;
}

ClearingSolution clear_cooptimization_angle(const MarketCase& c) {
  const int ng = static_cast<int>(c.generators.size());
  const int nl = static_cast<int>(c.loads.size());
  const int nk = static_cast<int>(c.scenarios.size());
  const int nb = c.network.bus_count();
  const int ref = c.network.reference_index();

  CooptIndex ix;
  ix.n_gen = ng;
  ix.n_load = nl;
  ix.n_scen = nk;

  LinearProgram lp;
  for (const auto& g : c.generators) lp.add_variable("g:" + g.id, 0.0, kInf, g.c_energy);
  for (const auto& g : c.generators)
    lp.add_variable("rU:" + g.id, 0.0, g.ramp_up, g.c_res_up);
  for (const auto& g : c.generators)
    lp.add_variable("rD:" + g.id, 0.0, g.ramp_down, g.c_res_down);
  for (const auto& k : c.scenarios) {
    for (const auto& g : c.generators)
      lp.add_variable("dU:" + k.id + ":" + g.id, 0.0, kInf, k.probability * g.c_redisp_up);
    for (const auto& g : c.generators)
      lp.add_variable("dD:" + k.id + ":" + g.id, 0.0, kInf, -k.probability * g.c_redisp_down);
    for (const auto& l : c.loads)
      lp.add_variable("dd:" + k.id + ":" + l.id, 0.0, c.scenario_demand(l, k),
                      k.probability * l.c_shed);
  }
  // Phase angles, reference pinned to zero.
  std::vector<int> theta0(nb);
  for (int b = 0; b < nb; ++b)
    theta0[b] = lp.add_variable("th:base:" + c.network.buses[b],
                                b == ref ? 0.0 : -kInf, b == ref ? 0.0 : kInf, 0.0);
  std::vector<std::vector<int>> thetak(nk, std::vector<int>(nb));
  for (int k = 0; k < nk; ++k)
    for (int b = 0; b < nb; ++b)
      thetak[k][b] =
          lp.add_variable("th:" + c.scenarios[k].id + ":" + c.network.buses[b],
                          b == ref ? 0.0 : -kInf, b == ref ? 0.0 : kInf, 0.0);

  const AngleSystem base_sys = build_angle_system(c.network, {});

  // Base nodal balance: sum_j@b g_j - B(b,:) theta = sum_l@b d_l.
  std::vector<int> nodal0(nb);
  for (int b = 0; b < nb; ++b) {
    std::vector<std::pair<int, double>> t;
    for (int j = 0; j < ng; ++j)
      if (c.network.bus_index(c.generators[j].bus) == b) t.emplace_back(ix.var_g(j), 1.0);
    for (int b2 = 0; b2 < nb; ++b2) {
      double v = base_sys.susceptance(b, b2);
      if (v != 0.0) t.emplace_back(theta0[b2], -v);
    }
    double rhs = 0.0;
    for (const auto& l : c.loads)
      if (c.network.bus_index(l.bus) == b) rhs += l.demand;
    nodal0[b] = lp.add_eq("nodal:base:" + c.network.buses[b], std::move(t), rhs);
  }
  for (int li = 0; li < c.network.line_count(); ++li) {
    std::vector<std::pair<int, double>> t;
    for (int b = 0; b < nb; ++b) {
      double v = base_sys.branch_flow(li, b);
      if (v != 0.0) t.emplace_back(theta0[b], v);
    }
    ix.ub_flow_base.push_back(lp.add_ub("flow:base:" + c.network.lines[li].id, std::move(t),
                                        c.network.lines[li].capacity_base));
  }
  for (int j = 0; j < ng; ++j) {
    ix.ub_cap_hi.push_back(lp.add_ub("cap_hi:" + c.generators[j].id,
                                     {{ix.var_g(j), 1.0}, {ix.var_ru(j), 1.0}},
                                     c.generators[j].g_max));
    ix.ub_cap_lo.push_back(lp.add_ub("cap_lo:" + c.generators[j].id,
                                     {{ix.var_rd(j), 1.0}, {ix.var_g(j), -1.0}},
                                     -c.generators[j].g_min));
  }

  std::vector<std::vector<int>> nodalk(nk, std::vector<int>(nb));
  ix.ub_flow_k.resize(nk);
  ix.ub_alpha.resize(nk);
  ix.ub_beta.resize(nk);
  std::vector<AngleSystem> scen_sys;
  scen_sys.reserve(nk);
  for (int k = 0; k < nk; ++k) {
    const Scenario& sc = c.scenarios[k];
    scen_sys.push_back(build_angle_system(c.network, sc.outaged_line_ids));
    const AngleSystem& sys = scen_sys.back();
    const std::vector<double> dk = scenario_rhs_demand(c, sc);
    for (int b = 0; b < nb; ++b) {
      std::vector<std::pair<int, double>> t;
      for (int j = 0; j < ng; ++j)
        if (c.network.bus_index(c.generators[j].bus) == b) {
          t.emplace_back(ix.var_g(j), 1.0);
          t.emplace_back(ix.var_du(k, j), 1.0);
          t.emplace_back(ix.var_dd(k, j), -1.0);
        }
      for (int l = 0; l < nl; ++l)
        if (c.network.bus_index(c.loads[l].bus) == b) t.emplace_back(ix.var_shed(k, l), 1.0);
      for (int b2 = 0; b2 < nb; ++b2) {
        double v = sys.susceptance(b, b2);
        if (v != 0.0) t.emplace_back(thetak[k][b2], -v);
      }
      double rhs = 0.0;
      for (int l = 0; l < nl; ++l)
        if (c.network.bus_index(c.loads[l].bus) == b) rhs += dk[l];
      nodalk[k][b] = lp.add_eq("nodal:" + sc.id + ":" + c.network.buses[b], std::move(t), rhs);
    }
    for (std::size_t r = 0; r < sys.line_ids.size(); ++r) {
      std::vector<std::pair<int, double>> t;
      for (int b = 0; b < nb; ++b) {
        double v = sys.branch_flow(static_cast<int>(r), b);
        if (v != 0.0) t.emplace_back(thetak[k][b], v);
      }
      const Line& ln = c.network.lines[c.network.line_index(sys.line_ids[r])];
      ix.ub_flow_k[k].push_back(
          lp.add_ub("flow:" + sc.id + ":" + ln.id, std::move(t), ln.capacity_scenario));
    }
    for (int j = 0; j < ng; ++j) {
      ix.ub_alpha[k].push_back(
          lp.add_ub("redisp_up:" + sc.id + ":" + c.generators[j].id,
                    {{ix.var_du(k, j), 1.0}, {ix.var_ru(j), -1.0}}, 0.0));
      ix.ub_beta[k].push_back(
          lp.add_ub("redisp_dn:" + sc.id + ":" + c.generators[j].id,
                    {{ix.var_dd(k, j), 1.0}, {ix.var_rd(j), -1.0}}, 0.0));
    }
  }
  apply_ramp_anchor(c, lp, ix);

  LpSolution sol = solve(lp, controls_for(c));
  if (sol.status == LpStatus::Infeasible)
    throw InfeasibleProblem("phase-angle co-optimization infeasible");
  if (sol.status == LpStatus::Unbounded)
    throw NumericalFailure("phase-angle co-optimization unbounded");

  const PtdfSet ptdf = make_ptdf_set(c);
  // The scenario flow/alpha/beta rows line up with the shift-factor layout,
  // so the common extractor applies; eq rows are filled below.
  ix.eq_balance_base = 0;  // placeholder, overwritten next
  ix.eq_balance_k.assign(nk, 0);
  ClearingSolution out = extract_solution(c, sol, ix, ptdf);
  if (out.status != LpStatus::Optimal) return out;

  // Nodal duals Lambda; the system-wide (lambda, mu) equivalents follow from
  // Lambda = lambda - S^T mu with the reference column of S being zero.
  ClearingDuals& du = out.duals;
  du.nodal_price_base.resize(nb);
  for (int b = 0; b < nb; ++b) du.nodal_price_base[b] = sol.eq_duals[nodal0[b]];
  du.nodal_price_k.assign(nk, std::vector<double>(nb, 0.0));
  for (int k = 0; k < nk; ++k)
    for (int b = 0; b < nb; ++b) du.nodal_price_k[k][b] = sol.eq_duals[nodalk[k][b]];
  du.lambda = du.nodal_price_base[ref];
  du.lambda_k.resize(nk);
  for (int k = 0; k < nk; ++k) du.lambda_k[k] = du.nodal_price_k[k][ref];
  return out;
}

RecourseResult solve_recourse(const MarketCase& c, const std::string& scenario_id,
                              const std::vector<double>& fixed_g,
                              const std::vector<double>& fixed_r_up,
                              const std::vector<double>& fixed_r_dn) {
  const int ng = static_cast<int>(c.generators.size());
  const int nl = static_cast<int>(c.loads.size());
  if (static_cast<int>(fixed_g.size()) != ng || static_cast<int>(fixed_r_up.size()) != ng ||
      static_cast<int>(fixed_r_dn.size()) != ng)
    throw ValidationError("recourse", "fixed vectors must match generator count");
  const int k = c.scenario_index(scenario_id);
  const Scenario& sc = c.scenarios[k];

  LinearProgram lp;
  for (int j = 0; j < ng; ++j)
    lp.add_variable("dU:" + c.generators[j].id, 0.0, std::max(0.0, fixed_r_up[j]),
                    c.generators[j].c_redisp_up);
  for (int j = 0; j < ng; ++j)
    lp.add_variable("dD:" + c.generators[j].id, 0.0, std::max(0.0, fixed_r_dn[j]),
                    -c.generators[j].c_redisp_down);
  std::vector<double> dk(nl);
  for (int l = 0; l < nl; ++l) {
    dk[l] = c.scenario_demand(c.loads[l], sc);
    lp.add_variable("dd:" + c.loads[l].id, 0.0, dk[l], c.loads[l].c_shed);
  }

  {
    std::vector<std::pair<int, double>> t;
    for (int j = 0; j < ng; ++j) {
      t.emplace_back(j, 1.0);
      t.emplace_back(ng + j, -1.0);
    }
    for (int l = 0; l < nl; ++l) t.emplace_back(2 * ng + l, 1.0);
    double rhs = -std::accumulate(fixed_g.begin(), fixed_g.end(), 0.0);
    for (double d : dk) rhs += d;
    lp.add_eq("balance", std::move(t), rhs);
  }
  const Eigen::MatrixXd Sk = compute_ptdf(c.network, sc.outaged_line_ids);
  int row = 0;
  for (int li = 0; li < c.network.line_count(); ++li) {
    if (sc.outaged_line_ids.count(c.network.lines[li].id)) continue;
    std::vector<std::pair<int, double>> t;
    double rhs = c.network.lines[li].capacity_scenario;
    for (int j = 0; j < ng; ++j) {
      double s = Sk(row, c.network.bus_index(c.generators[j].bus));
      if (s == 0.0) continue;
      t.emplace_back(j, s);
      t.emplace_back(ng + j, -s);
      rhs -= s * fixed_g[j];
    }
    for (int l = 0; l < nl; ++l) {
      double s = Sk(row, c.network.bus_index(c.loads[l].bus));
      if (s == 0.0) continue;
      t.emplace_back(2 * ng + l, s);
      rhs += s * dk[l];
    }
    lp.add_ub("flow:" + c.network.lines[li].id, std::move(t), rhs);
    ++row;
  }

  LpSolution sol = solve(lp, controls_for(c));
  RecourseResult out;
  if (sol.status != LpStatus::Optimal) {
    out.feasible = false;
    out.cost = c.options.infeasible_recourse_penalty;
    return out;
  }
  out.cost = sol.objective;
  out.redispatch_up.assign(sol.x.begin(), sol.x.begin() + ng);
  out.redispatch_down.assign(sol.x.begin() + ng, sol.x.begin() + 2 * ng);
  out.shed.assign(sol.x.begin() + 2 * ng, sol.x.end());
  return out;
}

double expected_cost_from_primal(const MarketCase& c, const ClearingSolution& s) {
  double total = 0.0;
  for (std::size_t j = 0; j < c.generators.size(); ++j)
    total += c.generators[j].c_energy * s.g[j] + c.generators[j].c_res_up * s.r_up[j] +
             c.generators[j].c_res_down * s.r_dn[j];
  for (std::size_t k = 0; k < c.scenarios.size(); ++k) {
    double adj = 0.0;
    for (std::size_t j = 0; j < c.generators.size(); ++j)
      adj += c.generators[j].c_redisp_up * s.adjustments[k].redispatch_up[j] -
             c.generators[j].c_redisp_down * s.adjustments[k].redispatch_down[j];
    for (std::size_t l = 0; l < c.loads.size(); ++l)
      adj += c.loads[l].c_shed * s.adjustments[k].shed[l];
    total += c.scenarios[k].probability * adj;
  }
  return total;
}

}  // namespace coopt
