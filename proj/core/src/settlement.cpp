#include "coopt/settlement.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace coopt {

namespace {

double pi_of(const MarketCase& c, int l, int k) {
  auto it = c.loads[l].fluctuation.find(c.scenarios[k].id);
  return it == c.loads[l].fluctuation.end() ? 0.0 : it->second;
}

double vsum(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

}  // namespace

SettlementReport settle(const MarketCase& c, const ClearingSolution& s,
                        const PriceReport& p, FluctuationScheme scheme,
                        const std::string& realized_scenario_id) {
  const int ng = static_cast<int>(c.generators.size());
  const int nl = static_cast<int>(c.loads.size());
  const int nk = static_cast<int>(c.scenarios.size());

  SettlementReport r;
  r.scheme = scheme;
  if (scheme == FluctuationScheme::ExPost) {
    if (realized_scenario_id.empty())
      throw SchemeMismatch("ex-post settlement needs a realized scenario");
    int k = c.scenario_index(realized_scenario_id);
    if (c.scenarios[k].probability <= 0.0)
      throw SchemeMismatch("realized scenario has zero probability");
    r.realized_scenario = k;
  } else if (!realized_scenario_id.empty()) {
    r.realized_scenario = c.scenario_index(realized_scenario_id);
  }

  auto bus_of_gen = [&](int j) { return c.network.bus_index(c.generators[j].bus); };
  auto bus_of_load = [&](int l) { return c.network.bus_index(c.loads[l].bus); };

  r.gen_energy_base.resize(ng);
  for (int j = 0; j < ng; ++j) r.gen_energy_base[j] = p.omega0[bus_of_gen(j)] * s.g[j];
  r.load_energy_base.resize(nl);
  for (int l = 0; l < nl; ++l)
    r.load_energy_base[l] = p.omega0[bus_of_load(l)] * c.loads[l].demand;

  r.gen_energy_k.assign(nk, std::vector<double>(ng, 0.0));
  r.reserve_up_k.assign(nk, std::vector<double>(ng, 0.0));
  r.reserve_dn_k.assign(nk, std::vector<double>(ng, 0.0));
  r.redispatch_up_k.assign(nk, std::vector<double>(ng, 0.0));
  r.redispatch_dn_k.assign(nk, std::vector<double>(ng, 0.0));
  r.total_up_k.assign(nk, std::vector<double>(ng, 0.0));
  r.total_dn_k.assign(nk, std::vector<double>(ng, 0.0));
  r.load_energy_k.assign(nk, std::vector<double>(nl, 0.0));
  r.fluctuation_k.assign(nk, std::vector<double>(nl, 0.0));
  r.shed_comp_k.assign(nk, std::vector<double>(nl, 0.0));
  r.congestion_k.assign(nk, 0.0);

  for (int k = 0; k < nk; ++k) {
    const double eps = c.scenarios[k].probability;
    for (int j = 0; j < ng; ++j) {
      const double w = p.omega_k[k][bus_of_gen(j)];
      r.gen_energy_k[k][j] = w * s.g[j];
      r.reserve_up_k[k][j] = s.duals.alpha_hi[k][j] * s.r_up[j];
      r.reserve_dn_k[k][j] = s.duals.beta_hi[k][j] * s.r_dn[j];
      r.redispatch_up_k[k][j] =
          c.generators[j].c_redisp_up * s.adjustments[k].redispatch_up[j];
      r.redispatch_dn_k[k][j] =
          -c.generators[j].c_redisp_down * s.adjustments[k].redispatch_down[j];
      r.total_up_k[k][j] = r.reserve_up_k[k][j] + eps * r.redispatch_up_k[k][j];
      r.total_dn_k[k][j] = r.reserve_dn_k[k][j] + eps * r.redispatch_dn_k[k][j];
    }
    for (int l = 0; l < nl; ++l) {
      const double w = p.omega_k[k][bus_of_load(l)];
      r.load_energy_k[k][l] = w * c.loads[l].demand;
      r.shed_comp_k[k][l] = c.loads[l].c_shed * s.adjustments[k].shed[l];
      if (scheme == FluctuationScheme::ExAnte) {
        r.fluctuation_k[k][l] = w * pi_of(c, l, k);
      } else if (r.realized_scenario && *r.realized_scenario == k) {
        r.fluctuation_k[k][l] = w / eps * pi_of(c, l, k);
      }
    }
    const auto& lines = s.duals.surviving_lines[k];
    for (std::size_t li = 0; li < lines.size(); ++li)
      r.congestion_k[k] += c.network.lines[c.network.line_index(lines[li])].capacity_scenario *
                           s.duals.mu_k[k][li];
  }
  for (int li = 0; li < c.network.line_count(); ++li)
    r.congestion_base += c.network.lines[li].capacity_base * s.duals.mu_base[li];

  // Revenue-adequacy residuals, stated for the ex-ante fluctuation payment
  // (the ex-post scheme satisfies them in expectation). A fully-shed load
  // carries an active shed-bound multiplier and pays at its reduced price,
  // hence the tau * (d + pi) correction on the payment side.
  r.balance_residuals.assign(1 + nk, 0.0);
  r.balance_residuals[0] =
      vsum(r.load_energy_base) - vsum(r.gen_energy_base) - r.congestion_base;
  for (int k = 0; k < nk; ++k) {
    const double eps = c.scenarios[k].probability;
    double ex_ante_pi = 0.0, tau_correction = 0.0;
    for (int l = 0; l < nl; ++l) {
      ex_ante_pi += p.omega_k[k][bus_of_load(l)] * pi_of(c, l, k);
      tau_correction += s.duals.tau_hi[k][l] * c.scenario_demand(c.loads[l], c.scenarios[k]);
    }
    double lhs = vsum(r.load_energy_k[k]) + ex_ante_pi - tau_correction;
    double rhs = vsum(r.gen_energy_k[k]) + vsum(r.reserve_up_k[k]) +
                 vsum(r.reserve_dn_k[k]) + eps * vsum(r.redispatch_up_k[k]) +
                 eps * vsum(r.redispatch_dn_k[k]) + eps * vsum(r.shed_comp_k[k]) +
                 r.congestion_k[k];
    r.balance_residuals[1 + k] = lhs - rhs;
  }
  return r;
}

std::vector<double> generator_profit(const MarketCase& c, const ClearingSolution& s,
                                     const PriceReport& p,
                                     const std::string& realized_scenario_id) {
  if (!realized_scenario_id.empty()) c.scenario_index(realized_scenario_id);
  std::vector<double> profit(c.generators.size());
  for (std::size_t j = 0; j < c.generators.size(); ++j) {
    const Generator& gen = c.generators[j];
    profit[j] = (p.eta_g[j] - gen.c_energy) * s.g[j] +
                (p.eta_up[j] - gen.c_res_up) * s.r_up[j] +
                (p.eta_dn[j] - gen.c_res_down) * s.r_dn[j];
  }
  return profit;
}

CongestionRent congestion_rent(const MarketCase& c, const ClearingSolution& s) {
  CongestionRent cr;
  for (int li = 0; li < c.network.line_count(); ++li)
    cr.base += c.network.lines[li].capacity_base * s.duals.mu_base[li];
  cr.per_scenario.assign(c.scenarios.size(), 0.0);
  for (std::size_t k = 0; k < c.scenarios.size(); ++k) {
    const auto& lines = s.duals.surviving_lines[k];
    for (std::size_t li = 0; li < lines.size(); ++li)
      cr.per_scenario[k] +=
          c.network.lines[c.network.line_index(lines[li])].capacity_scenario *
          s.duals.mu_k[k][li];
  }
  cr.total = cr.base + vsum(cr.per_scenario);
  return cr;
}

MoneyFlowMatrix money_flow_matrix(const MarketCase& c, const SettlementReport& r) {
  const int nk = static_cast<int>(c.scenarios.size());
  MoneyFlowMatrix m;
  m.row_names = {"Gamma^d", "Gamma^pi", "Gamma^g",  "Gamma^U", "Gamma^D",
                 "eps*Phi^U", "eps*Phi^D", "eps*Phi^d", "Delta"};
  m.cells.assign(m.row_names.size(), std::vector<double>(nk + 1, 0.0));
  m.cells[0][0] = vsum(r.load_energy_base);
  m.cells[2][0] = vsum(r.gen_energy_base);
  m.cells[8][0] = r.congestion_base;
  for (int k = 0; k < nk; ++k) {
    const double eps = c.scenarios[k].probability;
    m.cells[0][k + 1] = vsum(r.load_energy_k[k]);
    m.cells[1][k + 1] = vsum(r.fluctuation_k[k]);
    m.cells[2][k + 1] = vsum(r.gen_energy_k[k]);
    m.cells[3][k + 1] = vsum(r.reserve_up_k[k]);
    m.cells[4][k + 1] = vsum(r.reserve_dn_k[k]);
    m.cells[5][k + 1] = eps * vsum(r.redispatch_up_k[k]);
    m.cells[6][k + 1] = eps * vsum(r.redispatch_dn_k[k]);
    m.cells[7][k + 1] = eps * vsum(r.shed_comp_k[k]);
    m.cells[8][k + 1] = r.congestion_k[k];
  }
  return m;
}

std::string money_flow_csv(const MarketCase& c, const SettlementReport& r) {
  const MoneyFlowMatrix m = money_flow_matrix(c, r);
  std::ostringstream os;
  os << "row,Base";
  for (const auto& k : c.scenarios) os << "," << k.id;
  os << ",Total\n";
  auto fmt1 = [](double v) {
    if (std::abs(v) < 5e-12) v = 0.0;  // avoid "-0.0" cells
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return std::string(buf);
  };
  for (std::size_t row = 0; row < m.row_names.size(); ++row) {
    os << m.row_names[row];
    double total = 0.0;
    for (double v : m.cells[row]) total += v;
    for (double v : m.cells[row]) os << "," << fmt1(v);
    os << "," << fmt1(total) << "\n";
  }
  if (r.realized_scenario) {
    // Actual (not probability-weighted) re-adjustment payments of the
    // realized scenario.
    const int k = *r.realized_scenario;
    const int nk = static_cast<int>(c.scenarios.size());
    auto realized_row = [&](const char* name, double value) {
      os << name;
      for (int col = 0; col <= nk; ++col) os << "," << fmt1(col == k + 1 ? value : 0.0);
      os << "," << fmt1(value) << "\n";
    };
    double up = 0.0, dn = 0.0, shed = 0.0;
    for (double v : r.redispatch_up_k[k]) up += v;
    for (double v : r.redispatch_dn_k[k]) dn += v;
    for (double v : r.shed_comp_k[k]) shed += v;
    realized_row("Phi^U(realized)", up);
    realized_row("Phi^D(realized)", dn);
    realized_row("Phi^d(realized)", shed);
  }
  return os.str();
}

}  // namespace coopt
