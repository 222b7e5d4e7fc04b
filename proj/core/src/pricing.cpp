#include "coopt/pricing.hpp"

#include <cmath>

namespace coopt {

namespace {

void require_duals(const MarketCase& c, const ClearingSolution& s) {
  if (s.status != LpStatus::Optimal || s.duals.lambda_k.size() != c.scenarios.size() ||
      s.duals.mu_base.size() != static_cast<std::size_t>(c.network.line_count()))
    throw MissingDuals("solution carries no usable dual set");
}

}  // namespace

PriceReport compute_prices(const MarketCase& c, const ClearingSolution& s) {
  require_duals(c, s);
  const int nb = c.network.bus_count();
  const int nk = static_cast<int>(c.scenarios.size());
  const PtdfSet ptdf = make_ptdf_set(c);

  PriceReport r;
  r.omega0.assign(nb, 0.0);
  for (int b = 0; b < nb; ++b) {
    double congestion = 0.0;
    for (int li = 0; li < c.network.line_count(); ++li)
      congestion += ptdf.base(li, b) * s.duals.mu_base[li];
    r.omega0[b] = s.duals.lambda - congestion;
  }
  r.omega_k.assign(nk, std::vector<double>(nb, 0.0));
  for (int k = 0; k < nk; ++k) {
    const Eigen::MatrixXd& Sk = ptdf.per_scenario.at(c.scenarios[k].id);
    for (int b = 0; b < nb; ++b) {
      double congestion = 0.0;
      for (int li = 0; li < Sk.rows(); ++li)
        congestion += Sk(li, b) * s.duals.mu_k[k][li];
      r.omega_k[k][b] = s.duals.lambda_k[k] - congestion;
    }
  }

  const int ng = static_cast<int>(c.generators.size());
  const int nl = static_cast<int>(c.loads.size());
  r.eta_g.resize(ng);
  r.eta_up.resize(ng);
  r.eta_dn.resize(ng);
  for (int j = 0; j < ng; ++j) {
    int b = c.network.bus_index(c.generators[j].bus);
    double eta = r.omega0[b];
    double up = 0.0, dn = 0.0;
    for (int k = 0; k < nk; ++k) {
      eta += r.omega_k[k][b];
      up += s.duals.alpha_hi[k][j];
      dn += s.duals.beta_hi[k][j];
    }
    r.eta_g[j] = eta;
    r.eta_up[j] = up;
    r.eta_dn[j] = dn;
  }
  r.eta_d.resize(nl);
  r.tau_sum.assign(nl, 0.0);
  for (int l = 0; l < nl; ++l) {
    int b = c.network.bus_index(c.loads[l].bus);
    double eta = r.omega0[b];
    for (int k = 0; k < nk; ++k) {
      eta += r.omega_k[k][b];
      r.tau_sum[l] += s.duals.tau_hi[k][l];
    }
    r.eta_d[l] = eta - r.tau_sum[l];
    if (r.tau_sum[l] > c.options.dual_tol) r.full_shed_flagged = true;
  }
  return r;
}

PriceComponents price_decomposition(const MarketCase& c, const ClearingSolution& s,
                                    const std::string& bus,
                                    const std::string& scenario_id) {
  require_duals(c, s);
  const int b = c.network.bus_index(bus);
  const PtdfSet ptdf = make_ptdf_set(c);
  PriceComponents pc;
  if (scenario_id.empty()) {
    pc.energy = s.duals.lambda;
    for (int li = 0; li < c.network.line_count(); ++li)
      pc.congestion -= ptdf.base(li, b) * s.duals.mu_base[li];
    return pc;
  }
  const int k = c.scenario_index(scenario_id);
  const Eigen::MatrixXd& Sk = ptdf.per_scenario.at(scenario_id);
  pc.energy = s.duals.lambda_k[k];
  for (int li = 0; li < Sk.rows(); ++li)
    pc.congestion -= Sk(li, b) * s.duals.mu_k[k][li];
  return pc;
}

}  // namespace coopt
