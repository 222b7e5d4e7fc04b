#include "coopt/reports_io.hpp"

#include <sstream>

#include <json.hpp>

namespace coopt {

using nlohmann::json;

namespace {

json vec(const std::vector<double>& v) { return json(v); }

std::vector<double> dvec(const json& j) { return j.get<std::vector<double>>(); }

json mat(const std::vector<std::vector<double>>& m) {
  json out = json::array();
  for (const auto& row : m) out.push_back(row);
  return out;
}

std::vector<std::vector<double>> dmat(const json& j) {
  std::vector<std::vector<double>> out;
  for (const auto& row : j) out.push_back(row.get<std::vector<double>>());
  return out;
}

}  // namespace

std::string clearing_to_json(const MarketCase& c, const ClearingSolution& s) {
  json j;
  j["case"] = c.name;
  j["status"] = s.status == LpStatus::Optimal
                    ? "optimal"
                    : (s.status == LpStatus::Infeasible ? "infeasible" : "unbounded");
  j["objective"] = s.objective;
  j["g"] = vec(s.g);
  j["r_up"] = vec(s.r_up);
  j["r_dn"] = vec(s.r_dn);
  json adj = json::array();
  for (const auto& a : s.adjustments)
    adj.push_back({{"redispatch_up", a.redispatch_up},
                   {"redispatch_down", a.redispatch_down},
                   {"shed", a.shed}});
  j["adjustments"] = adj;
  const ClearingDuals& d = s.duals;
  j["duals"] = {{"lambda", d.lambda},
                {"mu_base", d.mu_base},
                {"lambda_k", d.lambda_k},
                {"mu_k", mat(d.mu_k)},
                {"surviving_lines", d.surviving_lines},
                {"cap_hi", d.cap_hi},
                {"cap_lo", d.cap_lo},
                {"res_up_lo", d.res_up_lo},
                {"res_up_hi", d.res_up_hi},
                {"res_dn_lo", d.res_dn_lo},
                {"res_dn_hi", d.res_dn_hi},
                {"alpha_hi", mat(d.alpha_hi)},
                {"alpha_lo", mat(d.alpha_lo)},
                {"beta_hi", mat(d.beta_hi)},
                {"beta_lo", mat(d.beta_lo)},
                {"tau_hi", mat(d.tau_hi)},
                {"tau_lo", mat(d.tau_lo)},
                {"nodal_price_base", d.nodal_price_base},
                {"nodal_price_k", mat(d.nodal_price_k)}};
  j["kkt"] = {{"primal", s.kkt.primal},
              {"dual", s.kkt.dual},
              {"compl_slack", s.kkt.compl_slack},
              {"duality_gap", s.kkt.duality_gap}};
  return j.dump(2) + "\n";
}

ClearingSolution clearing_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid solution JSON: ") + e.what());
  }
  ClearingSolution s;
  std::string st = j.value("status", "optimal");
  s.status = st == "optimal" ? LpStatus::Optimal
                             : (st == "infeasible" ? LpStatus::Infeasible
                                                   : LpStatus::Unbounded);
  s.objective = j["objective"].get<double>();
  s.g = dvec(j["g"]);
  s.r_up = dvec(j["r_up"]);
  s.r_dn = dvec(j["r_dn"]);
  for (const auto& a : j["adjustments"]) {
    ScenarioAdjustment adj;
    adj.redispatch_up = dvec(a["redispatch_up"]);
    adj.redispatch_down = dvec(a["redispatch_down"]);
    adj.shed = dvec(a["shed"]);
    s.adjustments.push_back(std::move(adj));
  }
  const json& d = j["duals"];
  s.duals.lambda = d["lambda"].get<double>();
  s.duals.mu_base = dvec(d["mu_base"]);
  s.duals.lambda_k = dvec(d["lambda_k"]);
  s.duals.mu_k = dmat(d["mu_k"]);
  s.duals.surviving_lines = d["surviving_lines"].get<std::vector<std::vector<std::string>>>();
  s.duals.cap_hi = dvec(d["cap_hi"]);
  s.duals.cap_lo = dvec(d["cap_lo"]);
  s.duals.res_up_lo = dvec(d["res_up_lo"]);
  s.duals.res_up_hi = dvec(d["res_up_hi"]);
  s.duals.res_dn_lo = dvec(d["res_dn_lo"]);
  s.duals.res_dn_hi = dvec(d["res_dn_hi"]);
  s.duals.alpha_hi = dmat(d["alpha_hi"]);
  s.duals.alpha_lo = dmat(d["alpha_lo"]);
  s.duals.beta_hi = dmat(d["beta_hi"]);
  s.duals.beta_lo = dmat(d["beta_lo"]);
  s.duals.tau_hi = dmat(d["tau_hi"]);
  s.duals.tau_lo = dmat(d["tau_lo"]);
  s.duals.nodal_price_base = dvec(d["nodal_price_base"]);
  s.duals.nodal_price_k = dmat(d["nodal_price_k"]);
  s.kkt.primal = j["kkt"]["primal"].get<double>();
  s.kkt.dual = j["kkt"]["dual"].get<double>();
  s.kkt.compl_slack = j["kkt"]["compl_slack"].get<double>();
  s.kkt.duality_gap = j["kkt"]["duality_gap"].get<double>();
  return s;
}

std::string prices_to_json(const MarketCase& c, const PriceReport& p) {
  json j;
  j["case"] = c.name;
  j["buses"] = c.network.buses;
  j["omega0"] = p.omega0;
  j["omega_k"] = mat(p.omega_k);
  j["eta_g"] = p.eta_g;
  j["eta_up"] = p.eta_up;
  j["eta_dn"] = p.eta_dn;
  j["eta_d"] = p.eta_d;
  j["tau_sum"] = p.tau_sum;
  j["full_shed_flagged"] = p.full_shed_flagged;
  return j.dump(2) + "\n";
}

std::string settlement_to_json(const MarketCase& c, const SettlementReport& r) {
  json j;
  j["case"] = c.name;
  j["scheme"] = r.scheme == FluctuationScheme::ExAnte ? "ex-ante" : "ex-post";
  if (r.realized_scenario) j["realized_scenario"] = c.scenarios[*r.realized_scenario].id;
  j["gen_energy_base"] = r.gen_energy_base;
  j["gen_energy_k"] = mat(r.gen_energy_k);
  j["reserve_up_k"] = mat(r.reserve_up_k);
  j["reserve_dn_k"] = mat(r.reserve_dn_k);
  j["redispatch_up_k"] = mat(r.redispatch_up_k);
  j["redispatch_dn_k"] = mat(r.redispatch_dn_k);
  j["total_up_k"] = mat(r.total_up_k);
  j["total_dn_k"] = mat(r.total_dn_k);
  j["load_energy_base"] = r.load_energy_base;
  j["load_energy_k"] = mat(r.load_energy_k);
  j["fluctuation_k"] = mat(r.fluctuation_k);
  j["shed_comp_k"] = mat(r.shed_comp_k);
  j["congestion_base"] = r.congestion_base;
  j["congestion_k"] = r.congestion_k;
  j["balance_residuals"] = r.balance_residuals;
  return j.dump(2) + "\n";
}

std::string prices_csv(const MarketCase& c, const PriceReport& p) {
  std::ostringstream os;
  os << "bus,omega0";
  for (const auto& k : c.scenarios) os << ",omega_" << k.id;
  os << "\n";
  os.precision(17);
  for (int b = 0; b < c.network.bus_count(); ++b) {
    os << c.network.buses[b] << ',' << p.omega0[b];
    for (std::size_t k = 0; k < c.scenarios.size(); ++k) os << ',' << p.omega_k[k][b];
    os << "\n";
  }
  os << "\ngenerator,eta_g,eta_U,eta_D\n";
  for (std::size_t j = 0; j < c.generators.size(); ++j)
    os << c.generators[j].id << ',' << p.eta_g[j] << ',' << p.eta_up[j] << ','
       << p.eta_dn[j] << "\n";
  os << "\nload,eta_d,tau_sum\n";
  for (std::size_t l = 0; l < c.loads.size(); ++l)
    os << c.loads[l].id << ',' << p.eta_d[l] << ',' << p.tau_sum[l] << "\n";
  return os.str();
}

void save_clearing(const MarketCase& c, const ClearingSolution& s, const std::string& path) {
  write_text_file(path, clearing_to_json(c, s));
}

ClearingSolution load_clearing(const std::string& path) {
  return clearing_from_json(read_text_file(path));
}

}  // namespace coopt
