#include "coopt/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "coopt/clearing.hpp"

namespace coopt {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double substream_uniform(std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t r = splitmix64(splitmix64(seed) ^ (trial * 0xd1342543de82ef95ull + 1));
  return (r >> 11) * 0x1.0p-53;  // [0, 1)
}

// Order-independent compensated accumulator.
struct Kahan {
  double sum = 0.0, comp = 0.0;
  void add(double v) {
    double y = v - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

int draw_scenario(const MarketCase& c, std::uint64_t seed, std::uint64_t trial) {
  double u = substream_uniform(seed, trial);
  double acc = c.base_probability();
  if (u < acc) return -1;
  for (std::size_t k = 0; k < c.scenarios.size(); ++k) {
    acc += c.scenarios[k].probability;
    if (u < acc) return static_cast<int>(k);
  }
  return static_cast<int>(c.scenarios.size()) - 1;
}

std::vector<int> sample_scenarios(const MarketCase& c, int n, std::uint64_t seed) {
  if (n < 1) throw ValidationError("samples", "need at least one sample");
  std::vector<int> out(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t)
    out[static_cast<std::size_t>(t)] = draw_scenario(c, seed, static_cast<std::uint64_t>(t));
  return out;
}

ComparisonResult compare_models(const MarketCase& c, const std::vector<double>& fractions,
                                int mode_samples, std::uint64_t seed) {
  ComparisonResult result;
  result.monte_carlo = mode_samples > 0;
  result.samples = mode_samples;
  result.seed = seed;
  result.proposed_total = clear_cooptimization(c).objective;

  const double total_load = c.total_demand();
  const int nk = static_cast<int>(c.scenarios.size());

  // Empirical scenario frequencies for Monte Carlo mode; recourse cost per
  // scenario is deterministic, so one solve per scenario is enough.
  std::vector<double> weight(static_cast<std::size_t>(nk) + 1, 0.0);  // [0]=base
  if (result.monte_carlo) {
    std::vector<Kahan> counts(static_cast<std::size_t>(nk) + 1);
    for (int t = 0; t < mode_samples; ++t) {
      int k = draw_scenario(c, seed, static_cast<std::uint64_t>(t));
      counts[static_cast<std::size_t>(k + 1)].add(1.0);
    }
    for (std::size_t i = 0; i < weight.size(); ++i)
      weight[i] = counts[i].sum / mode_samples;
  } else {
    weight[0] = c.base_probability();
    for (int k = 0; k < nk; ++k)
      weight[static_cast<std::size_t>(k) + 1] = c.scenarios[k].probability;
  }

  for (double frac : fractions) {
    if (frac < 0) throw ValidationError("grid", "fractions must be >= 0");
    ComparisonPoint pt;
    pt.fraction = frac;
    pt.requirement = frac * total_load;
    TraditionalSolution trad = clear_traditional(c, pt.requirement, pt.requirement);
    if (trad.status != LpStatus::Optimal) {
      result.points.push_back(pt);
      continue;
    }
    pt.feasible = true;
    pt.base_cost = trad.objective;
    Kahan rec;
    for (int k = 0; k < nk; ++k) {
      RecourseResult rr =
          solve_recourse(c, c.scenarios[k].id, trad.g, trad.r_up, trad.r_dn);
      if (!rr.feasible) pt.infeasible_samples += 1;
      rec.add(weight[static_cast<std::size_t>(k) + 1] * rr.cost);
    }
    pt.avg_recourse = rec.sum;  // base realization re-adjusts nothing
    pt.avg_total = pt.base_cost + pt.avg_recourse;
    result.points.push_back(pt);
  }
  return result;
}

VolatilityResult volatility_study(const MarketCase& c, int n, std::uint64_t seed) {
  if (c.scenarios.empty())
    throw ValidationError("scenarios", "volatility study needs at least one scenario");
  if (n < 1) throw ValidationError("samples", "need at least one trial");

  const ClearingSolution sol = clear_cooptimization(c);
  const PriceReport prices = compute_prices(c, sol);
  const SettlementReport st = settle(c, sol, prices, FluctuationScheme::ExAnte);
  const MoneyFlowMatrix m = money_flow_matrix(c, st);
  const CongestionRent rent = congestion_rent(c, sol);
  const int nk = static_cast<int>(c.scenarios.size());

  // Scenario-independent money blocks.
  double load_energy = 0.0, gen_energy = 0.0, reserve_credit = 0.0;
  load_energy += m.cells[0][0];
  gen_energy += m.cells[2][0];
  for (int k = 0; k < nk; ++k) {
    load_energy += m.cells[0][k + 1];
    gen_energy += m.cells[2][k + 1];
    reserve_credit += m.cells[3][k + 1] + m.cells[4][k + 1];
  }
  double ex_ante_pi = 0.0;
  for (int k = 0; k < nk; ++k) ex_ante_pi += m.cells[1][k + 1];

  // Realized-scenario re-adjustment payments (not probability-scaled) and
  // the realized ex-post fluctuation payment.
  std::vector<double> phi_realized(static_cast<std::size_t>(nk) + 1, 0.0);
  std::vector<double> expost_pi(static_cast<std::size_t>(nk) + 1, 0.0);
  for (int k = 0; k < nk; ++k) {
    double phi = 0.0;
    for (std::size_t j = 0; j < c.generators.size(); ++j)
      phi += st.redispatch_up_k[k][j] + st.redispatch_dn_k[k][j];
    for (std::size_t l = 0; l < c.loads.size(); ++l) phi += st.shed_comp_k[k][l];
    phi_realized[static_cast<std::size_t>(k) + 1] = phi;
    double pik = 0.0;
    for (std::size_t l = 0; l < c.loads.size(); ++l) {
      auto it = c.loads[l].fluctuation.find(c.scenarios[k].id);
      double pi = it == c.loads[l].fluctuation.end() ? 0.0 : it->second;
      pik += prices.omega_k[k][c.network.bus_index(c.loads[l].bus)] / c.scenarios[k].probability * pi;
    }
    expost_pi[static_cast<std::size_t>(k) + 1] = pik;
  }

  VolatilityResult out;
  out.seed = seed;
  out.ex_ante_payment = ex_ante_pi;
  out.realized.resize(static_cast<std::size_t>(n));
  out.ex_post_payment.resize(static_cast<std::size_t>(n));
  out.net_revenue_ex_ante.resize(static_cast<std::size_t>(n));
  out.net_revenue_ex_post.resize(static_cast<std::size_t>(n));

  Kahan mean_a, mean_p, mean_pay_p, sq_pay_p;
  for (int t = 0; t < n; ++t) {
    int k = draw_scenario(c, seed, static_cast<std::uint64_t>(t));
    out.realized[static_cast<std::size_t>(t)] = k;
    const std::size_t kk = static_cast<std::size_t>(k + 1);
    const double phi = phi_realized[kk];
    const double pay_post = expost_pi[kk];
    // Net operator revenue with the congestion rent handed off: load energy
    // payments + fluctuation payments - generator credits - realized
    // re-adjustment - congestion rent.
    double net_a = load_energy + ex_ante_pi - gen_energy - reserve_credit - phi - rent.total;
    double net_p = load_energy + pay_post - gen_energy - reserve_credit - phi - rent.total;
    out.ex_post_payment[static_cast<std::size_t>(t)] = pay_post;
    out.net_revenue_ex_ante[static_cast<std::size_t>(t)] = net_a;
    out.net_revenue_ex_post[static_cast<std::size_t>(t)] = net_p;
    mean_a.add(net_a);
    mean_p.add(net_p);
    mean_pay_p.add(pay_post);
    sq_pay_p.add(pay_post * pay_post);
  }
  out.mean_net_ex_ante = mean_a.sum / n;
  out.mean_net_ex_post = mean_p.sum / n;
  out.var_ex_ante_payment = 0.0;  // constant by construction
  const double mp = mean_pay_p.sum / n;
  out.var_ex_post_payment = std::max(0.0, sq_pay_p.sum / n - mp * mp);
  return out;
}

std::vector<SweepPoint> sensitivity_sweep(const MarketCase& c, const std::string& gen_id,
                                          SweepParameter parameter,
                                          const std::vector<double>& values) {
  const int j = c.generator_index(gen_id);
  std::vector<SweepPoint> out;
  for (double v : values) {
    if (!std::isfinite(v)) throw ValidationError("sweep", "non-finite parameter value");
    MarketCase cc = c;
    if (parameter == SweepParameter::RedispatchUp)
      cc.generators[j].c_redisp_up = v;
    else
      cc.generators[j].c_redisp_down = v;
    ClearingSolution sol = clear_cooptimization(cc);
    PriceReport p = compute_prices(cc, sol);
    SweepPoint pt;
    pt.value = v;
    pt.reserve_price = parameter == SweepParameter::RedispatchUp ? p.eta_up[j] : p.eta_dn[j];
    out.push_back(pt);
  }
  return out;
}

namespace {

std::string fnum(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::string comparison_csv(const ComparisonResult& r) {
  std::ostringstream os;
  if (r.monte_carlo)
    os << "# mode=mc rng=splitmix64 seed=" << r.seed << " samples=" << r.samples << "\n";
  else
    os << "# mode=exact\n";
  os << "fraction,requirement,feasible,base_cost,avg_recourse,avg_total,"
        "infeasible_samples,proposed_total\n";
  for (const auto& pt : r.points) {
    os << fnum(pt.fraction) << ',' << fnum(pt.requirement) << ',' << (pt.feasible ? 1 : 0)
       << ',' << fnum(pt.base_cost) << ',' << fnum(pt.avg_recourse) << ','
       << fnum(pt.avg_total) << ',' << pt.infeasible_samples << ','
       << fnum(r.proposed_total) << "\n";
  }
  return os.str();
}

std::string volatility_csv(const VolatilityResult& r) {
  std::ostringstream os;
  os << "# rng=" << r.rng_name << " seed=" << r.seed << "\n";
  os << "trial,realized,ex_ante_payment,ex_post_payment,net_ex_ante,net_ex_post\n";
  Kahan run_a, run_p;
  for (std::size_t t = 0; t < r.realized.size(); ++t) {
    run_a.add(r.net_revenue_ex_ante[t]);
    run_p.add(r.net_revenue_ex_post[t]);
    os << t << ',' << r.realized[t] << ',' << fnum(r.ex_ante_payment) << ','
       << fnum(r.ex_post_payment[t]) << ',' << fnum(run_a.sum / static_cast<double>(t + 1))
       << ',' << fnum(run_p.sum / static_cast<double>(t + 1)) << "\n";
  }
  return os.str();
}

std::string sweep_csv(const std::vector<SweepPoint>& pts) {
  std::ostringstream os;
  os << "value,reserve_price\n";
  for (const auto& pt : pts) os << fnum(pt.value) << ',' << fnum(pt.reserve_price) << "\n";
  return os.str();
}

}  // namespace coopt
