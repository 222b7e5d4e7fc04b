#include "coopt/case.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace coopt {

using nlohmann::json;

int MarketCase::generator_index(const std::string& id) const {
  for (std::size_t i = 0; i < generators.size(); ++i)
    if (generators[i].id == id) return static_cast<int>(i);
  throw ValidationError("generators", "unknown generator '" + id + "'");
}

int MarketCase::load_index(const std::string& id) const {
  for (std::size_t i = 0; i < loads.size(); ++i)
    if (loads[i].id == id) return static_cast<int>(i);
  throw ValidationError("loads", "unknown load '" + id + "'");
}

int MarketCase::scenario_index(const std::string& id) const {
  for (std::size_t i = 0; i < scenarios.size(); ++i)
    if (scenarios[i].id == id) return static_cast<int>(i);
  throw UnknownScenario("unknown scenario '" + id + "'");
}

double MarketCase::base_probability() const {
  double s = 0.0;
  for (const auto& k : scenarios) s += k.probability;
  return 1.0 - s;
}

double MarketCase::total_demand() const {
  double s = 0.0;
  for (const auto& l : loads) s += l.demand;
  return s;
}

double MarketCase::scenario_demand(const Load& load, const Scenario& scen) const {
  auto it = load.fluctuation.find(scen.id);
  return load.demand + (it == load.fluctuation.end() ? 0.0 : it->second);
}

bool MarketCase::zero_min_generation() const {
  return std::all_of(generators.begin(), generators.end(),
                     [](const Generator& g) { return g.g_min == 0.0; });
}

void MarketCase::validate() const {
  network.validate();
  if (generators.empty()) throw ValidationError("generators", "at least one required");
  if (loads.empty()) throw ValidationError("loads", "at least one required");

  std::set<std::string> gids, lids, sids;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    const Generator& g = generators[i];
    const std::string path = "generators[" + std::to_string(i) + "]";
    if (!gids.insert(g.id).second) throw ValidationError(path, "duplicate id " + g.id);
    network.bus_index(g.bus);
    if (g.g_min < 0 || g.g_min > g.g_max)
      throw ValidationError(path + ".g_min", "need 0 <= g_min <= g_max");
    if (g.ramp_up < 0 || g.ramp_down < 0)
      throw ValidationError(path + ".ramp", "ramp limits must be >= 0");
    for (double p : {g.c_energy, g.c_res_up, g.c_res_down, g.c_redisp_up, g.c_redisp_down})
      if (!std::isfinite(p)) throw ValidationError(path, "non-finite price");
  }
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const Scenario& k = scenarios[i];
    const std::string path = "scenarios[" + std::to_string(i) + "]";
    if (!sids.insert(k.id).second) throw ValidationError(path, "duplicate id " + k.id);
    if (!(k.probability > 0.0) || !(k.probability < 1.0))
      throw ValidationError(path + ".probability", "must lie in (0,1)");
    for (const auto& lid : k.outaged_line_ids) network.line_index(lid);
    if (!network.connected_without(k.outaged_line_ids))
      throw ValidationError(path + ".outaged_lines", "outage islands the network");
  }
  double psum = 0.0;
  for (const auto& k : scenarios) psum += k.probability;
  if (psum >= 1.0)
    throw ValidationError("scenarios", "probabilities sum to " + std::to_string(psum) +
                                           " >= 1");
  for (std::size_t i = 0; i < loads.size(); ++i) {
    const Load& l = loads[i];
    const std::string path = "loads[" + std::to_string(i) + "]";
    if (!lids.insert(l.id).second) throw ValidationError(path, "duplicate id " + l.id);
    network.bus_index(l.bus);
    if (l.demand < 0) throw ValidationError(path + ".demand", "must be >= 0");
    if (!std::isfinite(l.c_shed)) throw ValidationError(path + ".c_shed", "non-finite");
    for (const auto& [sid, pi] : l.fluctuation) {
      if (!sids.count(sid))
        throw ValidationError(path + ".fluctuation", "unknown scenario '" + sid + "'");
      if (!std::isfinite(pi)) throw ValidationError(path + ".fluctuation." + sid, "non-finite");
      if (l.demand + pi < 0)
        throw ValidationError(path + ".fluctuation." + sid,
                              "demand + fluctuation < 0 in scenario " + sid);
    }
  }
  if (options.feas_tol <= 0 || options.dual_tol <= 0 || options.settlement_tol <= 0)
    throw ValidationError("options", "tolerances must be > 0");
  if (options.infeasible_recourse_penalty < 0)
    throw ValidationError("options.infeasible_recourse_penalty", "must be >= 0");
  for (const auto& [gid, anchor] : options.ramp_anchor) {
    if (!gids.count(gid))
      throw ValidationError("options.ramp_anchor", "unknown generator '" + gid + "'");
    if (!std::isfinite(anchor))
      throw ValidationError("options.ramp_anchor." + gid, "non-finite");
  }
  if (!options.reference_bus.empty()) network.bus_index(options.reference_bus);
}

namespace {

double require_number(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw ParseError(path + "." + key + ": missing or non-numeric");
  return j[key].get<double>();
}

std::string require_string(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key) || !j[key].is_string())
    throw ParseError(path + "." + key + ": missing or non-string");
  return j[key].get<std::string>();
}

}  // namespace

MarketCase case_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  MarketCase c;
  c.name = j.value("name", "unnamed");
  if (!j.contains("buses") || !j["buses"].is_array())
    throw ParseError("buses: missing or not an array");
  for (const auto& b : j["buses"]) c.network.buses.push_back(b.get<std::string>());

  if (j.contains("lines"))
    for (std::size_t i = 0; i < j["lines"].size(); ++i) {
      const json& lj = j["lines"][i];
      const std::string path = "lines[" + std::to_string(i) + "]";
      Line ln;
      ln.id = require_string(lj, path, "id");
      ln.from_bus = require_string(lj, path, "from");
      ln.to_bus = require_string(lj, path, "to");
      ln.reactance = require_number(lj, path, "reactance");
      ln.capacity_base = require_number(lj, path, "capacity_base");
      ln.capacity_scenario = require_number(lj, path, "capacity_scenario");
      c.network.lines.push_back(std::move(ln));
    }

  if (!j.contains("generators") || !j["generators"].is_array())
    throw ParseError("generators: missing or not an array");
  for (std::size_t i = 0; i < j["generators"].size(); ++i) {
    const json& gj = j["generators"][i];
    const std::string path = "generators[" + std::to_string(i) + "]";
    Generator g;
    g.id = require_string(gj, path, "id");
    g.bus = require_string(gj, path, "bus");
    g.g_max = require_number(gj, path, "g_max");
    g.g_min = gj.value("g_min", 0.0);
    g.ramp_up = require_number(gj, path, "ramp_up");
    g.ramp_down = require_number(gj, path, "ramp_down");
    g.c_energy = require_number(gj, path, "c_energy");
    g.c_res_up = require_number(gj, path, "c_res_up");
    g.c_res_down = require_number(gj, path, "c_res_down");
    g.c_redisp_up = gj.contains("c_redisp_up") ? gj["c_redisp_up"].get<double>() : g.c_energy;
    g.c_redisp_down =
        gj.contains("c_redisp_down") ? gj["c_redisp_down"].get<double>() : g.c_energy;
    c.generators.push_back(std::move(g));
  }

  if (!j.contains("loads") || !j["loads"].is_array())
    throw ParseError("loads: missing or not an array");
  for (std::size_t i = 0; i < j["loads"].size(); ++i) {
    const json& lj = j["loads"][i];
    const std::string path = "loads[" + std::to_string(i) + "]";
    Load l;
    l.id = require_string(lj, path, "id");
    l.bus = require_string(lj, path, "bus");
    l.demand = require_number(lj, path, "demand");
    l.c_shed = require_number(lj, path, "c_shed");
    if (lj.contains("fluctuation"))
      for (auto it = lj["fluctuation"].begin(); it != lj["fluctuation"].end(); ++it)
        l.fluctuation[it.key()] = it.value().get<double>();
    c.loads.push_back(std::move(l));
  }

  if (j.contains("scenarios"))
    for (std::size_t i = 0; i < j["scenarios"].size(); ++i) {
      const json& sj = j["scenarios"][i];
      const std::string path = "scenarios[" + std::to_string(i) + "]";
      Scenario s;
      s.id = require_string(sj, path, "id");
      s.probability = require_number(sj, path, "probability");
      if (sj.contains("outaged_lines"))
        for (const auto& ol : sj["outaged_lines"]) s.outaged_line_ids.insert(ol.get<std::string>());
      c.scenarios.push_back(std::move(s));
    }

  if (j.contains("options")) {
    const json& oj = j["options"];
    c.options.feas_tol = oj.value("feas_tol", 1e-9);
    c.options.dual_tol = oj.value("dual_tol", 1e-7);
    c.options.settlement_tol = oj.value("settlement_tol", 1e-6);
    c.options.infeasible_recourse_penalty = oj.value("infeasible_recourse_penalty", 20000.0);
    c.options.reference_bus = oj.value("reference_bus", std::string{});
    if (oj.contains("ramp_anchor"))
      for (auto it = oj["ramp_anchor"].begin(); it != oj["ramp_anchor"].end(); ++it)
        c.options.ramp_anchor[it.key()] = it.value().get<double>();
  }

  if (c.options.reference_bus.empty() && !c.network.buses.empty())
    c.network.reference_bus = c.network.buses.front();
  else
    c.network.reference_bus = c.options.reference_bus;

  c.validate();
  return c;
}

std::string case_to_json_text(const MarketCase& c) {
  json j;
  j["name"] = c.name;
  j["buses"] = c.network.buses;
  j["lines"] = json::array();
  for (const auto& ln : c.network.lines)
    j["lines"].push_back({{"id", ln.id},
                          {"from", ln.from_bus},
                          {"to", ln.to_bus},
                          {"reactance", ln.reactance},
                          {"capacity_base", ln.capacity_base},
                          {"capacity_scenario", ln.capacity_scenario}});
  j["generators"] = json::array();
  for (const auto& g : c.generators)
    j["generators"].push_back({{"id", g.id},
                               {"bus", g.bus},
                               {"g_max", g.g_max},
                               {"g_min", g.g_min},
                               {"ramp_up", g.ramp_up},
                               {"ramp_down", g.ramp_down},
                               {"c_energy", g.c_energy},
                               {"c_res_up", g.c_res_up},
                               {"c_res_down", g.c_res_down},
                               {"c_redisp_up", g.c_redisp_up},
                               {"c_redisp_down", g.c_redisp_down}});
  j["loads"] = json::array();
  for (const auto& l : c.loads) {
    json fj = json::object();
    for (const auto& [k, v] : l.fluctuation) fj[k] = v;
    j["loads"].push_back({{"id", l.id},
                          {"bus", l.bus},
                          {"demand", l.demand},
                          {"c_shed", l.c_shed},
                          {"fluctuation", fj}});
  }
  j["scenarios"] = json::array();
  for (const auto& s : c.scenarios) {
    json sj = {{"id", s.id}, {"probability", s.probability}};
    sj["outaged_lines"] = json::array();
    for (const auto& ol : s.outaged_line_ids) sj["outaged_lines"].push_back(ol);
    j["scenarios"].push_back(sj);
  }
  json oj;
  oj["feas_tol"] = c.options.feas_tol;
  oj["dual_tol"] = c.options.dual_tol;
  oj["settlement_tol"] = c.options.settlement_tol;
  oj["infeasible_recourse_penalty"] = c.options.infeasible_recourse_penalty;
  if (!c.options.reference_bus.empty()) oj["reference_bus"] = c.options.reference_bus;
  if (!c.options.ramp_anchor.empty()) {
    json aj = json::object();
    for (const auto& [k, v] : c.options.ramp_anchor) aj[k] = v;
    oj["ramp_anchor"] = aj;
  }
  j["options"] = oj;
  return j.dump(2) + "\n";
}

MarketCase load_case(const std::string& path) {
  return case_from_json_text(read_text_file(path));
}

MarketCase builtin_two_bus() {
  MarketCase c;
  c.name = "two_bus";
  c.network.buses = {"bus1", "bus2"};
  c.network.reference_bus = "bus1";
  c.network.lines.push_back({"L1a", "bus1", "bus2", 0.1, 1.0, 1.2});
  c.network.lines.push_back({"L1b", "bus1", "bus2", 0.1, 1.0, 1.2});

  auto gen = [](std::string id, std::string bus, double gmax, double cg, double cu,
                double cd) {
    Generator g;
    g.id = std::move(id);
    g.bus = std::move(bus);
    g.g_max = gmax;
    g.g_min = 0.0;
    g.ramp_up = 4.0;
    g.ramp_down = 4.0;
    g.c_energy = cg;
    g.c_res_up = cu;
    g.c_res_down = cd;
    g.c_redisp_up = cg;    // re-dispatch prices set to the energy bids
    g.c_redisp_down = cg;
    return g;
  };
  c.generators = {gen("G1", "bus1", 16.0, 8.0, 2.0, 2.0),
                  gen("G2", "bus2", 18.0, 15.0, 2.0, 2.0),
                  gen("G3", "bus2", 12.0, 20.0, 2.5, 2.5)};

  const double shed_price = 350.0;
  Load l1{"L1", "bus1", 6.0, shed_price, {{"S2", 2.0}, {"S3", 3.0}, {"S4", 2.0}, {"S5", 3.0}}};
  Load l2{"L2", "bus2", 15.0, shed_price, {{"S2", 6.0}, {"S3", 2.0}, {"S4", 6.0}, {"S5", 2.0}}};
  Load l3{"L3", "bus2", 4.0, shed_price, {{"S2", -1.0}, {"S3", -3.0}, {"S4", -1.0}, {"S5", -3.0}}};
  c.loads = {l1, l2, l3};

  c.scenarios = {{"S1", 0.06, {"L1b"}},
                 {"S2", 0.02, {"L1b"}},
                 {"S3", 0.02, {"L1b"}},
                 {"S4", 0.18, {}},
                 {"S5", 0.18, {}}};
  c.validate();
  return c;
}

void write_text_file(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open '" + tmp.string() + "' for writing");
    os << contents;
    if (!os) throw IoError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw IoError("rename to '" + path + "' failed: " + ec.message());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace coopt
