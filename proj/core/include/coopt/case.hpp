#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coopt/network.hpp"

namespace coopt {

struct Generator {
  std::string id;
  std::string bus;
  double g_max = 0.0;
  double g_min = 0.0;
  double ramp_up = 0.0;    // max upward reserve within response time
  double ramp_down = 0.0;  // max downward reserve
  double c_energy = 0.0;   // $/MWh
  double c_res_up = 0.0;   // $/MW
  double c_res_down = 0.0;
  double c_redisp_up = 0.0;    // paid-as-bid upward re-dispatch price
  double c_redisp_down = 0.0;  // paid-as-bid downward re-dispatch pay-back price
};

struct Load {
  std::string id;
  std::string bus;
  double demand = 0.0;  // MW
  double c_shed = 0.0;  // $/MWh compensation
  std::map<std::string, double> fluctuation;  // scenario id -> signed MW delta
};

struct Scenario {
  std::string id;
  double probability = 0.0;  // in (0,1); base case takes 1 - sum
  std::set<std::string> outaged_line_ids;
};

struct SolveOptions {
  double feas_tol = 1e-9;
  double dual_tol = 1e-7;
  double settlement_tol = 1e-6;
  double infeasible_recourse_penalty = 20000.0;
  std::string reference_bus;  // empty: lowest-indexed bus
  // Optional one-step ramping anchor g^SE per generator:
  // g in [g_SE - ramp_down, g_SE + ramp_up].
  std::map<std::string, double> ramp_anchor;
};

struct MarketCase {
  std::string name;
  Network network;
  std::vector<Generator> generators;
  std::vector<Load> loads;
  std::vector<Scenario> scenarios;
  SolveOptions options;

  int generator_index(const std::string& id) const;
  int load_index(const std::string& id) const;
  int scenario_index(const std::string& id) const;  // throws UnknownScenario

  double base_probability() const;
  double total_demand() const;
  /// demand + fluctuation of a load in a scenario (fluctuation defaults to 0).
  double scenario_demand(const Load& load, const Scenario& scen) const;

  /// True when every generator has g_min == 0 (assumption needed by the
  /// cost-recovery and individual-rationality checks).
  bool zero_min_generation() const;

  /// Full invariant check; throws ValidationError / DisconnectedNetwork
  /// with a field path. Called by load_case and builtin fixtures.
  void validate() const;
};

/// Parses and validates a case file. Throws ParseError on malformed input,
/// ValidationError on invariant violations.
MarketCase load_case(const std::string& path);
MarketCase case_from_json_text(const std::string& text);
std::string case_to_json_text(const MarketCase& c);

/// The 2-bus reference fixture: G1, L1(6 MW) at bus 1; G2, G3, L2(15),
/// L3(4) at bus 2; two parallel 1.0/1.2 MW lines; five scenarios.
MarketCase builtin_two_bus();

/// Atomic write (write-then-rename). Throws IoError.
void write_text_file(const std::string& path, const std::string& contents);
std::string read_text_file(const std::string& path);

}  // namespace coopt
