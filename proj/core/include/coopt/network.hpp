#pragma once

#include <Eigen/Dense>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "coopt/errors.hpp"

namespace coopt {

/// A transmission branch. Parallel circuits between the same bus pair are
/// separate Line entries. capacity_base applies in the base case,
/// capacity_scenario whenever the line survives in a non-base scenario.
struct Line {
  std::string id;
  std::string from_bus;
  std::string to_bus;
  double reactance = 0.1;      // per unit, > 0
  double capacity_base = 0.0;  // MW
  double capacity_scenario = 0.0;
};

/// Lossless DC network. The reference bus carries the zero PTDF column.
struct Network {
  std::vector<std::string> buses;
  std::vector<Line> lines;
  std::string reference_bus;

  int bus_count() const { return static_cast<int>(buses.size()); }
  int line_count() const { return static_cast<int>(lines.size()); }

  /// Index of a bus id; throws UnknownBus.
  int bus_index(const std::string& id) const;
  /// Index of a line id; throws UnknownLine.
  int line_index(const std::string& id) const;
  int reference_index() const { return bus_index(reference_bus); }

  /// Checks id uniqueness, endpoint resolution, positive parameters and
  /// base-case connectivity. Throws ValidationError / DisconnectedNetwork.
  void validate() const;

  /// True when the graph restricted to surviving lines spans all buses.
  bool connected_without(const std::set<std::string>& outaged_line_ids) const;
};

/// Base-case and per-scenario shift factor matrices (lines x buses).
/// Rows follow surviving_lines order; the reference-bus column is zero.
struct PtdfSet {
  Eigen::MatrixXd base;
  std::vector<std::string> base_lines;
  std::map<std::string, Eigen::MatrixXd> per_scenario;
  std::map<std::string, std::vector<std::string>> surviving_lines;
};

/// MW flow on each surviving line per 1 MW injected at a bus and withdrawn
/// at the reference bus. Row order = line declaration order with outaged
/// lines removed. Throws UnknownLine / DisconnectedNetwork.
Eigen::MatrixXd compute_ptdf(const Network& network,
                             const std::set<std::string>& outaged_line_ids);

/// Nodal susceptance matrix B (full, Laplacian-like, one row/col per bus)
/// and branch-flow matrix F over surviving lines such that flows = F*theta
/// and injections = B*theta once theta(reference) is pinned to zero.
struct AngleSystem {
  Eigen::MatrixXd susceptance;  // buses x buses
  Eigen::MatrixXd branch_flow;  // surviving lines x buses
  std::vector<std::string> line_ids;
  int reference_index = 0;
};

AngleSystem build_angle_system(const Network& network,
                               const std::set<std::string>& outaged_line_ids);

/// Entity-to-bus incidence (buses x entities): column j has a single 1 in
/// the row of the entity's bus. Used for A_G and A_D.
Eigen::MatrixXd make_incidence(const Network& network,
                               const std::vector<std::string>& entity_buses);

}  // namespace coopt
