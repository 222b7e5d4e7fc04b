#include "coopt/network.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <unordered_map>
#include <unordered_set>

namespace coopt {

int Network::bus_index(const std::string& id) const {
  for (int i = 0; i < bus_count(); ++i) {
    if (buses[i] == id) return i;
  }
  throw UnknownBus("unknown bus '" + id + "'");
}

int Network::line_index(const std::string& id) const {
  for (int i = 0; i < line_count(); ++i) {
    if (lines[i].id == id) return i;
  }
  throw UnknownLine("unknown line '" + id + "'");
}

void Network::validate() const {
  if (buses.empty()) throw ValidationError("buses", "at least one bus required");
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < buses.size(); ++i) {
    if (!seen.insert(buses[i]).second)
      throw ValidationError("buses[" + std::to_string(i) + "]",
                            "duplicate bus id '" + buses[i] + "'");
  }
  std::unordered_set<std::string> line_ids;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const Line& ln = lines[i];
    const std::string path = "lines[" + std::to_string(i) + "]";
    if (!line_ids.insert(ln.id).second)
      throw ValidationError(path, "duplicate line id '" + ln.id + "'");
    if (!seen.count(ln.from_bus))
      throw ValidationError(path + ".from", "undeclared bus '" + ln.from_bus + "'");
    if (!seen.count(ln.to_bus))
      throw ValidationError(path + ".to", "undeclared bus '" + ln.to_bus + "'");
    if (ln.from_bus == ln.to_bus)
      throw ValidationError(path, "line endpoints coincide");
    if (!(ln.reactance > 0.0) || !std::isfinite(ln.reactance))
      throw ValidationError(path + ".reactance", "must be > 0");
    if (!(ln.capacity_base > 0.0) || !std::isfinite(ln.capacity_base))
      throw ValidationError(path + ".capacity_base", "must be > 0");
    if (!(ln.capacity_scenario > 0.0) || !std::isfinite(ln.capacity_scenario))
      throw ValidationError(path + ".capacity_scenario", "must be > 0");
  }
  if (!seen.count(reference_bus))
    throw ValidationError("reference_bus", "undeclared bus '" + reference_bus + "'");
  if (!connected_without({}))
    throw DisconnectedNetwork("base-case network is not connected");
}

bool Network::connected_without(const std::set<std::string>& outaged) const {
  if (buses.empty()) return false;
  std::unordered_map<std::string, int> idx;
  for (int i = 0; i < bus_count(); ++i) idx[buses[i]] = i;
  std::vector<std::vector<int>> adj(buses.size());
  for (const Line& ln : lines) {
    if (outaged.count(ln.id)) continue;
    int a = idx.at(ln.from_bus), b = idx.at(ln.to_bus);
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<char> vis(buses.size(), 0);
  std::queue<int> q;
  q.push(0);
  vis[0] = 1;
  int reached = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : adj[u])
      if (!vis[v]) {
        vis[v] = 1;
        ++reached;
        q.push(v);
      }
  }
  return reached == bus_count();
}

namespace {

std::vector<int> surviving_line_indices(const Network& net,
                                        const std::set<std::string>& outaged) {
  for (const std::string& id : outaged) net.line_index(id);  // throws UnknownLine
  std::vector<int> keep;
  for (int i = 0; i < net.line_count(); ++i)
    if (!outaged.count(net.lines[i].id)) keep.push_back(i);
  return keep;
}

}  // namespace

Eigen::MatrixXd compute_ptdf(const Network& network,
                             const std::set<std::string>& outaged_line_ids) {
  const std::vector<int> keep = surviving_line_indices(network, outaged_line_ids);
  if (!network.connected_without(outaged_line_ids))
    throw DisconnectedNetwork("outage islands the network");

  const int n = network.bus_count();
  const int ref = network.reference_index();
  const int m = static_cast<int>(keep.size());

  // Nodal susceptance matrix without the reference row/column.
  std::vector<int> red(n, -1);
  int r = 0;
  for (int b = 0; b < n; ++b)
    if (b != ref) red[b] = r++;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n - 1, n - 1);
  for (int li : keep) {
    const Line& ln = network.lines[li];
    const double y = 1.0 / ln.reactance;
    int a = network.bus_index(ln.from_bus);
    int b = network.bus_index(ln.to_bus);
    if (a != ref) B(red[a], red[a]) += y;
    if (b != ref) B(red[b], red[b]) += y;
    if (a != ref && b != ref) {
      B(red[a], red[b]) -= y;
      B(red[b], red[a]) -= y;
    }
  }

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
  // Theta per unit injection at each non-reference bus.
  Eigen::MatrixXd theta = lu.solve(Eigen::MatrixXd::Identity(n - 1, n - 1));

  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(m, n);
  for (int row = 0; row < m; ++row) {
    const Line& ln = network.lines[keep[row]];
    const double y = 1.0 / ln.reactance;
    int a = network.bus_index(ln.from_bus);
    int b = network.bus_index(ln.to_bus);
    for (int col = 0; col < n; ++col) {
      if (col == ref) continue;  // reference column stays exactly zero
      double ta = (a == ref) ? 0.0 : theta(red[a], red[col]);
      double tb = (b == ref) ? 0.0 : theta(red[b], red[col]);
      S(row, col) = y * (ta - tb);
    }
  }
  return S;
}

AngleSystem build_angle_system(const Network& network,
                               const std::set<std::string>& outaged_line_ids) {
  const std::vector<int> keep = surviving_line_indices(network, outaged_line_ids);
  if (!network.connected_without(outaged_line_ids))
    throw DisconnectedNetwork("outage islands the network");

  const int n = network.bus_count();
  const int m = static_cast<int>(keep.size());
  AngleSystem sys;
  sys.reference_index = network.reference_index();
  sys.susceptance = Eigen::MatrixXd::Zero(n, n);
  sys.branch_flow = Eigen::MatrixXd::Zero(m, n);
  sys.line_ids.reserve(m);
  for (int row = 0; row < m; ++row) {
    const Line& ln = network.lines[keep[row]];
    const double y = 1.0 / ln.reactance;
    int a = network.bus_index(ln.from_bus);
    int b = network.bus_index(ln.to_bus);
    sys.susceptance(a, a) += y;
    sys.susceptance(b, b) += y;
    sys.susceptance(a, b) -= y;
    sys.susceptance(b, a) -= y;
    sys.branch_flow(row, a) = y;
    sys.branch_flow(row, b) = -y;
    sys.line_ids.push_back(ln.id);
  }
  return sys;
}

Eigen::MatrixXd make_incidence(const Network& network,
                               const std::vector<std::string>& entity_buses) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(network.bus_count(),
                                            static_cast<Eigen::Index>(entity_buses.size()));
  for (std::size_t j = 0; j < entity_buses.size(); ++j)
    A(network.bus_index(entity_buses[j]), static_cast<Eigen::Index>(j)) = 1.0;
  return A;
}

}  // namespace coopt
