#include "coopt/network.hpp"

#include <random>

#include "test_util.hpp"

using namespace coopt;
using coopt::testutil::check_close;

namespace {

Network two_bus() {
  Network n;
  n.buses = {"bus1", "bus2"};
  n.reference_bus = "bus2";
  n.lines.push_back({"L1", "bus1", "bus2", 0.1, 5.0, 5.0});
  return n;
}

Network triangle(double x = 1.0) {
  Network n;
  n.buses = {"b1", "b2", "b3"};
  n.reference_bus = "b3";
  n.lines.push_back({"l12", "b1", "b2", x, 5.0, 5.0});
  n.lines.push_back({"l13", "b1", "b3", x, 5.0, 5.0});
  n.lines.push_back({"l23", "b2", "b3", x, 5.0, 5.0});
  return n;
}

// Random connected network: spanning tree plus extra edges, occasionally a
// parallel circuit.
Network random_network(std::mt19937_64& rng, int max_buses = 10) {
  std::uniform_int_distribution<int> nb_d(2, max_buses);
  std::uniform_real_distribution<double> x_d(0.05, 0.4);
  Network n;
  int nb = nb_d(rng);
  for (int b = 0; b < nb; ++b) n.buses.push_back("b" + std::to_string(b));
  n.reference_bus = n.buses[static_cast<std::size_t>(
      std::uniform_int_distribution<int>(0, nb - 1)(rng))];
  int id = 0;
  auto add = [&](int a, int b) {
    n.lines.push_back({"l" + std::to_string(id++), n.buses[a], n.buses[b], x_d(rng), 5.0, 5.0});
  };
  for (int b = 1; b < nb; ++b) add(std::uniform_int_distribution<int>(0, b - 1)(rng), b);
  int extra = std::uniform_int_distribution<int>(0, nb)(rng);
  for (int e = 0; e < extra; ++e) {
    int a = std::uniform_int_distribution<int>(0, nb - 1)(rng);
    int b = std::uniform_int_distribution<int>(0, nb - 1)(rng);
    if (a != b) add(a, b);
  }
  return n;
}

Eigen::VectorXd random_balanced_injection(std::mt19937_64& rng, int nb) {
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  Eigen::VectorXd inj(nb);
  for (int b = 0; b < nb; ++b) inj(b) = d(rng);
  inj.array() -= inj.mean();
  return inj;
}

}  // namespace

TEST_CASE("two-bus radial ptdf") {
  Network n = two_bus();
  Eigen::MatrixXd S = compute_ptdf(n, {});
  check_close(S(0, 0), 1.0, 1e-12, "ptdf(line,bus1)");
  CHECK(S(0, 1) == 0.0);  // reference column exactly zero
}

TEST_CASE("triangle ptdf matches independent nodal solve") {
  Network n = triangle();
  Eigen::MatrixXd S = compute_ptdf(n, {});
  // Independent oracle: solve the 2x2 reduced nodal equations directly for a
  // unit injection at b1.
  Eigen::Matrix2d B;
  B << 2.0, -1.0, -1.0, 2.0;
  Eigen::Vector2d inj(1.0, 0.0);
  Eigen::Vector2d theta = B.partialPivLu().solve(inj);
  check_close(S(0, 0), theta(0) - theta(1), 1e-12, "l12 from nodal solve");
  check_close(S(1, 0), theta(0), 1e-12, "l13 from nodal solve");
  check_close(S(0, 0), 1.0 / 3.0, 1e-12, "l12 bus1");
  check_close(S(1, 0), 2.0 / 3.0, 1e-12, "l13 bus1");
}

TEST_CASE("triangle with line outage becomes radial") {
  Network n = triangle();
  Eigen::MatrixXd S = compute_ptdf(n, {"l13"});
  CHECK(S.rows() == 2);
  check_close(S(0, 0), 1.0, 1e-12, "l12 carries all of bus1 injection");
}

TEST_CASE("outage equals removal") {
  std::mt19937_64 rng(42);
  for (int rep = 0; rep < 40; ++rep) {
    Network n = random_network(rng);
    // pick a removable (non-bridging) line
    int pick = -1;
    for (int li = 0; li < n.line_count(); ++li)
      if (n.connected_without({n.lines[li].id})) {
        pick = li;
        break;
      }
    if (pick < 0) continue;
    Eigen::MatrixXd S_out = compute_ptdf(n, {n.lines[pick].id});
    Network removed = n;
    removed.lines.erase(removed.lines.begin() + pick);
    Eigen::MatrixXd S_rem = compute_ptdf(removed, {});
    CHECK((S_out - S_rem).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("ptdf flows equal angle-system flows on random networks") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    Network n = random_network(rng);
    const int nb = n.bus_count();
    Eigen::MatrixXd S = compute_ptdf(n, {});
    AngleSystem sys = build_angle_system(n, {});
    Eigen::VectorXd inj = random_balanced_injection(rng, nb);

    // Reference column is exactly zero in every matrix.
    for (int li = 0; li < S.rows(); ++li) CHECK(S(li, n.reference_index()) == 0.0);

    // Solve B theta = inj with theta(ref) = 0 via the reduced system.
    Eigen::MatrixXd Bred(nb - 1, nb - 1);
    Eigen::VectorXd injred(nb - 1);
    std::vector<int> map;
    for (int b = 0; b < nb; ++b)
      if (b != n.reference_index()) map.push_back(b);
    for (int i = 0; i < nb - 1; ++i) {
      injred(i) = inj(map[static_cast<std::size_t>(i)]);
      for (int j = 0; j < nb - 1; ++j)
        Bred(i, j) = sys.susceptance(map[static_cast<std::size_t>(i)],
                                     map[static_cast<std::size_t>(j)]);
    }
    Eigen::VectorXd th_red = Bred.partialPivLu().solve(injred);
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(nb);
    for (int i = 0; i < nb - 1; ++i) theta(map[static_cast<std::size_t>(i)]) = th_red(i);

    Eigen::VectorXd f_angle = sys.branch_flow * theta;
    Eigen::VectorXd f_ptdf = S * inj;
    CHECK((f_angle - f_ptdf).cwiseAbs().maxCoeff() <= 1e-8);

    // Flow conservation: net line flow out of each bus equals its injection.
    Eigen::VectorXd nodal = Eigen::VectorXd::Zero(nb);
    for (int li = 0; li < n.line_count(); ++li) {
      nodal(n.bus_index(n.lines[li].from_bus)) += f_ptdf(li);
      nodal(n.bus_index(n.lines[li].to_bus)) -= f_ptdf(li);
    }
    CHECK((nodal - inj).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("parallel identical circuits split evenly") {
  Network n;
  n.buses = {"a", "b"};
  n.reference_bus = "b";
  n.lines.push_back({"p1", "a", "b", 0.2, 1.0, 1.0});
  n.lines.push_back({"p2", "a", "b", 0.2, 1.0, 1.0});
  Eigen::MatrixXd S = compute_ptdf(n, {});
  check_close(S(0, 0), 0.5, 1e-10, "first circuit");
  check_close(S(1, 0), 0.5, 1e-10, "second circuit");
  CHECK(std::abs(S(0, 0) - S(1, 0)) <= 1e-10);
}

TEST_CASE("angle system fixtures") {
  Network n = two_bus();
  AngleSystem sys = build_angle_system(n, {});
  check_close(sys.susceptance(0, 0), 10.0, 1e-12, "B diagonal of 1/x");
  check_close(sys.branch_flow(0, 0), 10.0, 1e-12, "F from");
  check_close(sys.branch_flow(0, 1), -10.0, 1e-12, "F to");

  Network t = triangle(1.0);
  AngleSystem ts = build_angle_system(t, {});
  for (int i = 0; i < 3; ++i) {
    check_close(ts.susceptance(i, i), 2.0, 1e-12, "triangle B diag");
    for (int j = 0; j < 3; ++j)
      if (i != j) check_close(ts.susceptance(i, j), -1.0, 1e-12, "triangle B offdiag");
  }
  // Construction identity: nodal sums of F*theta reproduce B*theta.
  Eigen::Vector3d theta(0.3, -0.1, 0.0);
  Eigen::Vector3d flows = ts.branch_flow * theta;
  Eigen::Vector3d nodal = Eigen::Vector3d::Zero();
  for (int li = 0; li < 3; ++li) {
    nodal(t.bus_index(t.lines[li].from_bus)) += flows(li);
    nodal(t.bus_index(t.lines[li].to_bus)) -= flows(li);
  }
  CHECK((nodal - ts.susceptance * theta).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("errors") {
  Network n = two_bus();
  CHECK_THROWS_AS(compute_ptdf(n, {"nope"}), UnknownLine);
  CHECK_THROWS_AS(compute_ptdf(n, {"L1"}), DisconnectedNetwork);

  Network bad = two_bus();
  bad.lines[0].reactance = -1.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);

  Network dup = two_bus();
  dup.buses.push_back("bus1");
  CHECK_THROWS_AS(dup.validate(), ValidationError);
}
