#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "coopt/errors.hpp"

namespace coopt {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class LpStatus { Optimal, Infeasible, Unbounded };

/// Bounded-variable LP in the form
///   minimize c^T x
///   subject to  A_eq x  = b_eq
///               A_ub x <= b_ub
///               lo <= x <= hi
/// Row and column labels carry semantic tags ("balance:base",
/// "flow:S2:L1a", ...) so duals can be pulled out unambiguously.
class LinearProgram {
 public:
  struct Row {
    std::vector<std::pair<int, double>> terms;  // (column, coefficient)
    double rhs = 0.0;
    std::string label;
  };

  int add_variable(std::string label, double lo, double hi, double cost);
  int add_eq(std::string label, std::vector<std::pair<int, double>> terms, double rhs);
  int add_ub(std::string label, std::vector<std::pair<int, double>> terms, double rhs);

  int num_vars() const { return static_cast<int>(cost_.size()); }
  int num_eq() const { return static_cast<int>(eq_rows_.size()); }
  int num_ub() const { return static_cast<int>(ub_rows_.size()); }

  const std::vector<double>& cost() const { return cost_; }
  const std::vector<double>& lower() const { return lo_; }
  const std::vector<double>& upper() const { return hi_; }
  const std::vector<Row>& eq_rows() const { return eq_rows_; }
  const std::vector<Row>& ub_rows() const { return ub_rows_; }
  const std::vector<std::string>& var_labels() const { return var_labels_; }

  void set_cost(int var, double cost) { cost_.at(var) = cost; }
  void set_bounds(int var, double lo, double hi);
  void set_ub_rhs(int row, double rhs) { ub_rows_.at(row).rhs = rhs; }

  /// Validates finiteness of coefficients, lo <= hi, label uniqueness.
  void validate() const;

 private:
  std::vector<double> cost_, lo_, hi_;
  std::vector<std::string> var_labels_;
  std::vector<Row> eq_rows_, ub_rows_;
};

struct KktResiduals {
  double primal = 0.0;       // max constraint/bound violation
  double dual = 0.0;         // max stationarity violation (incl. dual signs)
  double compl_slack = 0.0;  // max |dual * slack|
  double duality_gap = 0.0;  // |primal obj - dual obj|
};

struct LpSolution {
  LpStatus status = LpStatus::Optimal;
  double objective = 0.0;
  std::vector<double> x;
  /// d(objective)/d(rhs); free sign.
  std::vector<double> eq_duals;
  /// Multipliers of A_ub x <= b_ub rows, >= 0, entering the Lagrangian as
  /// + mu^T (A_ub x - b_ub).
  std::vector<double> ub_duals;
  /// Reduced costs at active bounds, >= 0; zero for basic/inactive.
  std::vector<double> lo_duals;
  std::vector<double> hi_duals;
  KktResiduals residuals;
  int iterations = 0;
};

struct SolveControls {
  double feas_tol = 1e-9;
  double dual_tol = 1e-7;
  bool scale = true;
  int max_iterations = 0;  // 0: derive from problem size
};

/// Deterministic bounded-variable revised simplex (Dantzig pricing with a
/// Bland fallback after a stall; product-form basis inverse with periodic
/// refactorization). Throws NumericalFailure on factorization breakdown.
LpSolution solve(const LinearProgram& lp, const SolveControls& controls = {});

/// Recomputes all KKT residual families from scratch, independent of the
/// solver's internal state.
KktResiduals verify_kkt(const LinearProgram& lp, const LpSolution& sol);

/// CPLEX-style LP text dump, for cross-checks with external solvers.
std::string to_lp_text(const LinearProgram& lp);

}  // namespace coopt
