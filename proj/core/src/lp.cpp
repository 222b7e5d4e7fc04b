#include "coopt/lp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_set>

namespace coopt {

int LinearProgram::add_variable(std::string label, double lo, double hi, double cost) {
  lo_.push_back(lo);
  hi_.push_back(hi);
  cost_.push_back(cost);
  var_labels_.push_back(std::move(label));
  return num_vars() - 1;
}

int LinearProgram::add_eq(std::string label, std::vector<std::pair<int, double>> terms,
                          double rhs) {
  eq_rows_.push_back(Row{std::move(terms), rhs, std::move(label)});
  return num_eq() - 1;
}

int LinearProgram::add_ub(std::string label, std::vector<std::pair<int, double>> terms,
                          double rhs) {
  ub_rows_.push_back(Row{std::move(terms), rhs, std::move(label)});
  return num_ub() - 1;
}

void LinearProgram::set_bounds(int var, double lo, double hi) {
  lo_.at(var) = lo;
  hi_.at(var) = hi;
}

void LinearProgram::validate() const {
  for (int j = 0; j < num_vars(); ++j) {
    if (std::isnan(lo_[j]) || std::isnan(hi_[j]) || !std::isfinite(cost_[j]))
      throw ValidationError("var " + var_labels_[j], "non-finite cost or NaN bound");
    if (lo_[j] > hi_[j])
      throw ValidationError("var " + var_labels_[j], "lower bound exceeds upper bound");
  }
  auto check_rows = [&](const std::vector<Row>& rows, const char* kind) {
    for (const Row& r : rows) {
      if (!std::isfinite(r.rhs))
        throw ValidationError(std::string(kind) + " " + r.label, "non-finite rhs");
      for (auto& [col, coef] : r.terms) {
        if (col < 0 || col >= num_vars())
          throw ValidationError(std::string(kind) + " " + r.label, "column out of range");
        if (!std::isfinite(coef))
          throw ValidationError(std::string(kind) + " " + r.label, "non-finite coefficient");
      }
    }
  };
  check_rows(eq_rows_, "eq");
  check_rows(ub_rows_, "ub");
  std::unordered_set<std::string> labels;
  for (const auto& l : var_labels_)
    if (!labels.insert("v:" + l).second)
      throw ValidationError("var " + l, "duplicate label");
  for (const auto& r : eq_rows_)
    if (!labels.insert("e:" + r.label).second)
      throw ValidationError("eq " + r.label, "duplicate label");
  for (const auto& r : ub_rows_)
    if (!labels.insert("u:" + r.label).second)
      throw ValidationError("ub " + r.label, "duplicate label");
}

namespace {

// Sparse column of the standard-form matrix.
struct Column {
  std::vector<std::pair<int, double>> nz;  // (row, value)
};

enum class VarState : unsigned char { Basic, AtLo, AtHi, FreeZero };

struct Simplex {
  // standard form: rows are all equalities [A_eq; A_ub + slack]
  int m = 0;              // rows
  int n_struct = 0;       // structural variables
  int n = 0;              // struct + slacks (+ artificials appended later)
  std::vector<Column> cols;
  std::vector<double> lo, hi, cost, phase1_cost;
  Eigen::VectorXd b;

  std::vector<int> basic;        // row -> column
  std::vector<VarState> state;   // column -> state
  std::vector<double> x;         // all columns
  Eigen::MatrixXd Binv;
  std::vector<char> locked;      // artificial columns pinned to zero
  int art0 = -1;                 // first artificial column, set in phase 1

  double feas_tol = 1e-9;
  double dual_tol = 1e-7;
  int pivots_since_refactor = 0;
  int iterations = 0;
  bool bland = false;
  int stall_count = 0;
  double last_obj = kInf;

  static constexpr int kRefactorEvery = 64;
  static constexpr double kPivotTol = 1e-9;

  double value_at(VarState s, int j) const {
    switch (s) {
      case VarState::AtLo: return lo[j];
      case VarState::AtHi: return hi[j];
      default: return 0.0;
    }
  }

  void refactor() {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m, m);
    for (int r = 0; r < m; ++r)
      for (auto& [row, v] : cols[basic[r]].nz) B(row, r) = v;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    Binv = lu.solve(Eigen::MatrixXd::Identity(m, m));
    if (!Binv.allFinite()) throw NumericalFailure("basis inverse is not finite");
    double resid = (B * Binv - Eigen::MatrixXd::Identity(m, m)).cwiseAbs().maxCoeff();
    if (resid > 1e-6) throw NumericalFailure("singular working basis");
    recompute_basic_values();
    pivots_since_refactor = 0;
  }

  void recompute_basic_values() {
    Eigen::VectorXd rhs = b;
    for (int j = 0; j < n; ++j) {
      if (state[j] == VarState::Basic) continue;
      double v = value_at(state[j], j);
      if (v != 0.0)
        for (auto& [row, a] : cols[j].nz) rhs(row) -= a * v;
      x[j] = v;
    }
    Eigen::VectorXd xb = Binv * rhs;
    for (int r = 0; r < m; ++r) x[basic[r]] = xb(r);
  }

  Eigen::VectorXd ftran(int j) const {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(m);
    for (auto& [row, v] : cols[j].nz) w += v * Binv.col(row);
    return w;
  }

  Eigen::VectorXd duals(const std::vector<double>& c) const {
    Eigen::VectorXd cb(m);
    for (int r = 0; r < m; ++r) cb(r) = c[basic[r]];
    return Binv.transpose() * cb;
  }

  double reduced_cost(const std::vector<double>& c, const Eigen::VectorXd& y, int j) const {
    double d = c[j];
    for (auto& [row, v] : cols[j].nz) d -= y(row) * v;
    return d;
  }

  double objective(const std::vector<double>& c) const {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += c[j] * x[j];
    return s;
  }

  // One simplex iteration. Returns: 0 optimal, 1 pivoted/flipped, 2 unbounded.
  int iterate(const std::vector<double>& c) {
    Eigen::VectorXd y = duals(c);
    int q = -1, dir = 0;
    double best = dual_tol;
    for (int j = 0; j < n; ++j) {
      if (state[j] == VarState::Basic || locked[j]) continue;
      double d = reduced_cost(c, y, j);
      double viol = 0.0;
      int jdir = 0;
      if (state[j] == VarState::AtLo && d < -dual_tol) {
        viol = -d;
        jdir = +1;
      } else if (state[j] == VarState::AtHi && d > dual_tol) {
        viol = d;
        jdir = -1;
      } else if (state[j] == VarState::FreeZero && std::abs(d) > dual_tol) {
        viol = std::abs(d);
        jdir = d < 0 ? +1 : -1;
      } else {
        continue;
      }
      if (bland) {  // first eligible index
        q = j;
        dir = jdir;
        break;
      }
      if (viol > best) {
        best = viol;
        q = j;
        dir = jdir;
      }
    }
    if (q < 0) return 0;

    Eigen::VectorXd w = ftran(q);
    // Max step from the entering variable's own range.
    double t_own = hi[q] - lo[q];  // inf when a bound is infinite
    if (state[q] == VarState::FreeZero) t_own = kInf;
    double t_best = t_own;
    int leave_row = -1;
    double leave_pivot = 0.0;
    for (int r = 0; r < m; ++r) {
      double wd = dir * w(r);
      if (std::abs(wd) < kPivotTol) continue;
      int jb = basic[r];
      double t;
      if (wd > 0) {  // basic value decreases toward its lower bound
        if (lo[jb] == -kInf) continue;
        t = (x[jb] - lo[jb]) / wd;
      } else {  // increases toward its upper bound
        if (hi[jb] == kInf) continue;
        t = (x[jb] - hi[jb]) / wd;
      }
      if (t < 0.0) t = 0.0;  // basic value drifted past its bound: degenerate step
      // Wider tie window under Dantzig pricing lets the larger pivot win;
      // Bland mode keeps exact ties for its termination guarantee.
      const double tie_eps = bland ? 1e-12 : 1e-9;
      bool better = t < t_best - tie_eps;
      bool tie = std::abs(t - t_best) <= tie_eps;
      bool prefer = tie && (leave_row < 0
                                ? t_best == t_own
                                : (bland ? jb < basic[leave_row]
                                         : std::abs(w(r)) > std::abs(leave_pivot)));
      if (better || prefer) {
        t_best = std::max(t, 0.0);
        leave_row = r;
        leave_pivot = w(r);
      }
    }

    if (t_best == kInf) return 2;

    ++iterations;
    double step = dir * t_best;
    if (leave_row < 0) {
      // bound flip, basis unchanged
      for (int r = 0; r < m; ++r) x[basic[r]] -= w(r) * step;
      x[q] += step;
      state[q] = dir > 0 ? VarState::AtHi : VarState::AtLo;
      return 1;
    }

    if (std::abs(leave_pivot) < kPivotTol)
      throw NumericalFailure("pivot element below tolerance");

    int jl = basic[leave_row];
    for (int r = 0; r < m; ++r) x[basic[r]] -= w(r) * step;
    x[q] = value_at(state[q], q) + step;
    // Leaving variable lands on the bound it ran into.
    state[jl] = (dir * leave_pivot > 0) ? VarState::AtLo : VarState::AtHi;
    if (lo[jl] == -kInf && hi[jl] == kInf) state[jl] = VarState::FreeZero;
    if (art0 >= 0 && jl >= art0) locked[jl] = 1;  // artificials never re-enter
    x[jl] = value_at(state[jl], jl);
    basic[leave_row] = q;
    state[q] = VarState::Basic;

    // Product-form update of the explicit inverse.
    Eigen::RowVectorXd pivot_row = Binv.row(leave_row) / leave_pivot;
    for (int r = 0; r < m; ++r) {
      if (r == leave_row) continue;
      double f = w(r);
      if (f != 0.0) Binv.row(r) -= f * pivot_row;
    }
    Binv.row(leave_row) = pivot_row;

    if (++pivots_since_refactor >= kRefactorEvery) refactor();
    return 1;
  }

  LpStatus run(const std::vector<double>& c, int max_iters, bool phase1) {
    last_obj = kInf;
    stall_count = 0;
    bland = false;
    while (true) {
      if (iterations > max_iters)
        throw NumericalFailure("simplex iteration limit exceeded");
      int rc = iterate(c);
      if (rc == 0) {
        // Optimality must be certified on a fresh factorization; the
        // product-form inverse may have drifted.
        if (pivots_since_refactor == 0) return LpStatus::Optimal;
        refactor();
        continue;
      }
      if (rc == 2) return phase1 ? LpStatus::Infeasible : LpStatus::Unbounded;
      double obj = objective(c);
      if (obj < last_obj - 1e-12 * (1.0 + std::abs(last_obj))) {
        last_obj = obj;
        stall_count = 0;
      } else if (!bland && ++stall_count > 100 + 2 * m) {
        bland = true;  // anti-cycling fallback
      }
    }
  }
};

struct Scaling {
  std::vector<double> row;  // size m
  std::vector<double> col;  // size n_struct
};

Scaling equilibrate(int m, int n_struct, const std::vector<Column>& cols) {
  Scaling s;
  s.row.assign(m, 1.0);
  s.col.assign(n_struct, 1.0);
  for (int pass = 0; pass < 3; ++pass) {
    std::vector<double> rmin(m, kInf), rmax(m, 0.0);
    for (int j = 0; j < n_struct; ++j)
      for (auto& [r, v] : cols[j].nz) {
        double a = std::abs(v) * s.row[r] * s.col[j];
        if (a == 0.0) continue;
        rmin[r] = std::min(rmin[r], a);
        rmax[r] = std::max(rmax[r], a);
      }
    for (int r = 0; r < m; ++r)
      if (rmax[r] > 0.0) s.row[r] /= std::sqrt(rmin[r] * rmax[r]);
    std::vector<double> cmin(n_struct, kInf), cmax(n_struct, 0.0);
    for (int j = 0; j < n_struct; ++j)
      for (auto& [r, v] : cols[j].nz) {
        double a = std::abs(v) * s.row[r] * s.col[j];
        if (a == 0.0) continue;
        cmin[j] = std::min(cmin[j], a);
        cmax[j] = std::max(cmax[j], a);
      }
    for (int j = 0; j < n_struct; ++j)
      if (cmax[j] > 0.0) s.col[j] /= std::sqrt(cmin[j] * cmax[j]);
  }
  // Runaway factors defeat the scaled-space tolerances.
  for (double& v : s.row) v = std::clamp(v, 1e-4, 1e4);
  for (double& v : s.col) v = std::clamp(v, 1e-4, 1e4);
  return s;
}

}  // namespace

namespace {

LpSolution solve_attempt(const LinearProgram& lp, const SolveControls& controls,
                         bool use_scaling) {
  const int n_struct = lp.num_vars();
  const int m_eq = lp.num_eq();
  const int m_ub = lp.num_ub();
  const int m = m_eq + m_ub;

  Simplex sx;
  sx.feas_tol = controls.feas_tol;
  sx.dual_tol = controls.dual_tol;
  sx.m = m;
  sx.n_struct = n_struct;
  sx.n = n_struct + m_ub;
  sx.cols.resize(sx.n);
  for (int i = 0; i < m_eq; ++i)
    for (auto& [col, v] : lp.eq_rows()[i].terms)
      if (v != 0.0) sx.cols[col].nz.emplace_back(i, v);
  for (int i = 0; i < m_ub; ++i) {
    for (auto& [col, v] : lp.ub_rows()[i].terms)
      if (v != 0.0) sx.cols[col].nz.emplace_back(m_eq + i, v);
    sx.cols[n_struct + i].nz.emplace_back(m_eq + i, 1.0);  // slack
  }

  // Geometric-mean equilibration over structural columns.
  Scaling sc;
  if (use_scaling) {
    std::vector<Column> struct_cols(sx.cols.begin(), sx.cols.begin() + n_struct);
    sc = equilibrate(m, n_struct, struct_cols);
  } else {
    sc.row.assign(m, 1.0);
    sc.col.assign(n_struct, 1.0);
  }
  for (int j = 0; j < n_struct; ++j)
    for (auto& [r, v] : sx.cols[j].nz) v *= sc.row[r] * sc.col[j];
  for (int i = 0; i < m_ub; ++i)
    for (auto& [r, v] : sx.cols[n_struct + i].nz) v *= sc.row[r];

  sx.b.resize(m);
  for (int i = 0; i < m_eq; ++i) sx.b(i) = lp.eq_rows()[i].rhs * sc.row[i];
  for (int i = 0; i < m_ub; ++i) sx.b(m_eq + i) = lp.ub_rows()[i].rhs * sc.row[m_eq + i];

  sx.lo.assign(sx.n, 0.0);
  sx.hi.assign(sx.n, kInf);
  sx.cost.assign(sx.n, 0.0);
  for (int j = 0; j < n_struct; ++j) {
    sx.lo[j] = lp.lower()[j] / sc.col[j];
    sx.hi[j] = lp.upper()[j] / sc.col[j];
    sx.cost[j] = lp.cost()[j] * sc.col[j];
  }

  // Initial nonbasic point.
  sx.state.assign(sx.n, VarState::AtLo);
  sx.x.assign(sx.n, 0.0);
  for (int j = 0; j < sx.n; ++j) {
    if (sx.lo[j] != -kInf)
      sx.state[j] = VarState::AtLo;
    else if (sx.hi[j] != kInf)
      sx.state[j] = VarState::AtHi;
    else
      sx.state[j] = VarState::FreeZero;
    sx.x[j] = sx.value_at(sx.state[j], j);
  }

  // Phase 1: artificial basis covering the residual of every row.
  Eigen::VectorXd resid = sx.b;
  for (int j = 0; j < sx.n; ++j)
    if (sx.x[j] != 0.0)
      for (auto& [r, v] : sx.cols[j].nz) resid(r) -= v * sx.x[j];
  sx.basic.resize(m);
  sx.locked.assign(sx.n + m, 0);
  sx.cols.resize(sx.n + m);
  sx.lo.resize(sx.n + m, 0.0);
  sx.hi.resize(sx.n + m, kInf);
  sx.cost.resize(sx.n + m, 0.0);
  sx.x.resize(sx.n + m, 0.0);
  sx.state.resize(sx.n + m, VarState::Basic);
  const int art0 = sx.n;
  sx.art0 = art0;
  for (int r = 0; r < m; ++r) {
    double s = resid(r) >= 0 ? 1.0 : -1.0;
    sx.cols[art0 + r].nz.emplace_back(r, s);
    sx.basic[r] = art0 + r;
    sx.x[art0 + r] = std::abs(resid(r));
    sx.state[art0 + r] = VarState::Basic;
  }
  sx.n += m;

  std::vector<double> phase1(sx.n, 0.0);
  for (int r = 0; r < m; ++r) phase1[art0 + r] = 1.0;

  int max_iters = controls.max_iterations > 0
                      ? controls.max_iterations
                      : 200 + 50 * (sx.n + m);
  sx.refactor();

  LpSolution out;
  if (sx.run(phase1, max_iters, true) != LpStatus::Optimal ||
      sx.objective(phase1) > std::max(1e-7, 10 * controls.feas_tol * (1.0 + sx.b.cwiseAbs().maxCoeff()))) {
    out.status = LpStatus::Infeasible;
    out.iterations = sx.iterations;
    return out;
  }

  // Drive remaining artificials out of the basis (or lock dependent rows).
  for (int r = 0; r < m; ++r) {
    int jb = sx.basic[r];
    if (jb < art0) continue;
    bool pivoted = false;
    for (int j = 0; j < art0 && !pivoted; ++j) {
      if (sx.state[j] == VarState::Basic) continue;
      Eigen::VectorXd w = sx.ftran(j);
      if (std::abs(w(r)) > 1e-7) {
        // zero-step pivot: basic values unchanged
        int jl = sx.basic[r];
        sx.state[jl] = VarState::AtLo;
        sx.lo[jl] = sx.hi[jl] = 0.0;
        sx.x[jl] = 0.0;
        sx.basic[r] = j;
        sx.state[j] = VarState::Basic;
        Eigen::RowVectorXd pivot_row = sx.Binv.row(r) / w(r);
        for (int rr = 0; rr < m; ++rr) {
          if (rr == r) continue;
          double f = w(rr);
          if (f != 0.0) sx.Binv.row(rr) -= f * pivot_row;
        }
        sx.Binv.row(r) = pivot_row;
        sx.refactor();
        pivoted = true;
      }
    }
    if (!pivoted) {
      // dependent row: keep the artificial basic, pinned at zero
      sx.lo[jb] = sx.hi[jb] = 0.0;
    }
  }
  for (int j = art0; j < sx.n; ++j)
    if (sx.state[j] != VarState::Basic) {
      sx.locked[j] = 1;
      sx.lo[j] = sx.hi[j] = 0.0;
      sx.x[j] = 0.0;
      sx.state[j] = VarState::AtLo;
    }

  LpStatus st = sx.run(sx.cost, max_iters, false);
  out.iterations = sx.iterations;
  if (st == LpStatus::Unbounded) {
    out.status = LpStatus::Unbounded;
    return out;
  }

  // Unscale primal.
  out.status = LpStatus::Optimal;
  out.x.resize(n_struct);
  for (int j = 0; j < n_struct; ++j) out.x[j] = sx.x[j] * sc.col[j];
  double obj = 0.0;
  for (int j = 0; j < n_struct; ++j) obj += lp.cost()[j] * out.x[j];
  out.objective = obj;

  // Duals: y = Binv^T c_B, unscaled by row factors.
  Eigen::VectorXd y = sx.duals(sx.cost);
  out.eq_duals.resize(m_eq);
  for (int i = 0; i < m_eq; ++i) out.eq_duals[i] = y(i) * sc.row[i];
  out.ub_duals.resize(m_ub);
  for (int i = 0; i < m_ub; ++i) {
    double mu = -y(m_eq + i) * sc.row[m_eq + i];
    out.ub_duals[i] = std::abs(mu) < 1e-13 ? 0.0 : mu;
  }
  out.lo_duals.assign(n_struct, 0.0);
  out.hi_duals.assign(n_struct, 0.0);
  for (int j = 0; j < n_struct; ++j) {
    if (sx.state[j] == VarState::Basic) continue;
    double d = sx.reduced_cost(sx.cost, y, j) / sc.col[j];
    if (sx.state[j] == VarState::AtLo && lp.lower()[j] != -kInf)
      out.lo_duals[j] = std::max(0.0, d);
    else if (sx.state[j] == VarState::AtHi && lp.upper()[j] != kInf)
      out.hi_duals[j] = std::max(0.0, -d);
  }

  out.residuals = verify_kkt(lp, out);
  return out;
}

}  // namespace

LpSolution solve(const LinearProgram& lp, const SolveControls& controls) {
  lp.validate();
  double cmax = 1.0;
  for (double v : lp.cost()) cmax = std::max(cmax, std::abs(v));
  auto certified = [&](const LpSolution& s) {
    if (s.status != LpStatus::Optimal) return true;
    return s.residuals.primal <= 1e-6 && s.residuals.dual <= 1e-6 * cmax &&
           s.residuals.compl_slack <= 1e-5 * cmax;
  };
  try {
    LpSolution s = solve_attempt(lp, controls, controls.scale);
    if (certified(s)) return s;
  } catch (const NumericalFailure&) {
  }
  // One retry with the opposite scaling choice before giving up.
  LpSolution s = solve_attempt(lp, controls, !controls.scale);
  if (!certified(s))
    throw NumericalFailure("optimality certificates out of tolerance after retry");
  return s;
}

KktResiduals verify_kkt(const LinearProgram& lp, const LpSolution& sol) {
  KktResiduals res;
  if (sol.status != LpStatus::Optimal) return res;
  const int n = lp.num_vars();
  const auto& x = sol.x;

  for (int i = 0; i < lp.num_eq(); ++i) {
    double ax = 0.0;
    for (auto& [c, v] : lp.eq_rows()[i].terms) ax += v * x[c];
    res.primal = std::max(res.primal, std::abs(ax - lp.eq_rows()[i].rhs));
  }
  for (int i = 0; i < lp.num_ub(); ++i) {
    double ax = 0.0;
    for (auto& [c, v] : lp.ub_rows()[i].terms) ax += v * x[c];
    double slack = lp.ub_rows()[i].rhs - ax;
    res.primal = std::max(res.primal, std::max(0.0, -slack));
    res.compl_slack = std::max(res.compl_slack, std::abs(sol.ub_duals[i] * slack));
    res.dual = std::max(res.dual, -sol.ub_duals[i]);
  }
  for (int j = 0; j < n; ++j) {
    if (lp.lower()[j] != -kInf) {
      res.primal = std::max(res.primal, lp.lower()[j] - x[j]);
      res.compl_slack =
          std::max(res.compl_slack, std::abs(sol.lo_duals[j] * (x[j] - lp.lower()[j])));
    }
    if (lp.upper()[j] != kInf) {
      res.primal = std::max(res.primal, x[j] - lp.upper()[j]);
      res.compl_slack =
          std::max(res.compl_slack, std::abs(sol.hi_duals[j] * (lp.upper()[j] - x[j])));
    }
    res.dual = std::max(res.dual, std::max(-sol.lo_duals[j], -sol.hi_duals[j]));
  }

  // Stationarity: c - Aeq^T y + Aub^T mu - rho_lo + rho_hi = 0.
  std::vector<double> st(lp.cost());
  for (int i = 0; i < lp.num_eq(); ++i)
    for (auto& [c, v] : lp.eq_rows()[i].terms) st[c] -= v * sol.eq_duals[i];
  for (int i = 0; i < lp.num_ub(); ++i)
    for (auto& [c, v] : lp.ub_rows()[i].terms) st[c] += v * sol.ub_duals[i];
  for (int j = 0; j < n; ++j) {
    st[j] -= sol.lo_duals[j];
    st[j] += sol.hi_duals[j];
    res.dual = std::max(res.dual, std::abs(st[j]));
  }

  double dual_obj = 0.0;
  for (int i = 0; i < lp.num_eq(); ++i) dual_obj += sol.eq_duals[i] * lp.eq_rows()[i].rhs;
  for (int i = 0; i < lp.num_ub(); ++i) dual_obj -= sol.ub_duals[i] * lp.ub_rows()[i].rhs;
  for (int j = 0; j < n; ++j) {
    if (lp.lower()[j] != -kInf) dual_obj += sol.lo_duals[j] * lp.lower()[j];
    if (lp.upper()[j] != kInf) dual_obj -= sol.hi_duals[j] * lp.upper()[j];
  }
  res.duality_gap = std::abs(sol.objective - dual_obj);
  return res;
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_terms(std::ostringstream& os, const LinearProgram& lp,
                 const std::vector<std::pair<int, double>>& terms) {
  bool first = true;
  for (auto& [c, v] : terms) {
    if (v == 0.0) continue;
    if (first) {
      os << (v < 0 ? "- " : "");
      first = false;
    } else {
      os << (v < 0 ? " - " : " + ");
    }
    os << num(std::abs(v)) << " " << lp.var_labels()[c];
  }
  if (first) os << "0 " << lp.var_labels()[0];
}

}  // namespace

std::string to_lp_text(const LinearProgram& lp) {
  std::ostringstream os;
  os << "Minimize\n obj: ";
  bool first = true;
  for (int j = 0; j < lp.num_vars(); ++j) {
    double v = lp.cost()[j];
    if (v == 0.0) continue;
    if (first) {
      os << (v < 0 ? "- " : "");
      first = false;
    } else {
      os << (v < 0 ? " - " : " + ");
    }
    os << num(std::abs(v)) << " " << lp.var_labels()[j];
  }
  if (first) os << "0 " << lp.var_labels()[0];
  os << "\nSubject To\n";
  for (const auto& r : lp.eq_rows()) {
    os << " " << r.label << ": ";
    write_terms(os, lp, r.terms);
    os << " = " << num(r.rhs) << "\n";
  }
  for (const auto& r : lp.ub_rows()) {
    os << " " << r.label << ": ";
    write_terms(os, lp, r.terms);
    os << " <= " << num(r.rhs) << "\n";
  }
  os << "Bounds\n";
  for (int j = 0; j < lp.num_vars(); ++j) {
    double lo = lp.lower()[j], hi = lp.upper()[j];
    os << " ";
    if (lo == -kInf && hi == kInf)
      os << lp.var_labels()[j] << " free";
    else if (hi == kInf)
      os << num(lo) << " <= " << lp.var_labels()[j];
    else
      os << num(lo) << " <= " << lp.var_labels()[j] << " <= " << num(hi);
    os << "\n";
  }
  os << "End\n";
  return os.str();
}

}  // namespace coopt
