#include "daopf/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "daopf/errors.hpp"

namespace daopf {

Eigen::VectorXd LpSolution::basic_values() const {
  Eigen::VectorXd xb(basis.size());
  for (size_t r = 0; r < basis.size(); ++r) xb[r] = x[basis[r]];
  return xb;
}

namespace {

constexpr double kPivotTol = 1e-11;

// Working state of the revised simplex: columns of A plus one artificial per
// row appended at indices n..n+m-1 with coefficient sign(b_i).
struct Tableau {
  const StandardLp& lp;
  const SimplexOptions& opts;
  int m, n;                       // structural sizes (artificials excluded from n)
  Eigen::MatrixXd binv;           // m x m
  std::vector<int> basis;         // basis[r] = column in row position r
  Eigen::VectorXd xb;             // basic values
  Eigen::VectorXd art_sign;       // +-1 per row
  int pivots_since_invert = 0;
  int degenerate_pivots = 0;
  bool bland = false;
  int iterations = 0;

  explicit Tableau(const StandardLp& lp_, const SimplexOptions& opts_)
      : lp(lp_), opts(opts_), m(lp_.rows()), n(lp_.cols()) {
    binv.setIdentity(m, m);
    basis.resize(m);
    xb.resize(m);
    art_sign.resize(m);
    for (int r = 0; r < m; ++r) {
      art_sign[r] = lp.b[r] >= 0.0 ? 1.0 : -1.0;
      binv(r, r) = art_sign[r];  // B = diag(sign) for the all-artificial basis
      basis[r] = n + r;
      xb[r] = std::abs(lp.b[r]);
    }
  }

  bool is_artificial(int col) const { return col >= n; }

  double cost_of(int col, bool phase1) const {
    if (phase1) return is_artificial(col) ? 1.0 : 0.0;
    return is_artificial(col) ? 0.0 : lp.c[col];
  }

  // column of A (or an artificial unit column) applied to a dense vector: y' a_j
  double dot_column(const Eigen::VectorXd& y, int col) const {
    if (is_artificial(col)) return y[col - n] * art_sign[col - n];
    double s = 0.0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(lp.a, col); it; ++it)
      s += y[it.row()] * it.value();
    return s;
  }

  Eigen::VectorXd ftran(int col) const {  // B^-1 a_j
    if (is_artificial(col)) return binv.col(col - n) * art_sign[col - n];
    Eigen::VectorXd d = Eigen::VectorXd::Zero(m);
    for (Eigen::SparseMatrix<double>::InnerIterator it(lp.a, col); it; ++it)
      d += binv.col(it.row()) * it.value();
    return d;
  }

  Eigen::VectorXd dual_vector(bool phase1) const {  // c_B' B^-1
    Eigen::VectorXd cb(m);
    for (int r = 0; r < m; ++r) cb[r] = cost_of(basis[r], phase1);
    return binv.transpose() * cb;
  }

  // Explicit re-inversion from the current basis; condition estimate from the
  // LU diagonal, NumericalError beyond opts.max_condition.
  void reinvert() {
    Eigen::MatrixXd bmat = Eigen::MatrixXd::Zero(m, m);
    for (int r = 0; r < m; ++r) {
      int col = basis[r];
      if (is_artificial(col))
        bmat(col - n, r) = art_sign[col - n];
      else
        for (Eigen::SparseMatrix<double>::InnerIterator it(lp.a, col); it; ++it)
          bmat(it.row(), r) = it.value();
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(bmat);
    const auto& u = lu.matrixLU();
    double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      double d = std::abs(u(i, i));
      dmax = std::max(dmax, d);
      dmin = std::min(dmin, d);
    }
    if (dmin == 0.0 || dmax / dmin > opts.max_condition)
      throw NumericalError("basis condition estimate exceeds " +
                           std::to_string(opts.max_condition));
    binv = lu.inverse();
    Eigen::VectorXd fresh = binv * lp.b;
    for (int r = 0; r < m; ++r) xb[r] = fresh[r];
    pivots_since_invert = 0;
  }

  // Product-form update: replace row position r by entering column with
  // direction d = B^-1 a_enter.
  void pivot(int r, int enter, const Eigen::VectorXd& d, double step) {
    xb -= step * d;
    xb[r] = step;
    basis[r] = enter;
    double piv = d[r];
    Eigen::VectorXd row_r = binv.row(r) / piv;
    for (int i = 0; i < m; ++i) {
      if (i == r) continue;
      binv.row(i) -= d[i] * row_r.transpose();
    }
    binv.row(r) = row_r.transpose();
    if (++pivots_since_invert >= opts.reinvert_every) reinvert();
  }

  // Returns entering column or -1 at optimality.
  int price(bool phase1, bool allow_artificials) {
    Eigen::VectorXd y = dual_vector(phase1);
    int best = -1;
    double best_rc = -opts.opt_tol;
    int limit = allow_artificials ? n + m : n;
    for (int j = 0; j < limit; ++j) {
      double rc = cost_of(j, phase1) - dot_column(y, j);
      if (rc < best_rc - 0.0) {
        if (bland) {
          if (rc < -opts.opt_tol) return j;  // lowest index with negative rc
        } else if (rc < best_rc) {
          best_rc = rc;
          best = j;
        }
      }
    }
    return best;
  }

  // Ratio test; ties broken toward the lowest basic column index.
  // Returns leaving row position, or -1 for unbounded direction.
  int ratio_test(const Eigen::VectorXd& d) const {
    int leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int r = 0; r < m; ++r) {
      if (d[r] <= kPivotTol) continue;
      double ratio = std::max(xb[r], 0.0) / d[r];
      if (ratio < best - 1e-12 ||
          (ratio < best + 1e-12 && leave >= 0 && basis[r] < basis[leave])) {
        best = ratio;
        leave = r;
      }
    }
    return leave;
  }

  // Runs one phase; returns Optimal or Unbounded (ray in *ray when not null).
  SolveStatus run_phase(bool phase1, int max_iters, Eigen::VectorXd* ray) {
    while (true) {
      if (iterations >= max_iters)
        throw NumericalError("simplex iteration limit reached (" + std::to_string(max_iters) +
                             ")");
      int enter = price(phase1, /*allow_artificials=*/phase1);
      if (enter < 0) return SolveStatus::Optimal;
      Eigen::VectorXd d = ftran(enter);
      int leave = ratio_test(d);
      if (leave < 0) {
        if (ray) {
          ray->setZero(n);
          for (int r = 0; r < m; ++r)
            if (basis[r] < n) (*ray)[basis[r]] = -d[r];
          if (enter < n) (*ray)[enter] = 1.0;
        }
        return SolveStatus::Unbounded;
      }
      double step = std::max(xb[leave], 0.0) / d[leave];
      if (step < opts.feas_tol) {
        if (++degenerate_pivots > 3 * m) bland = true;
      } else {
        degenerate_pivots = 0;
      }
      pivot(leave, enter, d, step);
      ++iterations;
    }
  }

  // Pivot basic artificials out on any structural column with a nonzero
  // entry in their row; rows with none are left (redundant, value 0).
  void expel_artificials() {
    for (int r = 0; r < m; ++r) {
      if (!is_artificial(basis[r])) continue;
      for (int j = 0; j < n; ++j) {
        bool basic = false;
        for (int rr = 0; rr < m; ++rr)
          if (basis[rr] == j) {
            basic = true;
            break;
          }
        if (basic) continue;
        Eigen::VectorXd d = ftran(j);
        if (std::abs(d[r]) > 1e-7) {
          pivot(r, j, d, 0.0);
          break;
        }
      }
    }
  }
};

}  // namespace

LpSolution solve(const StandardLp& lp, const SimplexOptions& opts) {
  const int m = lp.rows();
  const int n = lp.cols();
  if (m > n) throw DimensionError("StandardLp requires m <= n");
  if (static_cast<int>(lp.labels.size()) != n)
    throw DimensionError("labels must cover all columns");
  if (lp.b.size() != m || lp.c.size() != n) throw DimensionError("c/b dimension mismatch");

  Tableau tab(lp, opts);
  int max_iters = opts.max_iterations > 0 ? opts.max_iterations : 50 * (m + n) + 1000;

  LpSolution sol;
  sol.labels = lp.labels;
  sol.b = lp.b;

  // Phase 1: drive the artificial infeasibility to zero.
  tab.run_phase(/*phase1=*/true, max_iters, nullptr);
  double infeas = 0.0;
  for (int r = 0; r < m; ++r)
    if (tab.is_artificial(tab.basis[r])) infeas += std::max(tab.xb[r], 0.0);
  if (infeas > 1e-7) {
    sol.status = SolveStatus::Infeasible;
    sol.phase1_residual = infeas;
    sol.iterations = tab.iterations;
    return sol;
  }
  tab.expel_artificials();

  // Phase 2 on the true costs.
  Eigen::VectorXd ray;
  SolveStatus st = tab.run_phase(/*phase1=*/false, max_iters, &ray);
  sol.iterations = tab.iterations;
  if (st == SolveStatus::Unbounded) {
    sol.status = SolveStatus::Unbounded;
    sol.ray = ray;
    return sol;
  }

  tab.reinvert();  // tight basis inverse for the post-optimal consumers

  sol.status = SolveStatus::Optimal;
  sol.basis = tab.basis;
  sol.basis_inverse = tab.binv;
  sol.x.setZero(n);
  sol.basic_costs.resize(m);
  for (int r = 0; r < m; ++r) {
    int col = tab.basis[r];
    double v = tab.xb[r];
    if (std::abs(v) < opts.feas_tol) v = std::max(v, 0.0);
    if (col < n) sol.x[col] = v;
    sol.basic_costs[r] = tab.cost_of(col, false);
  }
  sol.duals = tab.binv.transpose() * sol.basic_costs;
  sol.objective = lp.c.dot(sol.x);
  return sol;
}

Eigen::VectorXd refresh_basic_solution(const LpSolution& sol, const Eigen::VectorXd& b_new) {
  if (b_new.size() != sol.basis_inverse.rows())
    throw DimensionError("b_new dimension " + std::to_string(b_new.size()) + " != m " +
                         std::to_string(sol.basis_inverse.rows()));
  return sol.basis_inverse * b_new;
}

}  // namespace daopf
