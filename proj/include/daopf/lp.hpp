#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

namespace daopf {

enum class ColumnKind { Generator, Angle, Slack };

struct ColumnLabel {
  ColumnKind kind = ColumnKind::Slack;
  int entity = -1;  // generator index / bus index / owning row index
};

/// min c'x  s.t.  Ax = b, x >= 0.
struct StandardLp {
  Eigen::VectorXd c;
  Eigen::SparseMatrix<double> a;  // m x n, column-major
  Eigen::VectorXd b;
  std::vector<ColumnLabel> labels;  // one per column

  int rows() const { return static_cast<int>(a.rows()); }
  int cols() const { return static_cast<int>(a.cols()); }
};

enum class SolveStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  SolveStatus status = SolveStatus::Infeasible;
  Eigen::VectorXd x;               // n, full primal vector
  std::vector<int> basis;          // m, basis[r] = column basic in row position r
  Eigen::MatrixXd basis_inverse;   // m x m
  Eigen::VectorXd duals;           // pi = c_B' B^-1
  Eigen::VectorXd basic_costs;     // c[basis]
  Eigen::VectorXd b;               // RHS this solution corresponds to
  std::vector<ColumnLabel> labels;
  double objective = 0.0;
  Eigen::VectorXd ray;             // unbounded certificate, empty otherwise
  int iterations = 0;
  double phase1_residual = 0.0;    // > tol when Infeasible

  Eigen::VectorXd basic_values() const;
  int rows() const { return static_cast<int>(basis.size()); }
};

struct SimplexOptions {
  double feas_tol = 1e-9;
  double opt_tol = 1e-8;
  int reinvert_every = 50;   // pivots between explicit re-inversions
  int max_iterations = 0;    // 0: 50*(m+n) cap
  double max_condition = 1e12;
};

/// Two-phase revised simplex keeping an explicit basis inverse.
/// Dantzig pricing, switching to Bland's rule after 3m degenerate pivots.
/// Ratio-test ties broken toward the lowest basic column index.
LpSolution solve(const StandardLp& lp, const SimplexOptions& opts = {});

/// B^-1 * b_new; no feasibility check (caller's job).
Eigen::VectorXd refresh_basic_solution(const LpSolution& sol, const Eigen::VectorXd& b_new);

}  // namespace daopf
