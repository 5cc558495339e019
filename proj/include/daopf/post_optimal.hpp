#pragma once

#include <limits>

#include "daopf/dcopf.hpp"
#include "daopf/lp.hpp"

namespace daopf {

/// Admissible change of a single RHS entry keeping the basis feasible.
struct SensitivityRange {
  int row = -1;
  double delta_min = 0.0;  // <= 0
  double delta_max = 0.0;  // >= 0
  bool min_unbounded = false;
  bool max_unbounded = false;
};

/// Same range expressed for a PV plant modeled as negative load:
/// delta_b(balance row) = -delta_pv, so the interval flips sign.
struct PvRange {
  SensitivityRange row_range;   // raw RHS range of the balance row
  double delta_min = 0.0;       // admissible PV decrease (<= 0)
  double delta_max = 0.0;       // admissible PV increase (>= 0)
  double pv_min = 0.0;          // absolute MW window, clamped to [0, capacity]
  double pv_max = 0.0;
  bool min_unbounded = false;
  bool max_unbounded = false;
};

struct ToleranceRanges {
  Eigen::VectorXd dec_mw;            // per bus, <= 0
  Eigen::VectorXd inc_mw;            // per bus, >= 0
  Eigen::VectorXd delta_fraction;    // per basic row (inf where never blocking)
  std::vector<bool> dec_unbounded;   // reported value capped at |P_l|
  std::vector<bool> inc_unbounded;

  bool contains(const Eigen::VectorXd& delta_loads, double slack = 1e-9) const;
};

struct ParticipationFactors {
  Eigen::VectorXd beta;       // per generator, sums to 1
  Eigen::VectorXd delta_gen;  // MW per generator
  double total_delta_load = 0.0;
};

Eigen::MatrixXd r_matrix(const LpSolution& sol, const RowMap& map);

SensitivityRange sa_range(const LpSolution& sol, int row, double feas_tol = 1e-9);

PvRange pv_range(const LpSolution& sol, const RowMap& map, int pv_bus_index, double pv_mw,
                 double pv_capacity_mw, double feas_tol = 1e-9);

/// Individual tolerance ranges for simultaneous independent load changes.
/// `bus_loads` are the *net* loads on the balance rows (PV already netted).
ToleranceRanges itr(const LpSolution& sol, const RowMap& map, const Eigen::VectorXd& bus_loads,
                    double feas_tol = 1e-9);

/// beta_k = delta_Pg_k / sum(delta_loads). delta_loads validated against
/// `ranges` when given; out-of-range input throws OutOfRangeError.
ParticipationFactors participation_factors(const LpSolution& sol, const RowMap& map,
                                           const Eigen::VectorXd& delta_loads,
                                           const ToleranceRanges* ranges = nullptr);

/// Same basis, refreshed x_b and objective, duals untouched. Throws
/// BasisInvalidError when B^-1 (b + delta_b) drops below -feas_tol.
LpSolution apply_update(const LpSolution& sol, const Eigen::VectorXd& delta_b,
                        double feas_tol = 1e-9);

constexpr double kUnboundedRange = std::numeric_limits<double>::infinity();

}  // namespace daopf
