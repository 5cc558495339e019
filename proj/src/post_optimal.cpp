#include "daopf/post_optimal.hpp"

#include <algorithm>
#include <cmath>

#include "daopf/errors.hpp"

namespace daopf {

namespace {
constexpr double kDegenTol = 1e-9;  // basic value treated as zero
}

Eigen::MatrixXd r_matrix(const LpSolution& sol, const RowMap& map) {
  const int m = sol.rows();
  const int nb = static_cast<int>(map.balance_rows.size());
  Eigen::MatrixXd r(m, nb);
  for (int j = 0; j < nb; ++j) r.col(j) = sol.basis_inverse.col(map.balance_rows[j]);
  return r;
}

SensitivityRange sa_range(const LpSolution& sol, int row, double feas_tol) {
  const int m = sol.rows();
  if (row < 0 || row >= m) throw DimensionError("sa_range: row out of bounds");
  SensitivityRange rng;
  rng.row = row;
  rng.delta_max = kUnboundedRange;
  rng.delta_min = -kUnboundedRange;
  rng.max_unbounded = rng.min_unbounded = true;
  Eigen::VectorXd xb = sol.basis_inverse * sol.b;
  for (int j = 0; j < m; ++j) {
    double alpha = sol.basis_inverse(j, row);
    if (std::abs(alpha) < 1e-12) continue;
    double v = std::max(xb[j], 0.0);
    double ratio = -v / alpha;
    if (alpha < 0.0) {  // blocking on the increase side
      if (ratio < rng.delta_max) {
        rng.delta_max = ratio;
        rng.max_unbounded = false;
      }
    } else {
      if (ratio > rng.delta_min) {
        rng.delta_min = ratio;
        rng.min_unbounded = false;
      }
    }
  }
  (void)feas_tol;
  return rng;
}

PvRange pv_range(const LpSolution& sol, const RowMap& map, int pv_bus_index, double pv_mw,
                 double pv_capacity_mw, double feas_tol) {
  if (pv_bus_index < 0 || pv_bus_index >= static_cast<int>(map.balance_rows.size()))
    throw DimensionError("pv_range: pv bus index out of bounds");
  PvRange r;
  r.row_range = sa_range(sol, map.balance_rows[pv_bus_index], feas_tol);
  // Delta b on the balance row is -delta_pv, so the admissible interval flips.
  r.delta_min = r.row_range.max_unbounded ? -kUnboundedRange : -r.row_range.delta_max;
  r.delta_max = r.row_range.min_unbounded ? kUnboundedRange : -r.row_range.delta_min;
  r.min_unbounded = r.row_range.max_unbounded;
  r.max_unbounded = r.row_range.min_unbounded;
  // Absolute window, clamped to the physically meaningful [0, capacity].
  r.pv_min = std::max(0.0, r.min_unbounded ? 0.0 : pv_mw + r.delta_min);
  r.pv_max = std::min(pv_capacity_mw, r.max_unbounded ? pv_capacity_mw : pv_mw + r.delta_max);
  return r;
}

ToleranceRanges itr(const LpSolution& sol, const RowMap& map, const Eigen::VectorXd& bus_loads,
                    double feas_tol) {
  const int m = sol.rows();
  const int nb = static_cast<int>(map.balance_rows.size());
  if (bus_loads.size() != nb) throw DimensionError("itr: bus_loads size mismatch");
  ToleranceRanges t;
  t.delta_fraction.resize(m);
  t.dec_mw = Eigen::VectorXd::Zero(nb);
  t.inc_mw = Eigen::VectorXd::Zero(nb);
  t.dec_unbounded.assign(nb, false);
  t.inc_unbounded.assign(nb, false);

  Eigen::VectorXd xb = sol.basis_inverse * sol.b;
  for (int i = 0; i < m; ++i) {
    double v = xb[i];
    if (v < kDegenTol) {  // primal degeneracy: any perturbation may change B
      t.delta_fraction[i] = 0.0;
      continue;
    }
    double denom = 0.0;
    for (int k = 0; k < nb; ++k)
      denom += std::abs(sol.basis_inverse(i, map.balance_rows[k]) * bus_loads[k]);
    t.delta_fraction[i] = denom > 0.0 ? v / denom : kUnboundedRange;
  }

  for (int j = 0; j < nb; ++j) {
    double abs_load = std::abs(bus_loads[j]);
    int col = map.balance_rows[j];
    double inc_frac = kUnboundedRange, dec_frac = kUnboundedRange;
    for (int i = 0; i < m; ++i) {
      double alpha = sol.basis_inverse(i, col);
      if (alpha < -1e-12)
        inc_frac = std::min(inc_frac, t.delta_fraction[i]);
      else if (alpha > 1e-12)
        dec_frac = std::min(dec_frac, t.delta_fraction[i]);
    }
    if (std::isinf(inc_frac)) {
      t.inc_unbounded[j] = true;
      t.inc_mw[j] = abs_load;  // reporting cap: +-100% of the bus load
    } else {
      t.inc_mw[j] = abs_load * inc_frac;
    }
    if (std::isinf(dec_frac)) {
      t.dec_unbounded[j] = true;
      t.dec_mw[j] = -abs_load;
    } else {
      t.dec_mw[j] = -abs_load * dec_frac;
    }
  }
  (void)feas_tol;
  return t;
}

bool ToleranceRanges::contains(const Eigen::VectorXd& delta_loads, double slack) const {
  if (delta_loads.size() != inc_mw.size()) throw DimensionError("contains: size mismatch");
  for (int j = 0; j < delta_loads.size(); ++j) {
    double lo = dec_unbounded[j] ? -kUnboundedRange : dec_mw[j];
    double hi = inc_unbounded[j] ? kUnboundedRange : inc_mw[j];
    if (delta_loads[j] < lo - slack || delta_loads[j] > hi + slack) return false;
  }
  return true;
}

ParticipationFactors participation_factors(const LpSolution& sol, const RowMap& map,
                                           const Eigen::VectorXd& delta_loads,
                                           const ToleranceRanges* ranges) {
  const int nb = static_cast<int>(map.balance_rows.size());
  if (delta_loads.size() != nb) throw DimensionError("participation_factors: size mismatch");
  double total = delta_loads.sum();
  if (total == 0.0) throw ZeroTotalDelta("total load delta is zero");
  if (ranges && !ranges->contains(delta_loads))
    throw OutOfRangeError("delta outside the current tolerance ranges; re-optimize");

  // Generator count: columns labeled Generator are the leading block.
  int ng = 0;
  while (ng < static_cast<int>(sol.labels.size()) &&
         sol.labels[ng].kind == ColumnKind::Generator)
    ++ng;

  ParticipationFactors pf;
  pf.total_delta_load = total;
  pf.beta = Eigen::VectorXd::Zero(ng);
  pf.delta_gen = Eigen::VectorXd::Zero(ng);
  for (int r = 0; r < sol.rows(); ++r) {
    int col = sol.basis[r];
    if (col >= ng) continue;  // nonbasic generators stay put: beta = 0
    double dx = 0.0;
    for (int j = 0; j < nb; ++j)
      dx += sol.basis_inverse(r, map.balance_rows[j]) * delta_loads[j];
    pf.delta_gen[col] = dx;
    pf.beta[col] = dx / total;
  }
  return pf;
}

LpSolution apply_update(const LpSolution& sol, const Eigen::VectorXd& delta_b, double feas_tol) {
  if (delta_b.size() != sol.b.size()) throw DimensionError("apply_update: delta_b size mismatch");
  Eigen::VectorXd b_new = sol.b + delta_b;
  Eigen::VectorXd xb_new = sol.basis_inverse * b_new;
  if (xb_new.minCoeff() < -feas_tol)
    throw BasisInvalidError("updated RHS violates basis feasibility (min basic value " +
                            std::to_string(xb_new.minCoeff()) + ")");

  LpSolution out = sol;  // basis, inverse, duals, labels bit-identical
  out.b = b_new;
  const int n = static_cast<int>(sol.x.size());
  for (int r = 0; r < sol.rows(); ++r) {
    int col = sol.basis[r];
    if (col < n) out.x[col] = std::max(xb_new[r], 0.0);
  }
  out.objective = sol.basic_costs.dot(xb_new);
  return out;
}

}  // namespace daopf
