#pragma once

#include <optional>

#include "daopf/case.hpp"
#include "daopf/lp.hpp"

namespace daopf {

enum class RowKind { GenUpper, GenLower, LineFwd, LineRev, BusBalance };

struct RowInfo {
  RowKind kind;
  int entity;  // generator / branch / bus index (into NetworkCase vectors)
};

struct RowMap {
  std::vector<RowInfo> rows;
  std::vector<int> balance_rows;  // balance_rows[bus_index] = LP row

  int n_rows() const { return static_cast<int>(rows.size()); }
};

/// One hour of the ramp-constrained DCOPF, ramp limits folded into bounds.
struct HourlyDcopfInstance {
  int hour = 1;
  Eigen::VectorXd bus_load_mw;  // per bus index, PV not yet netted
  int pv_bus_index = -1;        // -1: no PV
  double pv_mw = 0.0;
  Eigen::VectorXd lo_mw;  // effective lower bound per generator
  Eigen::VectorXd hi_mw;  // effective upper bound per generator
};

/// Effective bounds: lo = max(p_min, prev - ramp_down), hi = min(p_max, prev + ramp_up).
/// Hour 1 (no prev_gen) uses the static bounds. Throws InfeasibleBoundsError if lo > hi.
HourlyDcopfInstance make_instance(const NetworkCase& net, int hour, double system_load_mw,
                                  double pv_mw, int pv_bus_index,
                                  const std::optional<Eigen::VectorXd>& prev_gen_mw);

/// Equality-form LP, variables X = [P_g, theta, S], all >= 0.
/// Row order: gen upper, gen lower, line fwd, line rev, bus balance;
/// RHS layout [hi, -lo, cap, -cap, P_l - P_pv].
std::pair<StandardLp, RowMap> build(const NetworkCase& net, const HourlyDcopfInstance& inst);

struct Dispatch {
  Eigen::VectorXd gen_mw;     // per generator
  Eigen::VectorXd angle_rad;  // per bus, reference-bus-subtracted
  Eigen::VectorXd flow_mw;    // per branch, from->to positive
  double cost = 0.0;
};

Dispatch extract_dispatch(const NetworkCase& net, const LpSolution& sol, const RowMap& map,
                          int ref_bus_index);

}  // namespace daopf
