#include "daopf/dcopf.hpp"

#include <cmath>
#include <vector>

#include "daopf/case_io.hpp"
#include "daopf/errors.hpp"

namespace daopf {

HourlyDcopfInstance make_instance(const NetworkCase& net, int hour, double system_load_mw,
                                  double pv_mw, int pv_bus_index,
                                  const std::optional<Eigen::VectorXd>& prev_gen_mw) {
  const int ng = net.n_generators();
  HourlyDcopfInstance inst;
  inst.hour = hour;
  inst.pv_bus_index = pv_bus_index;
  inst.pv_mw = pv_mw;
  inst.bus_load_mw.resize(net.n_buses());
  auto loads = bus_loads(net, system_load_mw);
  for (int i = 0; i < net.n_buses(); ++i) inst.bus_load_mw[i] = loads[i];

  inst.lo_mw.resize(ng);
  inst.hi_mw.resize(ng);
  for (int k = 0; k < ng; ++k) {
    const Generator& g = net.generators[k];
    double lo = g.p_min_mw;
    double hi = g.p_max_mw;
    if (prev_gen_mw) {
      lo = std::max(lo, (*prev_gen_mw)[k] - g.ramp_down_mw);
      hi = std::min(hi, (*prev_gen_mw)[k] + g.ramp_up_mw);
    }
    if (lo > hi)
      throw InfeasibleBoundsError("generator " + std::to_string(g.id) + " at hour " +
                                  std::to_string(hour) + ": effective bounds [" +
                                  std::to_string(lo) + ", " + std::to_string(hi) + "] empty");
    inst.lo_mw[k] = lo;
    inst.hi_mw[k] = hi;
  }
  return inst;
}

std::pair<StandardLp, RowMap> build(const NetworkCase& net, const HourlyDcopfInstance& inst) {
  const int ng = net.n_generators();
  const int nl = net.n_branches();
  const int nb = net.n_buses();
  const int m = 2 * ng + 2 * nl + nb;
  const int n = ng + nb + 2 * ng + 2 * nl;

  StandardLp lp;
  RowMap map;
  map.rows.reserve(m);
  map.balance_rows.assign(nb, -1);
  lp.b.resize(m);
  lp.c = Eigen::VectorXd::Zero(n);
  lp.labels.resize(n);

  const int theta0 = ng;        // first angle column
  const int slack0 = ng + nb;   // first slack column

  for (int k = 0; k < ng; ++k) {
    lp.c[k] = net.generators[k].cost;
    lp.labels[k] = {ColumnKind::Generator, k};
  }
  for (int i = 0; i < nb; ++i) lp.labels[theta0 + i] = {ColumnKind::Angle, i};

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(4 * ng + 8 * nl + 2 * nb));
  int row = 0;
  int slack = slack0;
  auto add_slack = [&](double coef) {
    trip.emplace_back(row, slack, coef);
    lp.labels[slack] = {ColumnKind::Slack, row};
    ++slack;
  };

  // P_g + s = hi
  for (int k = 0; k < ng; ++k) {
    trip.emplace_back(row, k, 1.0);
    add_slack(1.0);
    lp.b[row] = inst.hi_mw[k];
    map.rows.push_back({RowKind::GenUpper, k});
    ++row;
  }
  // -P_g + s = -lo
  for (int k = 0; k < ng; ++k) {
    trip.emplace_back(row, k, -1.0);
    add_slack(1.0);
    lp.b[row] = -inst.lo_mw[k];
    map.rows.push_back({RowKind::GenLower, k});
    ++row;
  }
  // flow + s = cap
  for (int l = 0; l < nl; ++l) {
    const Branch& br = net.branches[l];
    int fi = net.bus_index(br.from_bus), ti = net.bus_index(br.to_bus);
    double w = 1.0 / br.reactance;
    trip.emplace_back(row, theta0 + fi, w);
    trip.emplace_back(row, theta0 + ti, -w);
    add_slack(1.0);
    lp.b[row] = br.capacity_mw;
    map.rows.push_back({RowKind::LineFwd, l});
    ++row;
  }
  // flow - s = -cap  (keeps the RHS layout [... -cap ...])
  for (int l = 0; l < nl; ++l) {
    const Branch& br = net.branches[l];
    int fi = net.bus_index(br.from_bus), ti = net.bus_index(br.to_bus);
    double w = 1.0 / br.reactance;
    trip.emplace_back(row, theta0 + fi, w);
    trip.emplace_back(row, theta0 + ti, -w);
    add_slack(-1.0);
    lp.b[row] = -br.capacity_mw;
    map.rows.push_back({RowKind::LineRev, l});
    ++row;
  }
  // sum(P_g at i) - sum_j (theta_i - theta_j)/X = P_l(i) - P_pv(i)
  std::vector<double> diag(nb, 0.0);
  std::vector<Eigen::Triplet<double>> lap;
  for (int l = 0; l < nl; ++l) {
    const Branch& br = net.branches[l];
    int fi = net.bus_index(br.from_bus), ti = net.bus_index(br.to_bus);
    double w = 1.0 / br.reactance;
    diag[fi] += w;
    diag[ti] += w;
    lap.emplace_back(fi, ti, w);
    lap.emplace_back(ti, fi, w);
  }
  for (int i = 0; i < nb; ++i) {
    trip.emplace_back(row + i, theta0 + i, -diag[i]);
    map.rows.push_back({RowKind::BusBalance, i});
    map.balance_rows[i] = row + i;
    lp.b[row + i] = inst.bus_load_mw[i];
  }
  if (inst.pv_bus_index >= 0) lp.b[row + inst.pv_bus_index] -= inst.pv_mw;
  for (const auto& t : lap) trip.emplace_back(row + t.row(), theta0 + t.col(), t.value());
  for (int k = 0; k < ng; ++k) {
    int bi = net.bus_index(net.generators[k].bus);
    trip.emplace_back(row + bi, k, 1.0);
  }

  lp.a.resize(m, n);
  lp.a.setFromTriplets(trip.begin(), trip.end());
  return {std::move(lp), std::move(map)};
}

Dispatch extract_dispatch(const NetworkCase& net, const LpSolution& sol, const RowMap& map,
                          int ref_bus_index) {
  const int ng = net.n_generators();
  const int nb = net.n_buses();
  const int nl = net.n_branches();
  Dispatch d;
  d.gen_mw.resize(ng);
  d.angle_rad.resize(nb);
  d.flow_mw.resize(nl);
  for (int k = 0; k < ng; ++k) d.gen_mw[k] = sol.x[k];
  double ref = sol.x[ng + ref_bus_index];
  // Angles in the LP are MW-scaled (flow = dtheta / X with X in p.u. and
  // capacities in MW); divide by base to report radians.
  for (int i = 0; i < nb; ++i) d.angle_rad[i] = (sol.x[ng + i] - ref) / net.base_mva;
  for (int l = 0; l < nl; ++l) {
    const Branch& br = net.branches[l];
    int fi = net.bus_index(br.from_bus), ti = net.bus_index(br.to_bus);
    d.flow_mw[l] = (sol.x[ng + fi] - sol.x[ng + ti]) / br.reactance;
  }
  d.cost = sol.objective;
  (void)map;
  return d;
}

}  // namespace daopf
