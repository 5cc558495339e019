#include "daopf/lmp.hpp"

#include <cmath>

#include "daopf/errors.hpp"

namespace daopf {

Eigen::MatrixXd gsf_matrix(const NetworkCase& net, int ref_bus_index) {
  const int nb = net.n_buses();
  const int nl = net.n_branches();
  if (ref_bus_index < 0 || ref_bus_index >= nb)
    throw DimensionError("gsf_matrix: reference bus index out of bounds");

  // Reduced susceptance matrix (reference row/column removed).
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(nb, nb);
  for (const auto& br : net.branches) {
    int fi = net.bus_index(br.from_bus), ti = net.bus_index(br.to_bus);
    double w = 1.0 / br.reactance;
    lap(fi, fi) += w;
    lap(ti, ti) += w;
    lap(fi, ti) -= w;
    lap(ti, fi) -= w;
  }
  auto red = [&](int i) { return i < ref_bus_index ? i : i - 1; };
  Eigen::MatrixXd lred(nb - 1, nb - 1);
  for (int i = 0; i < nb; ++i) {
    if (i == ref_bus_index) continue;
    for (int j = 0; j < nb; ++j) {
      if (j == ref_bus_index) continue;
      lred(red(i), red(j)) = lap(i, j);
    }
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(lred);
  if (!lu.isInvertible())
    throw SingularNetworkError("reduced susceptance matrix is singular (disconnected network?)");
  Eigen::MatrixXd zred = lu.inverse();

  // theta response to a 1 MW injection at bus j (withdrawn at ref): column of zred.
  Eigen::MatrixXd gsf = Eigen::MatrixXd::Zero(nl, nb);
  for (int j = 0; j < nb; ++j) {
    if (j == ref_bus_index) continue;  // reference column stays zero
    for (int l = 0; l < nl; ++l) {
      const Branch& br = net.branches[l];
      int fi = net.bus_index(br.from_bus), ti = net.bus_index(br.to_bus);
      double th_f = fi == ref_bus_index ? 0.0 : zred(red(fi), red(j));
      double th_t = ti == ref_bus_index ? 0.0 : zred(red(ti), red(j));
      gsf(l, j) = (th_f - th_t) / br.reactance;
    }
  }
  return gsf;
}

LmpReport lmp_report(const LpSolution& sol, const RowMap& map, const NetworkCase& net,
                     int ref_bus_index) {
  const int nb = net.n_buses();
  const int nl = net.n_branches();
  LmpReport rep;
  rep.gsf = gsf_matrix(net, ref_bus_index);
  rep.lmp.resize(nb);
  for (int j = 0; j < nb; ++j) rep.lmp[j] = sol.duals[map.balance_rows[j]];
  rep.lambda = rep.lmp[ref_bus_index];

  // Net congestion dual per line: fwd and rev rows both carry +flow
  // coefficients, so their equality duals add.
  rep.mu = Eigen::VectorXd::Zero(nl);
  for (int r = 0; r < map.n_rows(); ++r) {
    const RowInfo& info = map.rows[r];
    if (info.kind == RowKind::LineFwd || info.kind == RowKind::LineRev)
      rep.mu[info.entity] += sol.duals[r];
  }

  rep.lmp_composed.resize(nb);
  for (int j = 0; j < nb; ++j)
    rep.lmp_composed[j] = rep.lambda + rep.gsf.col(j).dot(rep.mu);
  return rep;
}

}  // namespace daopf
