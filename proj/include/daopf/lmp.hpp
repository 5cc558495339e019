#pragma once

#include "daopf/dcopf.hpp"

namespace daopf {

/// DC PTDF: gsf(k, j) = flow change on line k per MW injected at bus j and
/// withdrawn at the reference bus. Reference column is all zeros.
Eigen::MatrixXd gsf_matrix(const NetworkCase& net, int ref_bus_index);

struct LmpReport {
  double lambda = 0.0;            // energy component = LMP at the reference bus
  Eigen::VectorXd mu;             // per line, net congestion dual
  Eigen::MatrixXd gsf;            // line x bus
  Eigen::VectorXd lmp;            // balance-row duals, per bus
  Eigen::VectorXd lmp_composed;   // lambda + gsf' mu, independent composition
};

LmpReport lmp_report(const LpSolution& sol, const RowMap& map, const NetworkCase& net,
                     int ref_bus_index);

}  // namespace daopf
