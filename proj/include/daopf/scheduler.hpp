#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "daopf/case.hpp"
#include "daopf/dcopf.hpp"
#include "daopf/lmp.hpp"
#include "daopf/post_optimal.hpp"
#include "daopf/uncertainty.hpp"

namespace daopf {

struct RunConfig {
  std::string case_path;
  std::string profile_path;
  std::string event_path;   // optional
  std::string output_dir = "out";
  int pv_bus = -1;          // bus id, -1: none
  int ref_bus = -1;         // bus id, -1: first bus
  int hours = 24;
  double pv_capacity_mw = 60.0;
  std::vector<double> load_sigma_pct = {2.0, 5.0, 10.0};
  BimodalWeibull pv_model;  // c1/c2 rescaled per hour to the forecast mean
  double feas_tol = 1e-9;
  double opt_tol = 1e-8;
  bool dump_lp = false;     // debug dump of (A, b, c, basis) per hour
};

struct UncertaintyEvent {
  int hour = 0;
  enum class Kind { PvDelta, LoadDeltaVector } kind = Kind::PvDelta;
  double pv_delta_mw = 0.0;              // signed change of PV output
  Eigen::VectorXd load_delta_mw;         // per bus, Kind::LoadDeltaVector
};

struct HourState {
  int hour = 1;
  HourlyDcopfInstance instance;
  StandardLp lp;
  RowMap map;
  LpSolution solution;
  Dispatch dispatch;
  LmpReport lmp;
  std::optional<PvRange> pv;             // present when PV output > 0
  ToleranceRanges tolerance;
  std::vector<ConfidenceResult> confidence;
};

struct ScheduleReport {
  std::vector<HourState> hours;
  double total_cost = 0.0;
};

struct EventOutcome {
  UncertaintyEvent event;
  bool absorbed = false;   // post-optimal path; false: full re-solve fallback
  Eigen::VectorXd beta;
  Eigen::VectorXd delta_gen_mw;
  double total_delta_mw = 0.0;
  PvRange pv_before, pv_after;           // valid for PV events
  ToleranceRanges itr_before, itr_after;
  double max_lmp_change = 0.0;
};

struct EventReport {
  std::vector<EventOutcome> outcomes;
  int fallbacks = 0;
};

struct TimingReport {
  double sa_ms = 0.0;
  double itr_ms = 0.0;
  double beta_ms = 0.0;
  double update_ms = 0.0;   // range update: refresh + new SA + new ITR
  double solve_ms = 0.0;    // cold solve median, for the speedup ratio
  double speedup = 0.0;
  int repetitions = 0;
};

struct Inputs {
  NetworkCase net;
  HourlyProfile profile;
};

Inputs load_inputs(const RunConfig& cfg);

ScheduleReport run_schedule(const RunConfig& cfg, const Inputs& in);

/// Events are applied successively against the scheduled hour states;
/// `report` is mutated in place to the post-event states.
EventReport run_events(const RunConfig& cfg, const Inputs& in, ScheduleReport& report,
                       const std::vector<UncertaintyEvent>& events);

std::vector<UncertaintyEvent> load_events(const std::string& path, const NetworkCase& net);

TimingReport bench(const RunConfig& cfg, const Inputs& in, int repetitions = 200);

// Report writers (CSV/JSON, column order documented in the README).
void write_reports(const RunConfig& cfg, const Inputs& in, const ScheduleReport& report);
void write_event_report(const RunConfig& cfg, const Inputs& in, const EventReport& events);
std::string timing_json(const TimingReport& t);

}  // namespace daopf
