#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "daopf/errors.hpp"
#include "daopf/scheduler.hpp"
#include "fixtures.hpp"

using namespace daopf;
namespace fs = std::filesystem;

namespace {

RunConfig base_config() {
  RunConfig cfg;
  cfg.case_path = fixtures::data_dir() + "/ieee30.json";
  cfg.profile_path = fixtures::data_dir() + "/profile24.csv";
  cfg.pv_bus = 5;
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("24-hour schedule is feasible, balanced, and ramp-consistent") {
  RunConfig cfg = base_config();
  Inputs in = load_inputs(cfg);
  ScheduleReport rep = run_schedule(cfg, in);
  REQUIRE(rep.hours.size() == 24);
  CHECK(rep.total_cost > 0.0);
  for (size_t i = 0; i < rep.hours.size(); ++i) {
    const HourState& st = rep.hours[i];
    CHECK(st.solution.status == SolveStatus::Optimal);
    double net_load = st.instance.bus_load_mw.sum() - st.instance.pv_mw;
    CHECK(std::abs(st.dispatch.gen_mw.sum() - net_load) < 1e-6);
    for (int l = 0; l < in.net.n_branches(); ++l)
      CHECK(std::abs(st.dispatch.flow_mw[l]) <= in.net.branches[l].capacity_mw + 1e-6);
    for (int k = 0; k < in.net.n_generators(); ++k) {
      const auto& g = in.net.generators[k];
      CHECK(st.dispatch.gen_mw[k] >= g.p_min_mw - 1e-7);
      CHECK(st.dispatch.gen_mw[k] <= g.p_max_mw + 1e-7);
      if (i > 0) {
        double ramp = st.dispatch.gen_mw[k] - rep.hours[i - 1].dispatch.gen_mw[k];
        CHECK(ramp <= g.ramp_up_mw + 1e-7);
        CHECK(-ramp <= g.ramp_down_mw + 1e-7);
      }
    }
    // daylight hours carry a PV admissibility range and a PV confidence row
    if (st.instance.pv_mw > 0.0) {
      REQUIRE(st.pv.has_value());
      CHECK(st.pv->pv_min >= -1e-9);
      CHECK(st.pv->pv_max <= cfg.pv_capacity_mw + 1e-9);
      CHECK(st.pv->pv_min <= st.instance.pv_mw + 1e-9);
    }
    // confidence rows: 1 PV + one per sigma level, values in [0, 1]
    REQUIRE(st.confidence.size() == 1 + cfg.load_sigma_pct.size());
    for (const auto& c : st.confidence) {
      CHECK(c.confidence >= 0.0);
      CHECK(c.confidence <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("the bundled PV event script is absorbed without any re-solve") {
  RunConfig cfg = base_config();
  cfg.event_path = fixtures::data_dir() + "/events_pv.csv";
  Inputs in = load_inputs(cfg);
  ScheduleReport rep = run_schedule(cfg, in);
  auto events = load_events(cfg.event_path, in.net);
  REQUIRE(events.size() == 10);
  EventReport er = run_events(cfg, in, rep, events);
  CHECK(er.fallbacks == 0);
  for (const auto& oc : er.outcomes) {
    CHECK(oc.absorbed);
    // conservation: generation change covers the net-load change
    CHECK(std::abs(oc.delta_gen_mw.sum() - oc.total_delta_mw) < 1e-9);
    CHECK(std::abs(oc.beta.sum() - 1.0) < 1e-9);
  }
}

TEST_CASE("post-event state matches a cold re-solve of the same data") {
  RunConfig cfg = base_config();
  Inputs in = load_inputs(cfg);
  ScheduleReport rep = run_schedule(cfg, in);
  auto events = load_events(fixtures::data_dir() + "/events_pv.csv", in.net);
  run_events(cfg, in, rep, events);
  for (const auto& ev : events) {
    const HourState& st = rep.hours[ev.hour - 1];
    auto [lp2, map2] = build(in.net, st.instance);
    LpSolution cold = solve(lp2);
    REQUIRE(cold.status == SolveStatus::Optimal);
    CHECK(std::abs(cold.objective - st.solution.objective) /
              std::max(1.0, std::abs(cold.objective)) <
          1e-8);
    // successive ranges recomputed on the updated basis equal fresh ones
    ToleranceRanges fresh = itr(cold, map2, [&] {
      Eigen::VectorXd loads = st.instance.bus_load_mw;
      loads[st.instance.pv_bus_index] -= st.instance.pv_mw;
      return loads;
    }());
    if (cold.basis == st.solution.basis) {
      CHECK((fresh.dec_mw - st.tolerance.dec_mw).cwiseAbs().maxCoeff() < 1e-8);
      CHECK((fresh.inc_mw - st.tolerance.inc_mw).cwiseAbs().maxCoeff() < 1e-8);
    }
  }
}

TEST_CASE("an oversized event falls back to re-optimization and is marked") {
  RunConfig cfg = base_config();
  Inputs in = load_inputs(cfg);
  ScheduleReport rep = run_schedule(cfg, in);
  UncertaintyEvent big;
  big.hour = 12;
  big.kind = UncertaintyEvent::Kind::PvDelta;
  big.pv_delta_mw = -45.0;  // wipes out nearly all PV at the peak PV hour
  double pv_min_delta = rep.hours[11].pv->delta_min;
  REQUIRE(big.pv_delta_mw < pv_min_delta);  // genuinely outside the range
  EventReport er = run_events(cfg, in, rep, {big});
  REQUIRE(er.outcomes.size() == 1);
  CHECK_FALSE(er.outcomes[0].absorbed);
  CHECK(er.fallbacks == 1);
  // the fallback still lands on a balanced, feasible hour
  const HourState& st = rep.hours[11];
  CHECK(st.solution.status == SolveStatus::Optimal);
  CHECK(std::abs(st.dispatch.gen_mw.sum() -
                 (st.instance.bus_load_mw.sum() - st.instance.pv_mw)) < 1e-6);
  CHECK(std::abs(er.outcomes[0].delta_gen_mw.sum() - er.outcomes[0].total_delta_mw) < 1e-6);
}

TEST_CASE("event parsing: pv deltas, scalar loads, and vector loads") {
  NetworkCase net = fixtures::two_bus();
  fs::path p = fs::temp_directory_path() / "daopf_events_test.csv";
  {
    std::ofstream f(p);
    f << "hour,kind,value\n";
    f << "3,pv_delta,-2.5\n";
    f << "# comment line\n";
    f << "5,load_delta,10\n";
    f << "7,load_delta,1;9\n";
  }
  auto events = load_events(p.string(), net);
  REQUIRE(events.size() == 3);
  CHECK(events[0].hour == 3);
  CHECK(events[0].kind == UncertaintyEvent::Kind::PvDelta);
  CHECK(events[0].pv_delta_mw == doctest::Approx(-2.5));
  // scalar spread by load fraction: two_bus has all load at bus 2
  CHECK(events[1].load_delta_mw[0] == doctest::Approx(0.0));
  CHECK(events[1].load_delta_mw[1] == doctest::Approx(10.0));
  CHECK(events[2].load_delta_mw[0] == doctest::Approx(1.0));
  CHECK(events[2].load_delta_mw[1] == doctest::Approx(9.0));

  {
    std::ofstream f(p);
    f << "hour,kind,value\n1,nonsense,5\n";
  }
  CHECK_THROWS_AS(load_events(p.string(), net), ParseError);
  fs::remove(p);
}

TEST_CASE("event validation: bad hour and pv event without a pv bus") {
  RunConfig cfg = base_config();
  Inputs in = load_inputs(cfg);
  ScheduleReport rep = run_schedule(cfg, in);
  UncertaintyEvent ev;
  ev.hour = 99;
  CHECK_THROWS_AS(run_events(cfg, in, rep, {ev}), ValidationError);

  RunConfig no_pv = base_config();
  no_pv.pv_bus = -1;
  Inputs in2 = load_inputs(no_pv);
  ScheduleReport rep2 = run_schedule(no_pv, in2);
  UncertaintyEvent pv_ev;
  pv_ev.hour = 12;
  pv_ev.kind = UncertaintyEvent::Kind::PvDelta;
  pv_ev.pv_delta_mw = -1.0;
  CHECK_THROWS_AS(run_events(no_pv, in2, rep2, {pv_ev}), ValidationError);
}

TEST_CASE("report writers are byte-deterministic across runs") {
  RunConfig cfg = base_config();
  cfg.event_path = fixtures::data_dir() + "/events_pv.csv";
  auto run_into = [&](const std::string& dir) {
    RunConfig c = cfg;
    c.output_dir = dir;
    Inputs in = load_inputs(c);
    ScheduleReport rep = run_schedule(c, in);
    auto events = load_events(c.event_path, in.net);
    write_reports(c, in, rep);
    EventReport er = run_events(c, in, rep, events);
    write_event_report(c, in, er);
  };
  fs::path a = fs::temp_directory_path() / "daopf_det_a";
  fs::path b = fs::temp_directory_path() / "daopf_det_b";
  run_into(a.string());
  run_into(b.string());
  for (const char* name :
       {"dispatch.csv", "lmp.csv", "ranges.csv", "confidence.csv", "plot.csv", "summary.json",
        "events.csv"}) {
    INFO(name);
    std::string sa = slurp(a / name), sb = slurp(b / name);
    CHECK(sa == sb);
    CHECK(!sa.empty());
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("bench reports positive medians and a meaningful speedup") {
  RunConfig cfg = base_config();
  Inputs in = load_inputs(cfg);
  TimingReport t = bench(cfg, in, 20);
  CHECK(t.sa_ms > 0.0);
  CHECK(t.itr_ms > 0.0);
  CHECK(t.beta_ms > 0.0);
  CHECK(t.update_ms > 0.0);
  CHECK(t.solve_ms > 0.0);
  CHECK(t.speedup > 0.0);
  std::string j = timing_json(t);
  CHECK(j.find("speedup_update_vs_solve") != std::string::npos);
}

TEST_CASE("impossible hour raises HourInfeasibleError naming the hour") {
  RunConfig cfg = base_config();
  Inputs in = load_inputs(cfg);
  in.profile.system_load_mw[10] = 5000.0;  // beyond total installed capacity
  try {
    run_schedule(cfg, in);
    FAIL("expected HourInfeasibleError");
  } catch (const HourInfeasibleError& e) {
    CHECK(e.hour == 11);
    CHECK(std::string(e.what()).find("11") != std::string::npos);
  }
}
