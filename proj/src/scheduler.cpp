#include "daopf/scheduler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "daopf/case_io.hpp"
#include "daopf/errors.hpp"

namespace daopf {

namespace fs = std::filesystem;
using nlohmann::json;

Inputs load_inputs(const RunConfig& cfg) {
  Inputs in;
  in.net = load_case(cfg.case_path);
  in.profile = load_profile(cfg.profile_path, in.net, cfg.hours, cfg.pv_bus);
  return in;
}

namespace {

int ref_bus_index(const RunConfig& cfg, const NetworkCase& net) {
  if (cfg.ref_bus < 0) return 0;
  int idx = net.bus_index(cfg.ref_bus);
  if (idx < 0) throw ValidationError("reference bus " + std::to_string(cfg.ref_bus) + " unknown");
  return idx;
}

Eigen::VectorXd net_bus_loads(const HourState& st) {
  Eigen::VectorXd loads = st.instance.bus_load_mw;
  if (st.instance.pv_bus_index >= 0) loads[st.instance.pv_bus_index] -= st.instance.pv_mw;
  return loads;
}

void analyze_hour(const RunConfig& cfg, const Inputs& in, HourState& st) {
  int ref = ref_bus_index(cfg, in.net);
  st.dispatch = extract_dispatch(in.net, st.solution, st.map, ref);
  st.lmp = lmp_report(st.solution, st.map, in.net, ref);
  st.tolerance = itr(st.solution, st.map, net_bus_loads(st), cfg.feas_tol);
  if (st.instance.pv_bus_index >= 0 && st.instance.pv_mw > 0.0)
    st.pv = pv_range(st.solution, st.map, st.instance.pv_bus_index, st.instance.pv_mw,
                     cfg.pv_capacity_mw, cfg.feas_tol);
  else
    st.pv.reset();

  st.confidence.clear();
  if (st.instance.pv_bus_index >= 0) {
    ConfidenceResult c;
    c.hour = st.hour;
    c.entity = "pv_bus_" + std::to_string(in.net.buses[st.instance.pv_bus_index].id);
    if (st.pv) {
      BimodalWeibull model = cfg.pv_model.scaled_to_mean(st.instance.pv_mw);
      c.lower_mw = st.pv->pv_min;
      c.upper_mw = st.pv->pv_max;
      c.confidence = confidence(model, c.lower_mw, c.upper_mw);
    } else {
      c.applicable = false;  // night hour, no PV output to perturb
    }
    st.confidence.push_back(c);
  }
  double system_load = st.instance.bus_load_mw.sum();
  double dec_total = st.tolerance.dec_mw.sum();
  double inc_total = st.tolerance.inc_mw.sum();
  for (double pct : cfg.load_sigma_pct) {
    NormalLoad model{system_load, system_load * pct / 100.0};
    ConfidenceResult c;
    c.hour = st.hour;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "system_load_sigma_%g", pct);
    c.entity = buf;
    c.lower_mw = system_load + dec_total;
    c.upper_mw = system_load + inc_total;
    c.confidence = confidence(model, c.lower_mw, c.upper_mw);
    st.confidence.push_back(c);
  }
}

void dump_lp_file(const RunConfig& cfg, const HourState& st) {
  fs::create_directories(cfg.output_dir);
  std::ofstream out(fs::path(cfg.output_dir) / ("hour_" + std::to_string(st.hour) + "_lp.txt"));
  out << "%% daopf lp dump: m n nnz, then c, b, A triplets, basis\n";
  out << st.lp.rows() << " " << st.lp.cols() << " " << st.lp.a.nonZeros() << "\n";
  out << "c";
  for (int j = 0; j < st.lp.cols(); ++j) out << " " << st.lp.c[j];
  out << "\nb";
  for (int i = 0; i < st.lp.rows(); ++i) out << " " << st.lp.b[i];
  out << "\n";
  for (int k = 0; k < st.lp.a.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(st.lp.a, k); it; ++it)
      out << it.row() + 1 << " " << it.col() + 1 << " " << it.value() << "\n";
  out << "basis";
  for (int c : st.solution.basis) out << " " << c;
  out << "\n";
}

}  // namespace

ScheduleReport run_schedule(const RunConfig& cfg, const Inputs& in) {
  ScheduleReport rep;
  SimplexOptions sopts;
  sopts.feas_tol = cfg.feas_tol;
  sopts.opt_tol = cfg.opt_tol;
  int pv_idx = cfg.pv_bus >= 0 ? in.net.bus_index(cfg.pv_bus) : -1;
  std::optional<Eigen::VectorXd> prev_gen;

  for (int h = 1; h <= in.profile.hours; ++h) {
    HourState st;
    st.hour = h;
    st.instance = make_instance(in.net, h, in.profile.system_load_mw[h - 1],
                                in.profile.pv_mw[h - 1], pv_idx, prev_gen);
    std::tie(st.lp, st.map) = build(in.net, st.instance);
    st.solution = solve(st.lp, sopts);
    if (st.solution.status != SolveStatus::Optimal) {
      std::ostringstream why;
      if (st.solution.status == SolveStatus::Infeasible)
        why << "phase-1 residual " << st.solution.phase1_residual << " MW after "
            << st.solution.iterations << " iterations";
      else
        why << "unbounded";
      throw HourInfeasibleError(h, why.str());
    }
    analyze_hour(cfg, in, st);
    if (cfg.dump_lp) dump_lp_file(cfg, st);
    prev_gen = st.dispatch.gen_mw;
    rep.total_cost += st.dispatch.cost;
    rep.hours.push_back(std::move(st));
  }
  return rep;
}

std::vector<UncertaintyEvent> load_events(const std::string& path, const NetworkCase& net) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open event file: " + path);
  std::vector<UncertaintyEvent> events;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (lineno == 1 && line.rfind("hour,", 0) == 0) continue;  // header
    std::istringstream row(line);
    std::string hour_s, kind_s, value_s;
    if (!std::getline(row, hour_s, ',') || !std::getline(row, kind_s, ',') ||
        !std::getline(row, value_s))
      throw ParseError("event line " + std::to_string(lineno) + ": expected hour,kind,value");
    UncertaintyEvent ev;
    ev.hour = std::stoi(hour_s);
    if (kind_s == "pv_delta") {
      ev.kind = UncertaintyEvent::Kind::PvDelta;
      ev.pv_delta_mw = std::stod(value_s);
    } else if (kind_s == "load_delta") {
      ev.kind = UncertaintyEvent::Kind::LoadDeltaVector;
      ev.load_delta_mw.resize(net.n_buses());
      if (value_s.find(';') != std::string::npos) {
        std::istringstream vs(value_s);
        std::string cell;
        for (int i = 0; i < net.n_buses(); ++i) {
          if (!std::getline(vs, cell, ';'))
            throw ParseError("event line " + std::to_string(lineno) + ": load vector needs " +
                             std::to_string(net.n_buses()) + " entries");
          ev.load_delta_mw[i] = std::stod(cell);
        }
      } else {
        // scalar system change distributed by load fraction
        double total = std::stod(value_s);
        for (int i = 0; i < net.n_buses(); ++i)
          ev.load_delta_mw[i] = total * net.buses[i].load_fraction;
      }
    } else {
      throw ParseError("event line " + std::to_string(lineno) + ": unknown kind '" + kind_s + "'");
    }
    events.push_back(std::move(ev));
  }
  return events;
}

EventReport run_events(const RunConfig& cfg, const Inputs& in, ScheduleReport& report,
                       const std::vector<UncertaintyEvent>& events) {
  EventReport out;
  for (const auto& ev : events) {
    if (ev.hour < 1 || ev.hour > static_cast<int>(report.hours.size()))
      throw ValidationError("event hour " + std::to_string(ev.hour) + " outside the horizon");
    HourState& st = report.hours[ev.hour - 1];
    EventOutcome oc;
    oc.event = ev;
    if (st.pv) oc.pv_before = *st.pv;
    oc.itr_before = st.tolerance;
    Eigen::VectorXd lmp_before = st.lmp.lmp;

    // Event expressed as a load-delta vector on the balance rows.
    Eigen::VectorXd delta_loads = Eigen::VectorXd::Zero(in.net.n_buses());
    bool in_range = false;
    if (ev.kind == UncertaintyEvent::Kind::PvDelta) {
      if (st.instance.pv_bus_index < 0)
        throw ValidationError("pv_delta event at hour " + std::to_string(ev.hour) +
                              " but no pv bus configured");
      delta_loads[st.instance.pv_bus_index] = -ev.pv_delta_mw;
      in_range = st.pv && ev.pv_delta_mw >= st.pv->delta_min - 1e-9 &&
                 ev.pv_delta_mw <= st.pv->delta_max + 1e-9;
    } else {
      delta_loads = ev.load_delta_mw;
      in_range = st.tolerance.contains(delta_loads);
    }
    oc.total_delta_mw = delta_loads.sum();

    if (in_range) {
      Eigen::VectorXd delta_b = Eigen::VectorXd::Zero(st.lp.rows());
      for (int j = 0; j < in.net.n_buses(); ++j)
        delta_b[st.map.balance_rows[j]] = delta_loads[j];
      try {
        ParticipationFactors pf = participation_factors(st.solution, st.map, delta_loads);
        st.solution = apply_update(st.solution, delta_b, cfg.feas_tol);
        st.lp.b = st.solution.b;
        oc.beta = pf.beta;
        oc.delta_gen_mw = pf.delta_gen;
        oc.absorbed = true;
      } catch (const BasisInvalidError&) {
        in_range = false;  // endpoint noise: fall through to re-solve
      }
    }
    if (!in_range) {
      ++out.fallbacks;
      oc.absorbed = false;
    }

    // Commit the new operating data to the hour state.
    if (ev.kind == UncertaintyEvent::Kind::PvDelta)
      st.instance.pv_mw += ev.pv_delta_mw;
    else
      st.instance.bus_load_mw += ev.load_delta_mw;

    if (!oc.absorbed) {
      std::tie(st.lp, st.map) = build(in.net, st.instance);
      SimplexOptions sopts;
      sopts.feas_tol = cfg.feas_tol;
      sopts.opt_tol = cfg.opt_tol;
      Eigen::VectorXd gen_before(in.net.n_generators());
      for (int k = 0; k < in.net.n_generators(); ++k) gen_before[k] = st.dispatch.gen_mw[k];
      st.solution = solve(st.lp, sopts);
      if (st.solution.status != SolveStatus::Optimal)
        throw HourInfeasibleError(ev.hour, "re-solve after out-of-range event failed");
      oc.delta_gen_mw = extract_dispatch(in.net, st.solution, st.map,
                                         ref_bus_index(cfg, in.net))
                            .gen_mw -
                        gen_before;
      oc.beta = oc.total_delta_mw != 0.0 ? (oc.delta_gen_mw / oc.total_delta_mw).eval()
                                         : Eigen::VectorXd::Zero(in.net.n_generators());
    }

    analyze_hour(cfg, in, st);  // successive range update on the new state
    if (st.pv) oc.pv_after = *st.pv;
    oc.itr_after = st.tolerance;
    oc.max_lmp_change = (st.lmp.lmp - lmp_before).cwiseAbs().maxCoeff();
    out.outcomes.push_back(std::move(oc));
  }
  return out;
}

TimingReport bench(const RunConfig& cfg, const Inputs& in, int repetitions) {
  ScheduleReport rep = run_schedule(cfg, in);
  // Pick the PV hour with the largest output; fall back to the peak-load hour.
  int pick = 0;
  double best = -1.0;
  for (size_t i = 0; i < rep.hours.size(); ++i) {
    double score = rep.hours[i].instance.pv_mw > 0 ? 1000.0 + rep.hours[i].instance.pv_mw
                                                   : rep.hours[i].instance.bus_load_mw.sum();
    if (score > best) {
      best = score;
      pick = static_cast<int>(i);
    }
  }
  HourState& st = rep.hours[pick];
  Eigen::VectorXd loads = net_bus_loads(st);
  int probe_row = st.instance.pv_bus_index >= 0 ? st.map.balance_rows[st.instance.pv_bus_index]
                                                : st.map.balance_rows[0];
  // A small in-box delta for the beta / update timings.
  Eigen::VectorXd delta = Eigen::VectorXd::Zero(in.net.n_buses());
  for (int j = 0; j < in.net.n_buses(); ++j) delta[j] = 0.25 * st.tolerance.inc_mw[j];
  Eigen::VectorXd delta_b = Eigen::VectorXd::Zero(st.lp.rows());
  for (int j = 0; j < in.net.n_buses(); ++j) delta_b[st.map.balance_rows[j]] = delta[j];

  auto median_ms = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
  };
  auto time_it = [&](auto&& fn, int reps) {
    std::vector<double> ms;
    ms.reserve(reps);
    for (int i = 0; i < reps; ++i) {
      auto t0 = std::chrono::steady_clock::now();
      fn();
      auto t1 = std::chrono::steady_clock::now();
      ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return median_ms(ms);
  };

  TimingReport t;
  t.repetitions = repetitions;
  volatile double sink = 0.0;
  t.sa_ms = time_it([&] { sink += sa_range(st.solution, probe_row).delta_max; }, repetitions);
  t.itr_ms = time_it([&] { sink += itr(st.solution, st.map, loads).inc_mw.sum(); }, repetitions);
  t.beta_ms = time_it(
      [&] { sink += participation_factors(st.solution, st.map, delta).beta.sum(); }, repetitions);
  t.update_ms = time_it(
      [&] {
        LpSolution up = apply_update(st.solution, delta_b, cfg.feas_tol);
        sink += sa_range(up, probe_row).delta_max;
        sink += itr(up, st.map, loads + delta).inc_mw.sum();
      },
      repetitions);
  SimplexOptions sopts;
  sopts.feas_tol = cfg.feas_tol;
  sopts.opt_tol = cfg.opt_tol;
  int solve_reps = std::max(5, repetitions / 10);
  t.solve_ms = time_it([&] { sink += solve(st.lp, sopts).objective; }, solve_reps);
  t.speedup = t.update_ms > 0.0 ? t.solve_ms / t.update_ms : 0.0;
  return t;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

void write_reports(const RunConfig& cfg, const Inputs& in, const ScheduleReport& report) {
  fs::create_directories(cfg.output_dir);
  fs::path dir(cfg.output_dir);

  {
    std::ofstream f(dir / "dispatch.csv");
    f << "hour";
    for (const auto& g : in.net.generators) f << ",gen_" << g.id << "_mw";
    f << ",cost\n";
    for (const auto& st : report.hours) {
      f << st.hour;
      for (int k = 0; k < in.net.n_generators(); ++k) f << "," << fmt(st.dispatch.gen_mw[k]);
      f << "," << fmt(st.dispatch.cost) << "\n";
    }
  }
  {
    std::ofstream f(dir / "lmp.csv");
    f << "hour,bus,lmp,lmp_composed\n";
    for (const auto& st : report.hours)
      for (int j = 0; j < in.net.n_buses(); ++j)
        f << st.hour << "," << in.net.buses[j].id << "," << fmt(st.lmp.lmp[j]) << ","
          << fmt(st.lmp.lmp_composed[j]) << "\n";
  }
  {
    std::ofstream f(dir / "ranges.csv");
    f << "hour,kind,entity,lower_mw,upper_mw,lower_capped,upper_capped\n";
    for (const auto& st : report.hours) {
      if (st.pv) {
        f << st.hour << ",pv_sa,bus_" << in.net.buses[st.instance.pv_bus_index].id << ","
          << fmt(st.pv->pv_min) << "," << fmt(st.pv->pv_max) << ","
          << (st.pv->min_unbounded ? 1 : 0) << "," << (st.pv->max_unbounded ? 1 : 0) << "\n";
      }
      for (int j = 0; j < in.net.n_buses(); ++j) {
        if (in.net.buses[j].load_fraction == 0.0) continue;
        f << st.hour << ",load_itr,bus_" << in.net.buses[j].id << ","
          << fmt(st.tolerance.dec_mw[j]) << "," << fmt(st.tolerance.inc_mw[j]) << ","
          << (st.tolerance.dec_unbounded[j] ? 1 : 0) << ","
          << (st.tolerance.inc_unbounded[j] ? 1 : 0) << "\n";
      }
    }
  }
  {
    std::ofstream f(dir / "confidence.csv");
    f << "hour,entity,lower_mw,upper_mw,confidence,applicable\n";
    for (const auto& st : report.hours)
      for (const auto& c : st.confidence)
        f << c.hour << "," << c.entity << "," << fmt(c.lower_mw) << "," << fmt(c.upper_mw) << ","
          << fmt(c.confidence) << "," << (c.applicable ? 1 : 0) << "\n";
  }
  {
    // tidy series for plotting
    std::ofstream f(dir / "plot.csv");
    f << "hour,series,value\n";
    for (const auto& st : report.hours) {
      f << st.hour << ",system_load_mw," << fmt(st.instance.bus_load_mw.sum()) << "\n";
      f << st.hour << ",pv_mw," << fmt(st.instance.pv_mw) << "\n";
      f << st.hour << ",cost," << fmt(st.dispatch.cost) << "\n";
      if (st.pv) {
        f << st.hour << ",pv_delta_min_mw," << fmt(st.pv->delta_min) << "\n";
        f << st.hour << ",pv_delta_max_mw," << fmt(st.pv->delta_max) << "\n";
      }
      for (const auto& c : st.confidence)
        if (c.applicable) f << st.hour << ",confidence_" << c.entity << "," << fmt(c.confidence) << "\n";
    }
  }
  {
    json j;
    j["hours"] = report.hours.size();
    j["total_cost"] = report.total_cost;
    j["case"] = in.net.name;
    std::ofstream f(dir / "summary.json");
    f << j.dump(2) << "\n";
  }
}

void write_event_report(const RunConfig& cfg, const Inputs& in, const EventReport& events) {
  fs::create_directories(cfg.output_dir);
  std::ofstream f(fs::path(cfg.output_dir) / "events.csv");
  f << "hour,kind,total_delta_mw,path,max_lmp_change";
  for (const auto& g : in.net.generators) f << ",beta_" << g.id;
  f << ",pv_min_pct_change,pv_max_pct_change\n";
  for (const auto& oc : events.outcomes) {
    f << oc.event.hour << ","
      << (oc.event.kind == UncertaintyEvent::Kind::PvDelta ? "pv_delta" : "load_delta") << ","
      << fmt(oc.total_delta_mw) << "," << (oc.absorbed ? "post-optimal" : "re-optimized") << ","
      << fmt(oc.max_lmp_change);
    for (int k = 0; k < oc.beta.size(); ++k) f << "," << fmt(oc.beta[k]);
    auto pct = [](double before, double after) {
      return before != 0.0 ? 100.0 * (after - before) / std::abs(before) : 0.0;
    };
    if (oc.event.kind == UncertaintyEvent::Kind::PvDelta) {
      f << "," << fmt(pct(oc.pv_before.delta_min, oc.pv_after.delta_min)) << ","
        << fmt(pct(oc.pv_before.delta_max, oc.pv_after.delta_max));
    } else {
      f << ",,";
    }
    f << "\n";
  }
}

std::string timing_json(const TimingReport& t) {
  json j;
  j["sa_ms"] = t.sa_ms;
  j["itr_ms"] = t.itr_ms;
  j["beta_ms"] = t.beta_ms;
  j["update_ms"] = t.update_ms;
  j["cold_solve_ms"] = t.solve_ms;
  j["speedup_update_vs_solve"] = t.speedup;
  j["repetitions"] = t.repetitions;
  return j.dump(2);
}

}  // namespace daopf
