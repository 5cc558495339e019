#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "daopf/case_io.hpp"
#include "daopf/errors.hpp"
#include "daopf/scheduler.hpp"

namespace {

using daopf::RunConfig;

void apply_kv(RunConfig& cfg, const std::string& section, const std::string& key,
              const std::string& value) {
  auto num = [&] { return std::stod(value); };
  if (section == "uncertainty") {
    if (key == "w1") cfg.pv_model.w1 = num();
    else if (key == "w2") cfg.pv_model.w2 = num();
    else if (key == "c1") cfg.pv_model.c1 = num();
    else if (key == "c2") cfg.pv_model.c2 = num();
    else if (key == "k1") cfg.pv_model.k1 = num();
    else if (key == "k2") cfg.pv_model.k2 = num();
    else if (key == "eta") cfg.pv_model.eta = num();
    else if (key == "s_capacity") cfg.pv_model.s_capacity = num();
    else if (key == "load_sigma_pct") {
      cfg.load_sigma_pct.clear();
      std::istringstream ss(value);
      std::string cell;
      while (std::getline(ss, cell, ',')) cfg.load_sigma_pct.push_back(std::stod(cell));
    } else {
      throw daopf::ParseError("unknown [uncertainty] key: " + key);
    }
    return;
  }
  if (key == "case") cfg.case_path = value;
  else if (key == "profile") cfg.profile_path = value;
  else if (key == "events") cfg.event_path = value;
  else if (key == "output") cfg.output_dir = value;
  else if (key == "pv_bus") cfg.pv_bus = static_cast<int>(num());
  else if (key == "ref_bus") cfg.ref_bus = static_cast<int>(num());
  else if (key == "hours") cfg.hours = static_cast<int>(num());
  else if (key == "pv_capacity_mw") cfg.pv_capacity_mw = num();
  else if (key == "feas_tol") cfg.feas_tol = num();
  else if (key == "opt_tol") cfg.opt_tol = num();
  else if (key == "dump_lp") cfg.dump_lp = value == "1" || value == "true";
  else throw daopf::ParseError("unknown config key: " + key);
}

RunConfig read_config(const std::string& path) {
  RunConfig cfg;
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw daopf::ParseError("cannot open config file: " + path);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      size_t a = s.find_first_not_of(" \t\r");
      size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = line.substr(1, line.size() - 2);
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw daopf::ParseError("config line " + std::to_string(lineno) + ": expected key = value");
    apply_kv(cfg, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  // relative file paths in a config resolve against the config's own directory
  // when they don't exist from the working directory
  auto anchor = std::filesystem::absolute(path).parent_path();
  for (std::string* p : {&cfg.case_path, &cfg.profile_path, &cfg.event_path}) {
    if (p->empty() || std::filesystem::path(*p).is_absolute() || std::filesystem::exists(*p))
      continue;
    auto candidate = anchor / *p;
    if (std::filesystem::exists(candidate)) *p = candidate.string();
  }
  return cfg;
}

struct CommonArgs {
  std::string config;
  std::vector<std::string> overrides;  // key=value or section.key=value
  std::string case_path, profile_path, events_path, output;
  int pv_bus = INT32_MIN, ref_bus = INT32_MIN, hours = -1;
};

void add_common(CLI::App* app, CommonArgs& a) {
  app->add_option("-c,--config", a.config, "key=value config file");
  app->add_option("--set", a.overrides, "override any config key (key=value, [section.]key)");
  app->add_option("--case", a.case_path, "network case JSON");
  app->add_option("--profile", a.profile_path, "hourly profile CSV");
  app->add_option("--events", a.events_path, "event script CSV");
  app->add_option("--output", a.output, "output directory");
  app->add_option("--pv-bus", a.pv_bus, "bus id hosting the PV plant");
  app->add_option("--ref-bus", a.ref_bus, "angle/GSF reference bus id");
  app->add_option("--hours", a.hours, "horizon length H");
}

RunConfig make_config(const CommonArgs& a) {
  RunConfig cfg = read_config(a.config);
  for (const auto& ov : a.overrides) {
    auto eq = ov.find('=');
    if (eq == std::string::npos) throw daopf::ParseError("--set expects key=value: " + ov);
    std::string key = ov.substr(0, eq), section;
    auto dot = key.find('.');
    if (dot != std::string::npos) {
      section = key.substr(0, dot);
      key = key.substr(dot + 1);
    }
    apply_kv(cfg, section, key, ov.substr(eq + 1));
  }
  if (!a.case_path.empty()) cfg.case_path = a.case_path;
  if (!a.profile_path.empty()) cfg.profile_path = a.profile_path;
  if (!a.events_path.empty()) cfg.event_path = a.events_path;
  if (!a.output.empty()) cfg.output_dir = a.output;
  if (a.pv_bus != INT32_MIN) cfg.pv_bus = a.pv_bus;
  if (a.ref_bus != INT32_MIN) cfg.ref_bus = a.ref_bus;
  if (a.hours > 0) cfg.hours = a.hours;
  if (cfg.case_path.empty()) throw daopf::ValidationError("no case file given (--case or config)");
  if (cfg.profile_path.empty())
    throw daopf::ValidationError("no profile file given (--profile or config)");
  return cfg;
}

void print_hour(const daopf::Inputs& in, const daopf::HourState& st) {
  std::printf("hour %d: cost %.4f, load %.2f MW, pv %.2f MW\n", st.hour, st.dispatch.cost,
              st.instance.bus_load_mw.sum(), st.instance.pv_mw);
  for (int k = 0; k < in.net.n_generators(); ++k)
    std::printf("  gen %d (bus %d): %.4f MW\n", in.net.generators[k].id,
                in.net.generators[k].bus, st.dispatch.gen_mw[k]);
  if (st.pv)
    std::printf("  pv range: [%.4f, %.4f] MW (delta [%.4f, %.4f])\n", st.pv->pv_min,
                st.pv->pv_max, st.pv->delta_min, st.pv->delta_max);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Day-ahead DCOPF scheduler with post-optimal uncertainty handling"};
  app.require_subcommand(1);

  CommonArgs args;
  int solve_hour = 1;
  int bench_reps = 200;

  auto* cmd_solve = app.add_subcommand("solve", "solve a single hour and print the dispatch");
  cmd_solve->add_option("--hour", solve_hour, "hour to solve (1-based)");
  auto* cmd_schedule = app.add_subcommand("schedule", "run the full horizon and write reports");
  auto* cmd_events = app.add_subcommand("events", "run the horizon, then apply the event script");
  auto* cmd_sa = app.add_subcommand("sa", "print PV sensitivity ranges per hour");
  auto* cmd_itr = app.add_subcommand("itr", "print per-bus load tolerance ranges per hour");
  auto* cmd_conf = app.add_subcommand("confidence", "print confidence levels per hour");
  auto* cmd_bench = app.add_subcommand("bench", "time the post-optimal path vs cold solves");
  cmd_bench->add_option("--reps", bench_reps, "repetitions per timed kernel");
  for (auto* sub : {cmd_solve, cmd_schedule, cmd_events, cmd_sa, cmd_itr, cmd_conf, cmd_bench})
    add_common(sub, args);

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = make_config(args);
    daopf::Inputs in = daopf::load_inputs(cfg);

    if (cmd_solve->parsed()) {
      if (solve_hour < 1 || solve_hour > in.profile.hours)
        throw daopf::ValidationError("--hour outside the horizon");
      cfg.hours = in.profile.hours;
      auto rep = daopf::run_schedule(cfg, in);
      print_hour(in, rep.hours[solve_hour - 1]);
    } else if (cmd_schedule->parsed()) {
      auto rep = daopf::run_schedule(cfg, in);
      daopf::write_reports(cfg, in, rep);
      std::printf("scheduled %zu hours, total cost %.4f; reports in %s/\n", rep.hours.size(),
                  rep.total_cost, cfg.output_dir.c_str());
    } else if (cmd_events->parsed()) {
      if (cfg.event_path.empty())
        throw daopf::ValidationError("events subcommand needs an event script (--events)");
      auto rep = daopf::run_schedule(cfg, in);
      auto events = daopf::load_events(cfg.event_path, in.net);
      auto erep = daopf::run_events(cfg, in, rep, events);
      daopf::write_reports(cfg, in, rep);
      daopf::write_event_report(cfg, in, erep);
      std::printf("%zu events handled, %d re-optimization fallback(s); reports in %s/\n",
                  erep.outcomes.size(), erep.fallbacks, cfg.output_dir.c_str());
    } else if (cmd_sa->parsed() || cmd_itr->parsed() || cmd_conf->parsed()) {
      auto rep = daopf::run_schedule(cfg, in);
      for (const auto& st : rep.hours) {
        if (cmd_sa->parsed()) {
          if (st.pv)
            std::printf("hour %d: pv [%.4f, %.4f] MW (delta [%.4f, %.4f])%s%s\n", st.hour,
                        st.pv->pv_min, st.pv->pv_max, st.pv->delta_min, st.pv->delta_max,
                        st.pv->min_unbounded ? " min-capped" : "",
                        st.pv->max_unbounded ? " max-capped" : "");
          else
            std::printf("hour %d: no pv output\n", st.hour);
        } else if (cmd_itr->parsed()) {
          std::printf("hour %d:", st.hour);
          for (int j = 0; j < in.net.n_buses(); ++j)
            if (in.net.buses[j].load_fraction > 0)
              std::printf(" bus%d[%.2f,%.2f]", in.net.buses[j].id, st.tolerance.dec_mw[j],
                          st.tolerance.inc_mw[j]);
          std::printf("\n");
        } else {
          for (const auto& c : st.confidence)
            std::printf("hour %d %s: %s\n", st.hour, c.entity.c_str(),
                        c.applicable ? std::to_string(c.confidence).c_str() : "n/a");
        }
      }
    } else if (cmd_bench->parsed()) {
      auto t = daopf::bench(cfg, in, bench_reps);
      std::printf("%s\n", daopf::timing_json(t).c_str());
    }
  } catch (const daopf::HourInfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 2;
  } catch (const daopf::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 3;
  } catch (const daopf::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 3;
  } catch (const daopf::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
