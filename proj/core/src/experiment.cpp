// Copyright (c) 2026 The eprsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "eprsim/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <string>

#include <json.hpp>

namespace eprsim {

namespace {

using nlohmann::json;

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string join_issues(const std::vector<std::string>& issues) {
  std::string s = "invalid config:";
  for (const auto& i : issues) {
    s += "\n  - ";
    s += i;
  }
  return s;
}

std::vector<double> linspace(const GridSpec& g) {
  std::vector<double> out(g.count);
  if (g.count == 1) {
    out[0] = g.min;
    return out;
  }
  const double step = (g.max - g.min) / static_cast<double>(g.count - 1);
  for (std::size_t i = 0; i < g.count; ++i) {
    out[i] = g.min + static_cast<double>(i) * step;
  }
  out.back() = g.max; // endpoint exact
  return out;
}

// ---- config parsing helpers -------------------------------------------------

struct Ctx {
  std::vector<std::string> issues;
  std::vector<std::string> warnings;

  void issue(std::string s) { issues.push_back(std::move(s)); }
  void warn(std::string s) { warnings.push_back(std::move(s)); }
};

void reject_unknown(const json& obj, const std::set<std::string>& known,
                    const std::string& where, Ctx& ctx) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (known.find(key) == known.end()) {
      ctx.issue(where + ": unknown key \"" + key + "\"");
    }
  }
}

// Positive number, or the string "inf" for an infinite correlation time.
bool read_tau(const json& v, const std::string& where, double& out, Ctx& ctx) {
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") {
      out = kNoNoise;
      return true;
    }
    ctx.issue(where + ": only the string \"inf\" is accepted");
    return false;
  }
  if (!v.is_number()) {
    ctx.issue(where + ": must be a positive number or \"inf\"");
    return false;
  }
  const double d = v.get<double>();
  if (!(d > 0.0)) {
    ctx.issue(where + ": must be > 0");
    return false;
  }
  out = d;
  return true;
}

bool read_double(const json& obj, const std::string& key,
                 const std::string& where, double& out, Ctx& ctx) {
  if (!obj.contains(key)) return false;
  const json& v = obj.at(key);
  if (!v.is_number()) {
    ctx.issue(where + "." + key + ": must be a number");
    return false;
  }
  out = v.get<double>();
  return true;
}

bool read_count(const json& obj, const std::string& key,
                const std::string& where, std::size_t& out, Ctx& ctx) {
  if (!obj.contains(key)) return false;
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<double>() < 1) {
    ctx.issue(where + "." + key + ": must be an integer >= 1");
    return false;
  }
  out = v.get<std::size_t>();
  return true;
}

void parse_spin(const json& obj, SpinDecayParams& spin, Ctx& ctx) {
  reject_unknown(obj, {"tau_s", "particle1", "particle2"}, "spin", ctx);
  const bool has_uniform = obj.contains("tau_s");
  const bool has_split = obj.contains("particle1") || obj.contains("particle2");
  if (has_uniform && has_split) {
    ctx.issue("spin: give either tau_s or particle1/particle2, not both");
    return;
  }
  if (has_uniform) {
    double tau = 1.0;
    if (read_tau(obj.at("tau_s"), "spin.tau_s", tau, ctx)) {
      spin = SpinDecayParams::uniform(tau);
    }
    return;
  }
  if (has_split) {
    if (!obj.contains("particle1") || !obj.contains("particle2")) {
      ctx.issue("spin: particle1 and particle2 must both be given");
      return;
    }
    auto parse_side = [&](const char* name, RelaxationTimes& times) {
      const json& side = obj.at(name);
      if (!side.is_object()) {
        ctx.issue(std::string("spin.") + name + ": must be an object");
        return;
      }
      reject_unknown(side, {"tau0", "tau1"}, std::string("spin.") + name, ctx);
      if (side.contains("tau0")) {
        read_tau(side.at("tau0"), std::string("spin.") + name + ".tau0",
                 times.tau0, ctx);
      }
      if (side.contains("tau1")) {
        read_tau(side.at("tau1"), std::string("spin.") + name + ".tau1",
                 times.tau1, ctx);
      }
    };
    parse_side("particle1", spin.p1);
    parse_side("particle2", spin.p2);
  }
}

void parse_angles(const json& obj, BellAngles& angles, Ctx& ctx) {
  reject_unknown(obj, {"theta_ab", "theta_bc", "a", "b", "c"}, "angles", ctx);
  const bool has_theta = obj.contains("theta_ab") || obj.contains("theta_bc");
  const bool has_vec =
      obj.contains("a") || obj.contains("b") || obj.contains("c");
  if (has_theta && has_vec) {
    ctx.issue("angles: give either theta_ab/theta_bc or a/b/c, not both");
    return;
  }
  if (has_theta) {
    if (!obj.contains("theta_ab") || !obj.contains("theta_bc")) {
      ctx.issue("angles: theta_ab and theta_bc must both be given");
      return;
    }
    double tab = 0.0;
    double tbc = 0.0;
    if (!obj.at("theta_ab").is_number() || !obj.at("theta_bc").is_number()) {
      ctx.issue("angles: theta_ab and theta_bc must be numbers");
      return;
    }
    tab = obj.at("theta_ab").get<double>();
    tbc = obj.at("theta_bc").get<double>();
    try {
      angles = BellAngles::coplanar(tab, tbc);
    } catch (const std::exception& e) {
      ctx.issue(std::string("angles: ") + e.what());
    }
    return;
  }
  if (has_vec) {
    if (!obj.contains("a") || !obj.contains("b") || !obj.contains("c")) {
      ctx.issue("angles: a, b and c must all be given");
      return;
    }
    auto parse_dir = [&](const char* name) -> std::optional<Direction> {
      const json& v = obj.at(name);
      if (!v.is_array() || v.size() != 3 || !v[0].is_number() ||
          !v[1].is_number() || !v[2].is_number()) {
        ctx.issue(std::string("angles.") + name +
                  ": must be an array of 3 numbers");
        return std::nullopt;
      }
      const double x = v[0].get<double>();
      const double y = v[1].get<double>();
      const double z = v[2].get<double>();
      const double norm2 = x * x + y * y + z * z;
      try {
        Direction dir = Direction::normalized(x, y, z);
        if (std::abs(norm2 - 1.0) > kUnitNormTol) {
          ctx.warn(std::string("angles.") + name +
                   " was not unit length; normalized");
        }
        return dir;
      } catch (const std::exception& e) {
        ctx.issue(std::string("angles.") + name + ": " + e.what());
        return std::nullopt;
      }
    };
    auto da = parse_dir("a");
    auto db = parse_dir("b");
    auto dc = parse_dir("c");
    if (da && db && dc) angles = BellAngles{*da, *db, *dc};
  }
}

json tau_or_inf(double tau) {
  return std::isfinite(tau) ? json(tau) : json("inf");
}

std::string build_echo(const ExperimentConfig& cfg) {
  json echo;
  echo["scenario"] = to_string(cfg.scenario);
  echo["seed"] = cfg.seed;
  echo["output_dir"] = cfg.output_dir;
  echo["spin"] = {
      {"particle1",
       {{"tau0", tau_or_inf(cfg.spin.p1.tau0)},
        {"tau1", tau_or_inf(cfg.spin.p1.tau1)}}},
      {"particle2",
       {{"tau0", tau_or_inf(cfg.spin.p2.tau0)},
        {"tau1", tau_or_inf(cfg.spin.p2.tau1)}}},
  };
  echo["space"] = {{"m", cfg.space.m},     {"gamma", cfg.space.gamma},
                   {"D", cfg.space.D},     {"epsilon", cfg.space.epsilon},
                   {"d", cfg.space.d},     {"hbar", cfg.space.hbar}};
  echo["noise"] = {{"tau_xx", tau_or_inf(cfg.noise.tau_xx)},
                   {"tau_yy", tau_or_inf(cfg.noise.tau_yy)},
                   {"tau_zz", tau_or_inf(cfg.noise.tau_zz)}};
  echo["angles"] = {
      {"a", {cfg.angles.a.x(), cfg.angles.a.y(), cfg.angles.a.z()}},
      {"b", {cfg.angles.b.x(), cfg.angles.b.y(), cfg.angles.b.z()}},
      {"c", {cfg.angles.c.x(), cfg.angles.c.y(), cfg.angles.c.z()}},
  };
  echo["grid"] = {{"min", cfg.grid.min},
                  {"max", cfg.grid.max},
                  {"count", cfg.grid.count}};
  echo["time"] = cfg.fixed_time;
  echo["p0"] = {cfg.p0.x(), cfg.p0.y(), cfg.p0.z()};
  echo["mc"] = {{"dt", cfg.mc_dt},
                {"n_steps", cfg.mc_n_steps},
                {"n_traj", cfg.mc_n_traj}};
  echo["coherence_r"] = cfg.coherence_r;
  return echo.dump();
}

// ---- scenario bodies --------------------------------------------------------

struct ScenarioOutput {
  std::string csv;
  std::vector<std::pair<std::string, double>> headline;
};

ScenarioOutput run_time_sweep(const ExperimentConfig& cfg) {
  ScenarioOutput out;
  out.csv = "t,E_ab,E_ac,E_bc,lhs,rhs,violated\n";
  const std::vector<double> times = linspace(cfg.grid);
  BellEvaluation last;
  bool seen_violation = false;
  bool recorded_first_satisfied = false;
  for (double t : times) {
    const double e_ab = correlation(cfg.angles.a, cfg.angles.b, cfg.spin, t);
    const double e_ac = correlation(cfg.angles.a, cfg.angles.c, cfg.spin, t);
    const double e_bc = correlation(cfg.angles.b, cfg.angles.c, cfg.spin, t);
    const BellEvaluation ev = evaluate_bell(cfg.angles, cfg.spin, t);
    out.csv += fmt(t) + "," + fmt(e_ab) + "," + fmt(e_ac) + "," + fmt(e_bc) +
               "," + fmt(ev.lhs) + "," + fmt(ev.rhs) + "," +
               (ev.violated ? "1" : "0") + "\n";
    if (ev.violated) seen_violation = true;
    if (seen_violation && !ev.violated && !recorded_first_satisfied) {
      out.headline.emplace_back("first_satisfied_t", t);
      recorded_first_satisfied = true;
    }
    last = ev;
  }
  out.headline.emplace_back("t_final", last.t);
  out.headline.emplace_back("lhs_final", last.lhs);
  out.headline.emplace_back("rhs_final", last.rhs);
  return out;
}

ScenarioOutput run_angle_sweep(const ExperimentConfig& cfg) {
  ScenarioOutput out;
  out.csv = "theta,E,lhs,rhs,violated\n";
  const std::vector<double> thetas = linspace(cfg.grid);
  double best_theta = thetas.front();
  double best_lhs = 0.0;
  double best_rhs = 0.0;
  double best_margin = -std::numeric_limits<double>::infinity();
  for (double theta : thetas) {
    const BellAngles angles = BellAngles::coplanar(theta, theta);
    const BellEvaluation ev = evaluate_bell(angles, cfg.spin, cfg.fixed_time);
    const double e =
        correlation(angles.a, angles.b, cfg.spin, cfg.fixed_time);
    out.csv += fmt(theta) + "," + fmt(e) + "," + fmt(ev.lhs) + "," +
               fmt(ev.rhs) + "," + (ev.violated ? "1" : "0") + "\n";
    if (ev.lhs - ev.rhs > best_margin) {
      best_margin = ev.lhs - ev.rhs;
      best_theta = theta;
      best_lhs = ev.lhs;
      best_rhs = ev.rhs;
    }
  }
  out.headline.emplace_back("theta_max_violation", best_theta);
  out.headline.emplace_back("lhs_at_max", best_lhs);
  out.headline.emplace_back("rhs_at_max", best_rhs);
  return out;
}

ScenarioOutput run_mc_validate(const ExperimentConfig& cfg) {
  TrajectoryConfig traj;
  traj.dt = cfg.mc_dt;
  traj.n_steps = cfg.mc_n_steps;
  EnsembleConfig ens;
  ens.n_traj = cfg.mc_n_traj;
  ens.master_seed = cfg.seed;
  const EnsembleSeries series =
      ensemble_average(cfg.p0, cfg.noise, traj, ens);
  const Vec3 rates = mean_decay_rates(cfg.noise);

  ScenarioOutput out;
  out.csv =
      "t,mean_x,mean_y,mean_z,stderr_x,stderr_y,stderr_z,"
      "analytic_x,analytic_y,analytic_z\n";
  for (std::size_t k = 0; k < series.times.size(); ++k) {
    const double t = series.times[k];
    const Vec3 mean = series.mean[k].vec();
    const Vec3 se = series.std_err[k];
    const Vec3 ana(cfg.p0.x() * std::exp(-rates.x() * t),
                   cfg.p0.y() * std::exp(-rates.y() * t),
                   cfg.p0.z() * std::exp(-rates.z() * t));
    out.csv += fmt(t);
    for (int c = 0; c < 3; ++c) out.csv += "," + fmt(mean[c]);
    for (int c = 0; c < 3; ++c) out.csv += "," + fmt(se[c]);
    for (int c = 0; c < 3; ++c) out.csv += "," + fmt(ana[c]);
    out.csv += "\n";
  }
  const std::size_t last = series.times.size() - 1;
  out.headline.emplace_back("t_final", series.times[last]);
  out.headline.emplace_back("mean_z_final", series.mean[last].z());
  out.headline.emplace_back("analytic_z_final",
                            cfg.p0.z() *
                                std::exp(-rates.z() * series.times[last]));
  return out;
}

ScenarioOutput run_spatial_profile(const ExperimentConfig& cfg) {
  ScenarioOutput out;
  out.csv = "t,center_1,center_2,separation,M,coherence_at_r\n";
  const std::vector<double> times = linspace(cfg.grid);
  double last_t = 0.0;
  double last_sep = 0.0;
  double last_coh = 0.0;
  for (double t : times) {
    const double c1 = wavepacket_center(cfg.space, Particle::one, t);
    const double c2 = wavepacket_center(cfg.space, Particle::two, t);
    const double sep = separation(cfg.space, t);
    const double m = big_m(cfg.space, t);
    const double coh = coherence_factor(cfg.space, cfg.coherence_r, t);
    out.csv += fmt(t) + "," + fmt(c1) + "," + fmt(c2) + "," + fmt(sep) + "," +
               fmt(m) + "," + fmt(coh) + "\n";
    last_t = t;
    last_sep = sep;
    last_coh = coh;
  }
  out.headline.emplace_back("t_final", last_t);
  out.headline.emplace_back("separation_final", last_sep);
  out.headline.emplace_back("coherence_final", last_coh);
  return out;
}

ScenarioOutput run_crossover(const ExperimentConfig& cfg) {
  const auto cross = crossover_separation(cfg.angles, cfg.spin, cfg.space);
  if (!cross) {
    throw std::runtime_error(
        "crossover: the inequality is not violated at t = 0 (or never "
        "relaxes), so there is no crossover to report");
  }
  ScenarioOutput out;
  out.csv = "t_star,separation_exact,separation_asymptotic\n";
  out.csv += fmt(cross->t_star) + "," + fmt(cross->exact) + "," +
             fmt(cross->asymptotic) + "\n";
  out.headline.emplace_back("t_star", cross->t_star);
  out.headline.emplace_back("separation_exact", cross->exact);
  out.headline.emplace_back("separation_asymptotic", cross->asymptotic);
  return out;
}

} // namespace

const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::time_sweep:
      return "time-sweep";
    case Scenario::angle_sweep:
      return "angle-sweep";
    case Scenario::mc_validate:
      return "mc-validate";
    case Scenario::spatial_profile:
      return "spatial-profile";
    case Scenario::crossover:
      return "crossover";
  }
  return "unknown";
}

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

ParsedConfig parse_config(const std::string& json_text) {
  Ctx ctx;
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("not valid JSON: ") + e.what()});
  }
  if (!root.is_object()) {
    throw ConfigError({"config must be a JSON object"});
  }

  reject_unknown(root,
                 {"scenario", "seed", "output_dir", "spin", "space", "noise",
                  "angles", "grid", "time", "p0", "mc", "coherence_r"},
                 "config", ctx);

  ExperimentConfig cfg;

  bool have_scenario = true;
  if (!root.contains("scenario")) {
    ctx.issue("scenario: required");
    have_scenario = false;
  } else if (!root.at("scenario").is_string()) {
    ctx.issue("scenario: must be a string");
    have_scenario = false;
  } else {
    const std::string s = root.at("scenario").get<std::string>();
    if (s == "time-sweep") {
      cfg.scenario = Scenario::time_sweep;
    } else if (s == "angle-sweep") {
      cfg.scenario = Scenario::angle_sweep;
    } else if (s == "mc-validate") {
      cfg.scenario = Scenario::mc_validate;
    } else if (s == "spatial-profile") {
      cfg.scenario = Scenario::spatial_profile;
    } else if (s == "crossover") {
      cfg.scenario = Scenario::crossover;
    } else {
      ctx.issue("scenario: \"" + s +
                "\" is not one of time-sweep, angle-sweep, mc-validate, "
                "spatial-profile, crossover");
      have_scenario = false;
    }
  }

  if (root.contains("seed")) {
    const json& v = root.at("seed");
    if (!v.is_number_integer() || v.is_number_float() || v.get<double>() < 0) {
      ctx.issue("seed: must be a non-negative integer");
    } else {
      cfg.seed = v.get<std::uint64_t>();
    }
  }

  if (root.contains("output_dir")) {
    if (!root.at("output_dir").is_string()) {
      ctx.issue("output_dir: must be a string");
    } else {
      cfg.output_dir = root.at("output_dir").get<std::string>();
      if (cfg.output_dir.empty()) cfg.output_dir = ".";
    }
  }

  if (root.contains("spin")) {
    if (!root.at("spin").is_object()) {
      ctx.issue("spin: must be an object");
    } else {
      parse_spin(root.at("spin"), cfg.spin, ctx);
    }
  }

  if (root.contains("space")) {
    const json& sp = root.at("space");
    if (!sp.is_object()) {
      ctx.issue("space: must be an object");
    } else {
      reject_unknown(sp, {"m", "gamma", "D", "epsilon", "d", "hbar"}, "space",
                     ctx);
      read_double(sp, "m", "space", cfg.space.m, ctx);
      read_double(sp, "gamma", "space", cfg.space.gamma, ctx);
      read_double(sp, "D", "space", cfg.space.D, ctx);
      read_double(sp, "epsilon", "space", cfg.space.epsilon, ctx);
      read_double(sp, "d", "space", cfg.space.d, ctx);
      read_double(sp, "hbar", "space", cfg.space.hbar, ctx);
    }
  }

  if (root.contains("noise")) {
    const json& no = root.at("noise");
    if (!no.is_object()) {
      ctx.issue("noise: must be an object");
    } else {
      reject_unknown(no, {"tau_xx", "tau_yy", "tau_zz"}, "noise", ctx);
      if (no.contains("tau_xx")) {
        read_tau(no.at("tau_xx"), "noise.tau_xx", cfg.noise.tau_xx, ctx);
      }
      if (no.contains("tau_yy")) {
        read_tau(no.at("tau_yy"), "noise.tau_yy", cfg.noise.tau_yy, ctx);
      }
      if (no.contains("tau_zz")) {
        read_tau(no.at("tau_zz"), "noise.tau_zz", cfg.noise.tau_zz, ctx);
      }
    }
  }

  if (root.contains("angles")) {
    if (!root.at("angles").is_object()) {
      ctx.issue("angles: must be an object");
    } else {
      parse_angles(root.at("angles"), cfg.angles, ctx);
    }
  }

  if (root.contains("grid")) {
    const json& g = root.at("grid");
    if (!g.is_object()) {
      ctx.issue("grid: must be an object");
    } else {
      reject_unknown(g, {"min", "max", "count"}, "grid", ctx);
      read_double(g, "min", "grid", cfg.grid.min, ctx);
      read_double(g, "max", "grid", cfg.grid.max, ctx);
      read_count(g, "count", "grid", cfg.grid.count, ctx);
    }
  }
  if (!std::isfinite(cfg.grid.min) || !std::isfinite(cfg.grid.max) ||
      cfg.grid.min > cfg.grid.max) {
    ctx.issue("grid: require finite min <= max");
  } else if (have_scenario) {
    if ((cfg.scenario == Scenario::time_sweep ||
         cfg.scenario == Scenario::spatial_profile) &&
        cfg.grid.min < 0.0) {
      ctx.issue("grid.min: times must be >= 0");
    }
    if (cfg.scenario == Scenario::angle_sweep &&
        (cfg.grid.min < 0.0 || cfg.grid.max > kPi + 1e-12)) {
      ctx.issue("grid: angle-sweep range must lie in [0, pi]");
    }
  }

  if (root.contains("time")) {
    double t = cfg.fixed_time;
    if (read_double(root, "time", "config", t, ctx)) {
      if (!std::isfinite(t) || t < 0.0) {
        ctx.issue("time: must be finite and >= 0");
      } else {
        cfg.fixed_time = t;
      }
    }
  }

  if (root.contains("p0")) {
    const json& v = root.at("p0");
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() ||
        !v[1].is_number() || !v[2].is_number()) {
      ctx.issue("p0: must be an array of 3 numbers");
    } else {
      try {
        cfg.p0 = Polarization(v[0].get<double>(), v[1].get<double>(),
                              v[2].get<double>());
      } catch (const std::exception& e) {
        ctx.issue(std::string("p0: ") + e.what());
      }
    }
  }

  if (root.contains("mc")) {
    const json& mc = root.at("mc");
    if (!mc.is_object()) {
      ctx.issue("mc: must be an object");
    } else {
      reject_unknown(mc, {"dt", "n_steps", "n_traj"}, "mc", ctx);
      if (read_double(mc, "dt", "mc", cfg.mc_dt, ctx)) {
        if (!(cfg.mc_dt > 0.0) || !std::isfinite(cfg.mc_dt)) {
          ctx.issue("mc.dt: must be finite and > 0");
          cfg.mc_dt = 1e-2;
        }
      }
      read_count(mc, "n_steps", "mc", cfg.mc_n_steps, ctx);
      read_count(mc, "n_traj", "mc", cfg.mc_n_traj, ctx);
    }
  }

  if (root.contains("coherence_r")) {
    double r = cfg.coherence_r;
    if (read_double(root, "coherence_r", "config", r, ctx)) {
      if (!std::isfinite(r)) {
        ctx.issue("coherence_r: must be finite");
      } else {
        cfg.coherence_r = r;
      }
    }
  }

  // Cross-field checks through the library validators.
  try {
    cfg.spin.validate();
  } catch (const std::exception& e) {
    ctx.issue(std::string("spin: ") + e.what());
  }
  try {
    cfg.space.validate();
  } catch (const std::exception& e) {
    ctx.issue(std::string("space: ") + e.what());
  }
  try {
    cfg.noise.validate();
  } catch (const std::exception& e) {
    ctx.issue(std::string("noise: ") + e.what());
  }
  if (have_scenario && cfg.scenario == Scenario::mc_validate &&
      ctx.issues.empty()) {
    try {
      TrajectoryConfig traj;
      traj.dt = cfg.mc_dt;
      traj.n_steps = cfg.mc_n_steps;
      traj.validate(cfg.noise);
    } catch (const std::exception& e) {
      ctx.issue(std::string("mc: ") + e.what());
    }
  }

  if (!ctx.issues.empty()) throw ConfigError(std::move(ctx.issues));

  cfg.echo_json = build_echo(cfg);
  return ParsedConfig{std::move(cfg), std::move(ctx.warnings)};
}

RunSummary run_experiment(const ExperimentConfig& cfg) {
  const auto t_start = std::chrono::steady_clock::now();

  cfg.spin.validate();
  cfg.space.validate();
  cfg.noise.validate();

  ScenarioOutput out;
  switch (cfg.scenario) {
    case Scenario::time_sweep:
      out = run_time_sweep(cfg);
      break;
    case Scenario::angle_sweep:
      out = run_angle_sweep(cfg);
      break;
    case Scenario::mc_validate:
      out = run_mc_validate(cfg);
      break;
    case Scenario::spatial_profile:
      out = run_spatial_profile(cfg);
      break;
    case Scenario::crossover:
      out = run_crossover(cfg);
      break;
  }

  namespace fs = std::filesystem;
  const fs::path dir = cfg.output_dir.empty() ? "." : cfg.output_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory " + dir.string() +
                             ": " + ec.message());
  }

  const std::string csv_name = std::string(to_string(cfg.scenario)) + ".csv";
  const fs::path csv_path = dir / csv_name;
  {
    std::ofstream os(csv_path, std::ios::binary);
    os << out.csv;
    if (!os.good()) {
      throw std::runtime_error("failed to write " + csv_path.string());
    }
  }

  json summary;
  json echo = json::parse(cfg.echo_json);
  if (echo.is_object()) {
    echo["seed"] = cfg.seed; // CLI overrides win over the parsed document
    echo["output_dir"] = cfg.output_dir;
  }
  summary["config"] = echo;
  summary["scenario"] = to_string(cfg.scenario);
  summary["seed"] = cfg.seed;
  summary["csv"] = csv_name;
  json headline = json::object();
  for (const auto& [key, value] : out.headline) headline[key] = value;
  summary["headline"] = headline;

  const fs::path summary_path = dir / "summary.json";
  {
    std::ofstream os(summary_path, std::ios::binary);
    os << summary.dump(2) << "\n";
    if (!os.good()) {
      throw std::runtime_error("failed to write " + summary_path.string());
    }
  }

  RunSummary rs;
  rs.scenario = to_string(cfg.scenario);
  rs.seed = cfg.seed;
  rs.headline = std::move(out.headline);
  rs.csv_path = csv_path.string();
  rs.summary_path = summary_path.string();
  rs.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return rs;
}

} // namespace eprsim
