// Copyright (c) 2026 The eprsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "eprsim/bell_analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace eprsim {

namespace {

constexpr double kViolationSlack = 1e-12;
constexpr double kBisectRelTol = 1e-9;

void check_angle(double theta, const char* name) {
  if (!std::isfinite(theta) || theta < 0.0 ||
      theta > 3.14159265358979323846 + 1e-12) {
    throw std::invalid_argument(std::string("BellAngles: ") + name +
                                " must lie in [0, pi]");
  }
}

// lhs - rhs; the violation dies at the first zero crossing.
double margin(const BellAngles& angles, const SpinDecayParams& p, double t) {
  const BellEvaluation e = evaluate_bell(angles, p, t);
  return e.lhs - e.rhs;
}

} // namespace

BellAngles BellAngles::coplanar(double theta_ab, double theta_bc) {
  check_angle(theta_ab, "theta_ab");
  check_angle(theta_bc, "theta_bc");
  return BellAngles{
      Direction::normalized(std::sin(theta_ab), 0.0, std::cos(theta_ab)),
      Direction(0.0, 0.0, 1.0),
      Direction::normalized(-std::sin(theta_bc), 0.0, std::cos(theta_bc))};
}

BellAngles BellAngles::canonical() {
  const double s = std::sqrt(3.0) / 2.0;
  return BellAngles{Direction(s, 0.0, 0.5), Direction(0.0, 0.0, 1.0),
                    Direction(-s, 0.0, 0.5)};
}

BellEvaluation evaluate_bell(const BellAngles& angles, const SpinDecayParams& p,
                             double t) {
  const double e_ab = correlation(angles.a, angles.b, p, t);
  const double e_ac = correlation(angles.a, angles.c, p, t);
  const double e_bc = correlation(angles.b, angles.c, p, t);
  BellEvaluation out;
  out.t = t;
  out.lhs = std::abs(e_ab - e_ac);
  out.rhs = 1.0 + e_bc;
  out.violated = out.lhs > out.rhs + kViolationSlack;
  return out;
}

std::optional<double> crossover_time(const BellAngles& angles,
                                     const SpinDecayParams& p) {
  p.validate();
  if (margin(angles, p, 0.0) <= 0.0) return std::nullopt;

  // Bracket from the slowest finite relaxation time (1 when there is none).
  double scale = 0.0;
  for (double tau : {p.p1.tau0, p.p1.tau1, p.p2.tau0, p.p2.tau1}) {
    if (std::isfinite(tau)) scale = std::max(scale, tau);
  }
  if (scale == 0.0) scale = 1.0;

  double lo = 0.0;
  double hi = scale;
  bool bracketed = false;
  for (int i = 0; i < 50; ++i) {
    if (margin(angles, p, hi) <= 0.0) {
      bracketed = true;
      break;
    }
    lo = hi;
    hi *= 2.0;
  }
  if (!bracketed) return std::nullopt;

  for (int i = 0; i < 200 && hi - lo > kBisectRelTol * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (margin(angles, p, mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::optional<CrossoverSeparation> crossover_separation(
    const BellAngles& angles, const SpinDecayParams& p,
    const SpatialParams& space) {
  space.validate();
  const std::optional<double> t_star = crossover_time(angles, p);
  if (!t_star) return std::nullopt;
  CrossoverSeparation out;
  out.t_star = *t_star;
  out.exact = separation(space, *t_star);
  out.asymptotic = 2.0 * space.epsilon * *t_star / (space.m * space.gamma);
  return out;
}

std::vector<BellEvaluation> sweep(const BellAngles& angles,
                                  const SpinDecayParams& p,
                                  const std::vector<double>& t_grid) {
  p.validate();
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!std::isfinite(t_grid[i]) || t_grid[i] < 0.0) {
      throw std::invalid_argument("sweep: times must be finite and >= 0");
    }
    if (i > 0 && t_grid[i] < t_grid[i - 1]) {
      throw std::invalid_argument("sweep: time grid must be sorted ascending");
    }
  }
  std::vector<BellEvaluation> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) out.push_back(evaluate_bell(angles, p, t));
  return out;
}

} // namespace eprsim
