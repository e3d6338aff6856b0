// Copyright (c) 2026 The eprsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "eprsim/analytic_dynamics.hpp"

#include <cmath>

namespace eprsim {

namespace {

void check_tau(double tau, const char* name) {
  // +infinity is the no-noise sentinel and is admissible.
  if (std::isnan(tau) || tau <= 0.0) {
    throw std::invalid_argument(std::string("RelaxationTimes: ") + name +
                                " must be positive (or infinite for no noise)");
  }
}

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("time must be finite and >= 0");
  }
}

} // namespace

void RelaxationTimes::validate() const {
  check_tau(tau0, "tau0");
  check_tau(tau1, "tau1");
}

void SpinDecayParams::validate() const {
  p1.validate();
  p2.validate();
}

Polarization evolve_polarization(const Polarization& p0,
                                 const RelaxationTimes& times, double t) {
  times.validate();
  check_time(t);
  const double longitudinal = std::exp(-0.5 * t * times.rate1());
  const double transverse =
      std::exp(-0.25 * t * (times.rate1() + times.rate0()));
  return Polarization(p0.x() * transverse, p0.y() * transverse,
                      p0.z() * longitudinal);
}

double transverse_coefficient(const SpinDecayParams& p, double t) {
  p.validate();
  check_time(t);
  const double rate_sum =
      p.p1.rate0() + p.p1.rate1() + p.p2.rate0() + p.p2.rate1();
  return std::exp(-0.25 * t * rate_sum);
}

double longitudinal_coefficient(const SpinDecayParams& p, double t) {
  p.validate();
  check_time(t);
  return std::exp(-0.5 * t * (p.p1.rate1() + p.p2.rate1()));
}

DensityMatrix4 singlet_rho_t(const SpinDecayParams& p, double t) {
  const double ct = transverse_coefficient(p, t);
  const double cl = longitudinal_coefficient(p, t);
  const Mat4 xx = tensor(pauli(Axis::x), pauli(Axis::x));
  const Mat4 yy = tensor(pauli(Axis::y), pauli(Axis::y));
  const Mat4 zz = tensor(pauli(Axis::z), pauli(Axis::z));
  return DensityMatrix4(0.25 * (Mat4::Identity() - ct * (xx + yy) - cl * zz));
}

double correlation(const Direction& n1, const Direction& n2,
                   const SpinDecayParams& p, double t) {
  const double ct = transverse_coefficient(p, t);
  const double cl = longitudinal_coefficient(p, t);
  return -(n1.x() * n2.x() + n1.y() * n2.y()) * ct - n1.z() * n2.z() * cl;
}

} // namespace eprsim
