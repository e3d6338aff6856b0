// Copyright (c) 2026 The eprsim Authors
// SPDX-License-Identifier: Apache-2.0
//
// analytic_dynamics.hpp: closed-form relaxation of single-spin polarizations
// and of the two-spin singlet under independent stochastic-field averaging.
//
// Conventions: the beam axis is z. tau1 is the correlation time of the two
// transverse field components (xx and yy), tau0 of the longitudinal one (zz).
// A correlation time of +infinity is the no-noise sentinel; the associated
// rate is exactly zero.

#pragma once

#include <limits>

#include "eprsim/spin_algebra.hpp"

namespace eprsim {

inline constexpr double kNoNoise = std::numeric_limits<double>::infinity();

struct RelaxationTimes {
  double tau0{1.0}; // longitudinal (zz) field correlation time
  double tau1{1.0}; // transverse (xx = yy) field correlation time

  double rate0() const { return 1.0 / tau0; } // 0 at the no-noise sentinel
  double rate1() const { return 1.0 / tau1; }

  void validate() const; // throws std::invalid_argument
};

struct SpinDecayParams {
  RelaxationTimes p1; // particle 1
  RelaxationTimes p2; // particle 2

  static SpinDecayParams uniform(double tau_s) {
    return {{tau_s, tau_s}, {tau_s, tau_s}};
  }

  void validate() const;
};

// Ensemble-averaged polarization at time t >= 0:
//   P_z(t)    = P_z(0)    exp(-t / (2 tau1))
//   P_x,y(t)  = P_x,y(0)  exp(-t/(4 tau1) - t/(4 tau0))
Polarization evolve_polarization(const Polarization& p0,
                                 const RelaxationTimes& times, double t);

// Decay factor multiplying the transverse (xx + yy) correlation part:
// exp(-(t/4)(1/tau0_1 + 1/tau1_1 + 1/tau0_2 + 1/tau1_2)).
double transverse_coefficient(const SpinDecayParams& p, double t);

// Decay factor multiplying the zz correlation part:
// exp(-t/(2 tau1_1) - t/(2 tau1_2)). Set by the longitudinal relaxation of
// each particle, hence governed by the transverse correlation times.
double longitudinal_coefficient(const SpinDecayParams& p, double t);

// Singlet prepared at t = 0, dephased for time t:
// (1/4) [ 1x1 - (sx sx + sy sy) * transverse_coefficient
//             -  sz sz          * longitudinal_coefficient ].
DensityMatrix4 singlet_rho_t(const SpinDecayParams& p, double t);

// E(n1, n2, t) = Tr[rho(t) (sigma.n1 x sigma.n2)], evaluated in closed form.
// Reduces to -cos(theta) at t = 0 and to -cos(theta) exp(-t/tau_s) when all
// four correlation times equal tau_s.
double correlation(const Direction& n1, const Direction& n2,
                   const SpinDecayParams& p, double t);

} // namespace eprsim
