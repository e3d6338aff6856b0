// Copyright (c) 2026 The eprsim Authors
// SPDX-License-Identifier: Apache-2.0
//
// spatial_decoherence.hpp: translational channel: each particle's
// center-of-mass density matrix under a constant force (+eps for particle 1,
// -eps for particle 2), linear friction, and momentum diffusion.
//
// Master equation, in center (R = (x+y)/2) and offset (r = x-y) coordinates:
//
//   d rho/dt = (i hbar/m) d2rho/dRdr - gamma r drho/dr
//              - (D / 4 hbar^2) r^2 rho  +- (i eps/hbar) r rho
//
// (upper sign: particle 1). gamma is the momentum relaxation rate, D the
// momentum diffusion coefficient (momentum^2/time). The closed forms below
// are the exact Gaussian solution for the initial pure state
// psi(x) = (d sqrt(pi))^(-1/2) exp(-x^2/2d^2); pde_oracle_evolve integrates
// the same equation by finite differences as an independent cross-check.
// Throughout, tau = gamma t.

#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "eprsim/spin_algebra.hpp"

namespace eprsim {

struct SpatialParams {
  double m{1.0};       // mass
  double gamma{1.0};   // momentum relaxation rate
  double D{0.5};       // momentum diffusion coefficient
  double epsilon{1.0}; // force magnitude (>= 0)
  double d{1.0};       // initial wavepacket width
  double hbar{1.0};

  void validate() const;
};

enum class Particle { one, two };

// Squared diagonal width:
//   M(tau) = d^2 + (hbar^2 / d^2 m^2 gamma^2)(1 - e^-tau)^2
//          + (D / 2 m^2 gamma^3)(2 tau - 3 + 4 e^-tau - e^-2tau).
// M(0) = d^2 exactly; dM/dt -> D / (m gamma)^2 for tau >> 1. The diagonal
// position variance is M/2. Small tau is evaluated by series to avoid
// cancellation in the last bracket (~ (2/3) tau^3).
double big_m(const SpatialParams& p, double t);

// Packet center: +- (eps / m gamma^2)(tau - 1 + e^-tau), upper sign for
// particle 1; asymptotically +- eps t / (m gamma).
double wavepacket_center(const SpatialParams& p, Particle which, double t);

// Distance between the two packet centers, 2 (eps/m gamma^2)(tau - 1 + e^-tau).
double separation(const SpatialParams& p, double t);

// Gaussian suppression of spatial coherence at off-diagonal offset r,
// normalized to 1 at r = 0:
//   exp[ -( e^-2tau / 4d^2 + (D / 8 hbar^2 gamma)(1 - e^-2tau) ) r^2 ].
// Monotone in t for fixed r; decreasing iff D / (8 hbar^2 gamma) > 1 / (4 d^2).
double coherence_factor(const SpatialParams& p, double r, double t);

// Full complex density matrix element rho(R, r, t). Normalized so the
// diagonal integrates to 1: the prefactor is 1/sqrt(pi M(tau)) and the
// diagonal is a Gaussian of variance M/2 centered on wavepacket_center.
Complex rho_spatial(const SpatialParams& p, Particle which, double R, double r,
                    double t);

// ---- finite-difference oracle ----------------------------------------------

struct PdeGrid {
  double x_min{-10.0};
  double x_max{10.0};
  std::size_t n_points{256}; // per axis

  double dx() const {
    return (x_max - x_min) / static_cast<double>(n_points - 1);
  }
  double x(std::size_t i) const {
    return x_min + static_cast<double>(i) * dx();
  }

  void validate() const;
};

// rho(x_i, y_j) on the square grid, row-major in i.
struct PdeResult {
  PdeGrid grid;
  double t_final{0.0};
  std::vector<Complex> rho;

  Complex at(std::size_t i, std::size_t j) const {
    return rho[i * grid.n_points + j];
  }
  double trace() const;  // sum_i Re rho(x_i, x_i) dx
  double mean_x() const; // diagonal first moment / trace
  double var_x() const;  // diagonal second central moment / trace
};

// Largest stable step for the RK4 / centered-difference scheme:
//   dt_max = 2 / ( 4 hbar/(m dx^2) + gamma r_max/dx
//                  + (D/4 hbar^2) r_max^2 + eps r_max/hbar ),
// r_max = x_max - x_min. Steps above this bound are rejected.
double pde_stable_dt(const SpatialParams& p, const PdeGrid& grid);

// Integrates the master equation from the pure initial state to t_final with
// uniform steps <= dt. The grid must contain the drifting packet
// (wavepacket_center +- 6 sqrt(M), checked at t = 0 and t = t_final) and dt
// must satisfy the stability bound; violations are rejected with a message
// naming the bound. The scheme preserves the diagonal trace to rounding.
PdeResult pde_oracle_evolve(const SpatialParams& p, Particle which,
                            const PdeGrid& grid, double t_final, double dt);

// Dump for inspection; columns exactly "x,y,re,im", one row per grid node.
void write_grid_csv(const PdeResult& result, std::ostream& os);

} // namespace eprsim
