// Copyright (c) 2026 The eprsim Authors
// SPDX-License-Identifier: Apache-2.0
//
// stochastic_engine.hpp: Monte Carlo precession of classical polarization
// vectors in Gaussian white magnetic noise.
//
// The field correlation is parameterized directly by the per-axis correlation
// times: the gyromagnetic ratio is folded in so that the integrated rotation
// angle about axis a over a step dt has variance dt / (2 tau_aa). A
// correlation time of +infinity (kNoNoise) switches that axis off exactly.
//
// Each step applies an exact rotation (Rodrigues form) by the sampled kick,
// so |P| is preserved to rounding regardless of step size; a naive explicit
// Euler update P += kick x P is NOT norm-preserving and is deliberately not
// offered. Averages converge to the closed forms in analytic_dynamics.hpp.

#pragma once

#include <cstdint>
#include <vector>

#include "eprsim/analytic_dynamics.hpp"
#include "eprsim/random.hpp"
#include "eprsim/spin_algebra.hpp"

namespace eprsim {

struct NoiseParams {
  double tau_xx{1.0};
  double tau_yy{1.0};
  double tau_zz{1.0};

  void validate() const;
  // Smallest finite correlation time; kNoNoise if all axes are noiseless.
  double min_tau() const;
};

struct TrajectoryConfig {
  double dt{1e-2};
  std::size_t n_steps{100};
  std::uint64_t seed{0};

  // Enforces dt > 0 and the resolution bound dt <= min_tau / 100.
  void validate(const NoiseParams& noise) const;
};

struct EnsembleConfig {
  std::size_t n_traj{1000};
  std::uint64_t master_seed{0};

  void validate() const;
};

// Labels an independent seed stream; mc_correlation uses particle {1,2} and
// initial-condition {0,1,2}. Plain ensembles default to {0,0}.
struct StreamId {
  std::uint64_t particle{0};
  std::uint64_t initial_condition{0};
};

struct EnsembleSeries {
  std::vector<double> times;        // k * dt, k = 0..n_steps
  std::vector<Polarization> mean;   // component-wise trajectory average
  std::vector<Vec3> std_err;        // component-wise standard error of the mean
};

// Integrated rotation vector over one step: independent per-axis Gaussians
// with variance dt / (2 tau_aa), sampled in axis order x, y, z (three
// gaussian() calls, six engine draws: part of the reproducibility contract).
Vec3 sample_kick(const NoiseParams& noise, double dt, Rng& rng);

// Right-handed rotation of p about the kick axis by angle |kick|
// (delta P = kick x P for small kicks). A zero kick returns p unchanged.
Polarization step_polarization(const Polarization& p, const Vec3& kick);

// Single trajectory; returns n_steps + 1 samples starting at p0.
std::vector<Polarization> simulate_trajectory(const Polarization& p0,
                                              const NoiseParams& noise,
                                              const TrajectoryConfig& cfg);

// Trajectory-ensemble mean and standard error on the full step grid.
// Trajectory i uses child_seed(master_seed, stream.particle,
// stream.initial_condition, i); accumulation is in trajectory order, so the
// result is bit-identical for any n_threads (0 = hardware concurrency).
EnsembleSeries ensemble_average(const Polarization& p0,
                                const NoiseParams& noise,
                                const TrajectoryConfig& traj,
                                const EnsembleConfig& ens,
                                StreamId stream = {},
                                unsigned n_threads = 0);

// Exact per-component decay rates of the ensemble-averaged polarization in
// white noise: R_x = 1/(4 tau_yy) + 1/(4 tau_zz) and cyclic. Reduces to the
// tau0/tau1 closed forms when tau_xx = tau_yy.
Vec3 mean_decay_rates(const NoiseParams& noise);

struct McCorrelation {
  double estimate{0.0};
  double std_err{0.0};
};

// Monte Carlo two-spin correlation estimate at time t (which must sit on the
// step grid: t = k dt, k <= n_steps). The singlet is expanded over the three
// anti-aligned initial pairs P1 = +e_a, P2 = -e_a; each particle of each pair
// evolves in its own independent noise stream, and
//   E = sum_a (n1 . <P1_a(t)>) (n2 . <P2_a(t)>).
// The standard error propagates the six independent projection means.
McCorrelation mc_correlation(const Direction& n1, const Direction& n2,
                             const NoiseParams& noise1,
                             const NoiseParams& noise2, double t,
                             const TrajectoryConfig& traj,
                             const EnsembleConfig& ens,
                             unsigned n_threads = 0);

} // namespace eprsim
