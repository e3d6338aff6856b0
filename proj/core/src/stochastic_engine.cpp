// Copyright (c) 2026 The eprsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "eprsim/stochastic_engine.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <future>
#include <string>
#include <thread>

namespace eprsim {

namespace {

struct KickSigmas {
  double x, y, z;
};

KickSigmas kick_sigmas(const NoiseParams& noise, double dt) {
  // dt / (2 tau) is exactly 0 at the no-noise sentinel.
  return {std::sqrt(dt / (2.0 * noise.tau_xx)),
          std::sqrt(dt / (2.0 * noise.tau_yy)),
          std::sqrt(dt / (2.0 * noise.tau_zz))};
}

void check_dt(double dt) {
  if (!std::isfinite(dt) || dt <= 0.0) {
    throw std::invalid_argument("dt must be finite and > 0");
  }
}

Vec3 rotate_by(const Vec3& p, const Vec3& kick) {
  const double angle = kick.norm();
  if (angle == 0.0) return p;
  const Vec3 axis = kick / angle;
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return c * p + s * axis.cross(p) + (1.0 - c) * axis.dot(p) * axis;
}

// One trajectory; writes n_steps + 1 xyz triples starting with p0.
void trajectory_series(const Vec3& p0, const KickSigmas& sig,
                       std::size_t n_steps, std::uint64_t seed, double* out) {
  Rng rng(seed);
  Vec3 p = p0;
  out[0] = p.x();
  out[1] = p.y();
  out[2] = p.z();
  for (std::size_t k = 1; k <= n_steps; ++k) {
    const Vec3 kick(sig.x * rng.gaussian(), sig.y * rng.gaussian(),
                    sig.z * rng.gaussian());
    p = rotate_by(p, kick);
    out[3 * k] = p.x();
    out[3 * k + 1] = p.y();
    out[3 * k + 2] = p.z();
  }
}

// Runs n_traj trajectories and hands each recorded series to `consume` in
// strict trajectory order. Workers only fill buffers; every floating-point
// accumulation happens inside `consume` on the calling thread, so the result
// is bit-identical to a plain sequential loop for any thread count.
void for_each_trajectory_ordered(
    const Vec3& p0, const KickSigmas& sig, std::size_t n_steps,
    std::size_t n_traj, unsigned n_threads,
    const std::function<std::uint64_t(std::size_t)>& seed_of,
    const std::function<void(std::size_t, const double*)>& consume) {
  const std::size_t stride = 3 * (n_steps + 1);
  unsigned threads = n_threads != 0
                         ? n_threads
                         : std::max(1u, std::thread::hardware_concurrency());

  if (threads <= 1 || n_traj < 2) {
    std::vector<double> buf(stride);
    for (std::size_t i = 0; i < n_traj; ++i) {
      trajectory_series(p0, sig, n_steps, seed_of(i), buf.data());
      consume(i, buf.data());
    }
    return;
  }

  struct Block {
    std::size_t first = 0;
    std::size_t count = 0;
    std::vector<double> data;
  };

  const std::size_t block_size = 32;
  const std::size_t n_blocks = (n_traj + block_size - 1) / block_size;
  const std::size_t window = 2 * static_cast<std::size_t>(threads);

  std::deque<std::future<Block>> inflight;
  std::size_t next_block = 0;
  std::size_t done_blocks = 0;

  auto launch_one = [&]() {
    const std::size_t b = next_block++;
    const std::size_t first = b * block_size;
    const std::size_t count = std::min(block_size, n_traj - first);
    inflight.push_back(
        std::async(std::launch::async, [=, &sig, &seed_of, &p0]() {
          Block blk;
          blk.first = first;
          blk.count = count;
          blk.data.resize(count * stride);
          for (std::size_t j = 0; j < count; ++j) {
            trajectory_series(p0, sig, n_steps, seed_of(first + j),
                              blk.data.data() + j * stride);
          }
          return blk;
        }));
  };

  while (done_blocks < n_blocks) {
    while (next_block < n_blocks && inflight.size() < window) launch_one();
    Block blk = inflight.front().get();
    inflight.pop_front();
    ++done_blocks;
    for (std::size_t j = 0; j < blk.count; ++j) {
      consume(blk.first + j, blk.data.data() + j * stride);
    }
  }
}

} // namespace

void NoiseParams::validate() const {
  for (const auto& [tau, name] :
       {std::pair{tau_xx, "tau_xx"}, {tau_yy, "tau_yy"}, {tau_zz, "tau_zz"}}) {
    if (std::isnan(tau) || tau <= 0.0) {
      throw std::invalid_argument(
          std::string("NoiseParams: ") + name +
          " must be positive (or infinite for no noise)");
    }
  }
}

double NoiseParams::min_tau() const {
  double m = kNoNoise;
  for (double tau : {tau_xx, tau_yy, tau_zz}) {
    if (std::isfinite(tau)) m = std::min(m, tau);
  }
  return m;
}

void TrajectoryConfig::validate(const NoiseParams& noise) const {
  check_dt(dt);
  const double bound = noise.min_tau() / 100.0;
  if (dt > bound) {
    throw std::invalid_argument(
        "TrajectoryConfig: dt = " + std::to_string(dt) +
        " exceeds the resolution bound min(tau)/100 = " + std::to_string(bound));
  }
}

void EnsembleConfig::validate() const {
  if (n_traj == 0) {
    throw std::invalid_argument("EnsembleConfig: n_traj must be >= 1");
  }
}

Vec3 sample_kick(const NoiseParams& noise, double dt, Rng& rng) {
  noise.validate();
  check_dt(dt);
  const KickSigmas sig = kick_sigmas(noise, dt);
  // Axis order x, y, z is fixed; each gaussian() consumes two engine draws.
  const double gx = rng.gaussian();
  const double gy = rng.gaussian();
  const double gz = rng.gaussian();
  return Vec3(sig.x * gx, sig.y * gy, sig.z * gz);
}

Polarization step_polarization(const Polarization& p, const Vec3& kick) {
  if (!kick.allFinite()) {
    throw std::invalid_argument("step_polarization: kick must be finite");
  }
  const Vec3 q = rotate_by(p.vec(), kick);
  return Polarization(q.x(), q.y(), q.z());
}

std::vector<Polarization> simulate_trajectory(const Polarization& p0,
                                              const NoiseParams& noise,
                                              const TrajectoryConfig& cfg) {
  noise.validate();
  cfg.validate(noise);
  std::vector<double> buf(3 * (cfg.n_steps + 1));
  trajectory_series(p0.vec(), kick_sigmas(noise, cfg.dt), cfg.n_steps, cfg.seed,
                    buf.data());
  std::vector<Polarization> out;
  out.reserve(cfg.n_steps + 1);
  for (std::size_t k = 0; k <= cfg.n_steps; ++k) {
    out.emplace_back(buf[3 * k], buf[3 * k + 1], buf[3 * k + 2]);
  }
  return out;
}

EnsembleSeries ensemble_average(const Polarization& p0,
                                const NoiseParams& noise,
                                const TrajectoryConfig& traj,
                                const EnsembleConfig& ens, StreamId stream,
                                unsigned n_threads) {
  noise.validate();
  traj.validate(noise);
  ens.validate();

  const std::size_t n_times = traj.n_steps + 1;
  std::vector<double> sum(3 * n_times, 0.0);
  std::vector<double> sumsq(3 * n_times, 0.0);

  auto seed_of = [&](std::size_t i) {
    return child_seed(ens.master_seed, stream.particle,
                      stream.initial_condition, i);
  };
  auto consume = [&](std::size_t, const double* series) {
    for (std::size_t k = 0; k < 3 * n_times; ++k) {
      const double v = series[k];
      sum[k] += v;
      sumsq[k] += v * v;
    }
  };
  for_each_trajectory_ordered(p0.vec(), kick_sigmas(noise, traj.dt),
                              traj.n_steps, ens.n_traj, n_threads, seed_of,
                              consume);

  const double n = static_cast<double>(ens.n_traj);
  EnsembleSeries out;
  out.times.resize(n_times);
  out.mean.reserve(n_times);
  out.std_err.resize(n_times);
  for (std::size_t k = 0; k < n_times; ++k) {
    out.times[k] = static_cast<double>(k) * traj.dt;
    Vec3 mean, se;
    for (int c = 0; c < 3; ++c) {
      const double s = sum[3 * k + c];
      const double s2 = sumsq[3 * k + c];
      mean[c] = s / n;
      if (ens.n_traj > 1) {
        const double var = std::max(0.0, (s2 - s * s / n) / (n - 1.0));
        se[c] = std::sqrt(var / n);
      } else {
        se[c] = 0.0;
      }
    }
    out.mean.emplace_back(mean.x(), mean.y(), mean.z());
    out.std_err[k] = se;
  }
  return out;
}

Vec3 mean_decay_rates(const NoiseParams& noise) {
  noise.validate();
  const double rx = 1.0 / noise.tau_xx;
  const double ry = 1.0 / noise.tau_yy;
  const double rz = 1.0 / noise.tau_zz;
  return Vec3(0.25 * (ry + rz), 0.25 * (rx + rz), 0.25 * (rx + ry));
}

McCorrelation mc_correlation(const Direction& n1, const Direction& n2,
                             const NoiseParams& noise1,
                             const NoiseParams& noise2, double t,
                             const TrajectoryConfig& traj,
                             const EnsembleConfig& ens, unsigned n_threads) {
  noise1.validate();
  noise2.validate();
  traj.validate(noise1);
  traj.validate(noise2);
  ens.validate();
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument("mc_correlation: t must be finite and >= 0");
  }
  const double steps_real = t / traj.dt;
  const auto k = static_cast<std::size_t>(std::llround(steps_real));
  if (std::abs(steps_real - static_cast<double>(k)) >
      1e-9 * std::max(1.0, steps_real)) {
    throw std::invalid_argument(
        "mc_correlation: t must lie on the step grid (t = k dt)");
  }
  if (k > traj.n_steps) {
    throw std::invalid_argument("mc_correlation: t exceeds n_steps * dt");
  }

  // Mean and standard error of the projection n . P(t) for one particle of
  // one anti-aligned initial pair.
  struct ProjStat {
    double mean = 0.0;
    double var_of_mean = 0.0;
  };
  const double n = static_cast<double>(ens.n_traj);
  auto run_projection = [&](const Vec3& p0, const Vec3& axis,
                            const NoiseParams& noise, std::uint64_t particle,
                            std::uint64_t ic) {
    double sum = 0.0;
    double sumsq = 0.0;
    auto seed_of = [&](std::size_t i) {
      return child_seed(ens.master_seed, particle, ic, i);
    };
    auto consume = [&](std::size_t, const double* series) {
      const double proj = axis.x() * series[3 * k] +
                          axis.y() * series[3 * k + 1] +
                          axis.z() * series[3 * k + 2];
      sum += proj;
      sumsq += proj * proj;
    };
    for_each_trajectory_ordered(p0, kick_sigmas(noise, traj.dt), k, ens.n_traj,
                                n_threads, seed_of, consume);
    ProjStat st;
    st.mean = sum / n;
    if (ens.n_traj > 1) {
      const double var = std::max(0.0, (sumsq - sum * sum / n) / (n - 1.0));
      st.var_of_mean = var / n;
    }
    return st;
  };

  double estimate = 0.0;
  double variance = 0.0;
  for (int a = 0; a < 3; ++a) {
    Vec3 e = Vec3::Zero();
    e[a] = 1.0;
    const ProjStat s1 =
        run_projection(e, n1.vec(), noise1, 1, static_cast<std::uint64_t>(a));
    const ProjStat s2 =
        run_projection(-e, n2.vec(), noise2, 2, static_cast<std::uint64_t>(a));
    estimate += s1.mean * s2.mean;
    // Exact variance of a product of independent means.
    variance += s1.mean * s1.mean * s2.var_of_mean +
                s2.mean * s2.mean * s1.var_of_mean +
                s1.var_of_mean * s2.var_of_mean;
  }
  return {estimate, std::sqrt(variance)};
}

} // namespace eprsim
