// Copyright (c) 2026 The eprsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "eprsim/stochastic_engine.hpp"

#include <cmath>

#include <doctest.h>

using namespace eprsim;

TEST_CASE("noise parameter validation") {
  CHECK_NOTHROW(NoiseParams{1.0, 2.0, kNoNoise}.validate());
  CHECK_THROWS_AS(NoiseParams{0.0, 1.0, 1.0}.validate(), std::invalid_argument);
  CHECK_THROWS_AS(NoiseParams{1.0, -1.0, 1.0}.validate(),
                  std::invalid_argument);
  CHECK_THROWS_AS(NoiseParams{1.0, std::nan(""), 1.0}.validate(),
                  std::invalid_argument);

  CHECK(NoiseParams{2.0, 0.5, kNoNoise}.min_tau() == 0.5);
  CHECK(NoiseParams{kNoNoise, kNoNoise, kNoNoise}.min_tau() == kNoNoise);
}

TEST_CASE("step resolution bound dt <= min_tau / 100") {
  NoiseParams noise;
  TrajectoryConfig cfg;
  cfg.dt = 0.01;
  CHECK_NOTHROW(cfg.validate(noise)); // exactly at the bound
  cfg.dt = 0.02;
  CHECK_THROWS_AS(cfg.validate(noise), std::invalid_argument);
  cfg.dt = -1.0;
  CHECK_THROWS_AS(cfg.validate(noise), std::invalid_argument);
}

TEST_CASE("kick sampling") {
  SUBCASE("variance matches dt / (2 tau) per axis") {
    NoiseParams noise{1.0, 4.0, kNoNoise};
    const double dt = 1e-3;
    Rng rng(31);
    const int n = 100000;
    Vec3 sum = Vec3::Zero();
    Vec3 sumsq = Vec3::Zero();
    for (int i = 0; i < n; ++i) {
      const Vec3 k = sample_kick(noise, dt, rng);
      sum += k;
      sumsq += k.cwiseProduct(k);
      CHECK(k.z() == 0.0); // switched off exactly
    }
    // sample variance of a normal estimates sigma^2 to ~ sqrt(2/n) relative
    const double vx = sumsq.x() / n - std::pow(sum.x() / n, 2);
    const double vy = sumsq.y() / n - std::pow(sum.y() / n, 2);
    CHECK(vx == doctest::Approx(dt / 2.0).epsilon(0.02));
    CHECK(vy == doctest::Approx(dt / 8.0).epsilon(0.02));
  }

  SUBCASE("always consumes six draws, even when axes are off") {
    NoiseParams quiet{kNoNoise, kNoNoise, kNoNoise};
    Rng a(5);
    Rng b(5);
    const Vec3 k = sample_kick(quiet, 1e-3, a);
    CHECK(k.norm() == 0.0);
    for (int i = 0; i < 6; ++i) b.raw();
    CHECK(a.raw() == b.raw());
  }
}

TEST_CASE("polarization step is an exact rotation") {
  SUBCASE("quarter turn about z sends x to y") {
    const Polarization p =
        step_polarization({1, 0, 0}, Vec3(0, 0, 1.5707963267948966));
    CHECK(std::abs(p.x()) < 1e-15);
    CHECK(p.y() == doctest::Approx(1.0).epsilon(1e-15));
  }

  SUBCASE("norm is preserved where the Euler update is not") {
    const Vec3 kick(0.0, 0.0, 0.5);
    const Vec3 p0(1.0, 0.0, 0.0);
    const Polarization rotated = step_polarization(Polarization(p0), kick);
    CHECK(rotated.norm() == doctest::Approx(1.0).epsilon(1e-15));
    const double euler_norm = (p0 + kick.cross(p0)).norm();
    CHECK(euler_norm > 1.1); // sqrt(1.25); why steps must be rotations
  }

  SUBCASE("zero kick is the identity") {
    const Polarization p = step_polarization({0.1, 0.2, -0.3}, Vec3::Zero());
    CHECK(p.x() == 0.1);
    CHECK(p.y() == 0.2);
    CHECK(p.z() == -0.3);
  }

  SUBCASE("non-finite kicks are rejected") {
    CHECK_THROWS_AS(
        step_polarization({0, 0, 1}, Vec3(std::nan(""), 0.0, 0.0)),
        std::invalid_argument);
  }
}

TEST_CASE("single trajectory") {
  NoiseParams noise;
  TrajectoryConfig cfg;
  cfg.dt = 1e-3;
  cfg.n_steps = 50;
  cfg.seed = 77;

  const auto traj = simulate_trajectory({0, 0, 1}, noise, cfg);
  CHECK(traj.size() == 51);
  CHECK(traj.front().z() == 1.0);

  SUBCASE("same seed reproduces bitwise, different seed does not") {
    const auto again = simulate_trajectory({0, 0, 1}, noise, cfg);
    for (std::size_t k = 0; k < traj.size(); ++k) {
      CHECK(traj[k].x() == again[k].x());
      CHECK(traj[k].y() == again[k].y());
      CHECK(traj[k].z() == again[k].z());
    }
    cfg.seed = 78;
    const auto other = simulate_trajectory({0, 0, 1}, noise, cfg);
    CHECK(other.back().z() != traj.back().z());
  }

  SUBCASE("norm stays pinned to 1 over the whole path") {
    for (const auto& p : traj) {
      CHECK(std::abs(p.norm() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("ensemble average") {
  NoiseParams noise;
  TrajectoryConfig traj;
  traj.dt = 1e-2;
  traj.n_steps = 50;
  EnsembleConfig ens;
  ens.n_traj = 2000;
  ens.master_seed = 2025;

  const EnsembleSeries series = ensemble_average({0, 0, 1}, noise, traj, ens);
  REQUIRE(series.times.size() == 51);
  REQUIRE(series.mean.size() == 51);
  REQUIRE(series.std_err.size() == 51);
  CHECK(series.times[1] == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(series.mean.front().z() == 1.0);
  CHECK(series.std_err.front().z() == 0.0); // all trajectories start equal

  SUBCASE("mean tracks exp(-t / 2 tau1) within 4 standard errors") {
    const std::size_t k = 50; // t = 0.5
    const double expected = std::exp(-0.25);
    const double band = 4.0 * series.std_err[k].z() + 1e-12;
    CHECK(std::abs(series.mean[k].z() - expected) < band);
  }

  SUBCASE("bitwise identical across thread counts") {
    const EnsembleSeries s1 =
        ensemble_average({0, 0, 1}, noise, traj, ens, {}, 1);
    const EnsembleSeries s4 =
        ensemble_average({0, 0, 1}, noise, traj, ens, {}, 4);
    for (std::size_t k = 0; k < s1.times.size(); ++k) {
      CHECK(s1.mean[k].x() == s4.mean[k].x());
      CHECK(s1.mean[k].y() == s4.mean[k].y());
      CHECK(s1.mean[k].z() == s4.mean[k].z());
      CHECK(s1.std_err[k] == s4.std_err[k]);
      CHECK(s1.mean[k].z() == series.mean[k].z()); // default thread count too
    }
  }

  SUBCASE("one-trajectory ensembles report zero standard error") {
    EnsembleConfig one;
    one.n_traj = 1;
    const EnsembleSeries s = ensemble_average({0, 0, 1}, noise, traj, one);
    CHECK(s.std_err.back() == Vec3::Zero());
  }
}

TEST_CASE("independent streams are uncorrelated") {
  NoiseParams noise;
  TrajectoryConfig traj;
  traj.dt = 1e-2;
  traj.n_steps = 30;
  const std::size_t n = 2000;

  double sum1 = 0.0, sum2 = 0.0, sum11 = 0.0, sum22 = 0.0, sum12 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    TrajectoryConfig c1 = traj;
    c1.seed = child_seed(99, 1, 0, i);
    TrajectoryConfig c2 = traj;
    c2.seed = child_seed(99, 2, 0, i);
    const double z1 = simulate_trajectory({0, 0, 1}, noise, c1).back().z();
    const double z2 = simulate_trajectory({0, 0, -1}, noise, c2).back().z();
    sum1 += z1;
    sum2 += z2;
    sum11 += z1 * z1;
    sum22 += z2 * z2;
    sum12 += z1 * z2;
  }
  const double m1 = sum1 / n;
  const double m2 = sum2 / n;
  const double cov = sum12 / n - m1 * m2;
  const double v1 = sum11 / n - m1 * m1;
  const double v2 = sum22 / n - m2 * m2;
  const double r = cov / std::sqrt(v1 * v2);
  CHECK(std::abs(r) * std::sqrt(static_cast<double>(n)) < 4.0);
}

TEST_CASE("per-component mean decay rates") {
  const Vec3 r = mean_decay_rates(NoiseParams{1.0, 2.0, 4.0});
  CHECK(r.x() == doctest::Approx(0.1875).epsilon(1e-15));  // 1/8 + 1/16
  CHECK(r.y() == doctest::Approx(0.3125).epsilon(1e-15));  // 1/4 + 1/16
  CHECK(r.z() == doctest::Approx(0.375).epsilon(1e-15));   // 1/4 + 1/8

  // tau_xx = tau_yy reduces to the closed-form pair of rates
  const Vec3 q = mean_decay_rates(NoiseParams{3.0, 3.0, 5.0});
  CHECK(q.z() == doctest::Approx(1.0 / (2.0 * 3.0)).epsilon(1e-15));
  CHECK(q.x() ==
        doctest::Approx(1.0 / (4.0 * 3.0) + 1.0 / (4.0 * 5.0)).epsilon(1e-15));
}

TEST_CASE("monte carlo correlation") {
  NoiseParams noise;
  TrajectoryConfig traj;
  traj.dt = 1e-2;
  traj.n_steps = 100;
  EnsembleConfig ens;
  ens.n_traj = 2000;
  ens.master_seed = 7;
  const Direction z(0.0, 0.0, 1.0);

  SUBCASE("t = 0 recovers the exact singlet correlation with zero error") {
    const McCorrelation mc =
        mc_correlation(z, z, noise, noise, 0.0, traj, ens);
    CHECK(mc.estimate == -1.0);
    CHECK(mc.std_err == 0.0);
  }

  SUBCASE("off-grid and out-of-range times are rejected") {
    CHECK_THROWS_AS(mc_correlation(z, z, noise, noise, 0.0153, traj, ens),
                    std::invalid_argument);
    CHECK_THROWS_AS(mc_correlation(z, z, noise, noise, 1.5, traj, ens),
                    std::invalid_argument);
  }

  SUBCASE("tracks the closed form within 4 standard errors") {
    const double t = 0.5;
    const McCorrelation mc = mc_correlation(z, z, noise, noise, t, traj, ens);
    // noise taus map onto tau1 = tau_xx = tau_yy, tau0 = tau_zz
    const SpinDecayParams p = SpinDecayParams::uniform(1.0);
    const double analytic = correlation(z, z, p, t);
    CHECK(mc.std_err > 0.0);
    CHECK(mc.std_err < 0.05);
    CHECK(std::abs(mc.estimate - analytic) < 4.0 * mc.std_err);
  }

  SUBCASE("deterministic for fixed seed and any thread count") {
    const McCorrelation a =
        mc_correlation(z, z, noise, noise, 0.3, traj, ens, 1);
    const McCorrelation b =
        mc_correlation(z, z, noise, noise, 0.3, traj, ens, 4);
    CHECK(a.estimate == b.estimate);
    CHECK(a.std_err == b.std_err);
  }
}
