// Copyright (c) 2026 The eprsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "eprsim/analytic_dynamics.hpp"

#include <cmath>

#include <doctest.h>

#include "eprsim/random.hpp"

using namespace eprsim;

namespace {

Direction random_direction(Rng& rng) {
  const double z = 2.0 * rng.uniform() - 1.0;
  const double phi = 2.0 * 3.14159265358979323846 * rng.uniform();
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return Direction::normalized(s * std::cos(phi), s * std::sin(phi), z);
}

} // namespace

TEST_CASE("relaxation time validation") {
  CHECK_NOTHROW(RelaxationTimes{1.0, 2.0}.validate());
  CHECK_NOTHROW(RelaxationTimes{kNoNoise, kNoNoise}.validate());
  CHECK_THROWS_AS(RelaxationTimes{0.0, 1.0}.validate(), std::invalid_argument);
  CHECK_THROWS_AS(RelaxationTimes{1.0, -2.0}.validate(), std::invalid_argument);
  CHECK_THROWS_AS(RelaxationTimes{std::nan(""), 1.0}.validate(),
                  std::invalid_argument);
  CHECK(RelaxationTimes{kNoNoise, 1.0}.rate0() == 0.0);
}

TEST_CASE("polarization relaxation against frozen values") {
  const RelaxationTimes times{1.0, 1.0};

  SUBCASE("longitudinal component decays as exp(-t / 2 tau1)") {
    const Polarization p = evolve_polarization({0, 0, 1}, times, 1.0);
    CHECK(p.z() == doctest::Approx(0.60653065971263342).epsilon(1e-14));
    CHECK(p.x() == 0.0);
    CHECK(p.y() == 0.0);
  }

  SUBCASE("transverse components decay as exp(-t/4tau1 - t/4tau0)") {
    const Polarization p = evolve_polarization({1, 0, 0}, times, 1.0);
    CHECK(p.x() == doctest::Approx(0.60653065971263342).epsilon(1e-14));

    // switching off the longitudinal field halves the transverse rate
    const Polarization q =
        evolve_polarization({1, 0, 0}, RelaxationTimes{kNoNoise, 1.0}, 1.0);
    CHECK(q.x() == doctest::Approx(std::exp(-0.25)).epsilon(1e-14));
  }

  SUBCASE("t = 0 is the identity") {
    const Polarization p = evolve_polarization({0.3, -0.4, 0.5}, times, 0.0);
    CHECK(p.x() == 0.3);
    CHECK(p.y() == -0.4);
    CHECK(p.z() == 0.5);
  }

  SUBCASE("negative and non-finite times are rejected") {
    CHECK_THROWS_AS(evolve_polarization({0, 0, 1}, times, -0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS(evolve_polarization({0, 0, 1}, times, std::nan("")),
                    std::invalid_argument);
  }
}

TEST_CASE("two-spin decay coefficients") {
  SUBCASE("uniform times collapse both coefficients to exp(-t/tau)") {
    const SpinDecayParams p = SpinDecayParams::uniform(2.0);
    for (double t : {0.0, 0.5, 1.0, 4.0}) {
      CHECK(transverse_coefficient(p, t) ==
            doctest::Approx(std::exp(-t / 2.0)).epsilon(1e-14));
      CHECK(longitudinal_coefficient(p, t) ==
            doctest::Approx(std::exp(-t / 2.0)).epsilon(1e-14));
    }
  }

  SUBCASE("asymmetric rates add per the closed forms") {
    SpinDecayParams p;
    p.p1 = {1.0, 2.0};  // tau0, tau1
    p.p2 = {4.0, 8.0};
    const double t = 0.7;
    CHECK(transverse_coefficient(p, t) ==
          doctest::Approx(
              std::exp(-t / 4.0 * (1.0 + 0.5 + 0.25 + 0.125)))
              .epsilon(1e-14));
    CHECK(longitudinal_coefficient(p, t) ==
          doctest::Approx(std::exp(-t / 2.0 * (0.5 + 0.125))).epsilon(1e-14));
  }

  SUBCASE("no noise means no decay") {
    SpinDecayParams p;
    p.p1 = {kNoNoise, kNoNoise};
    p.p2 = {kNoNoise, kNoNoise};
    CHECK(transverse_coefficient(p, 100.0) == 1.0);
    CHECK(longitudinal_coefficient(p, 100.0) == 1.0);
  }
}

TEST_CASE("dephased singlet density matrix") {
  SUBCASE("t = 0 reproduces the pure singlet") {
    const Mat4 diff = singlet_rho_t(SpinDecayParams::uniform(1.0), 0.0).matrix() -
                      singlet_density().matrix();
    CHECK(diff.cwiseAbs().maxCoeff() < 1e-15);
  }

  SUBCASE("remains a valid state far from equilibrium and at it") {
    SpinDecayParams p;
    p.p1 = {0.3, 5.0};
    p.p2 = {kNoNoise, 0.7};
    for (double t : {0.0, 0.01, 0.5, 2.0, 25.0}) {
      const DensityMatrix4 rho = singlet_rho_t(p, t); // ctor re-validates
      const Mat4& m = rho.matrix();
      CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(std::abs(m.trace().real() - 1.0) < 1e-12);
      CHECK(rho.eigenvalues()(0) >= -1e-10);
    }
  }

  SUBCASE("long-time limit is the maximally mixed state") {
    const Mat4 m = singlet_rho_t(SpinDecayParams::uniform(1.0), 1e4).matrix();
    CHECK((m - 0.25 * Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("closed-form correlation") {
  SUBCASE("matches the trace formula on random inputs") {
    SpinDecayParams p;
    p.p1 = {0.8, 1.7};
    p.p2 = {2.2, 0.4};
    Rng rng(23);
    for (int i = 0; i < 100; ++i) {
      const Direction n1 = random_direction(rng);
      const Direction n2 = random_direction(rng);
      const double t = 3.0 * rng.uniform();
      const double via_trace = expectation(
          singlet_rho_t(p, t), tensor(sigma_dot(n1), sigma_dot(n2)));
      CHECK(std::abs(correlation(n1, n2, p, t) - via_trace) < 1e-12);
    }
  }

  SUBCASE("uniform times give -cos(theta) exp(-t/tau)") {
    const SpinDecayParams p = SpinDecayParams::uniform(1.5);
    const Direction a(std::sqrt(3.0) / 2.0, 0.0, 0.5);
    const Direction b(0.0, 0.0, 1.0);
    for (double t : {0.0, 0.3, 1.0, 6.0}) {
      CHECK(correlation(a, b, p, t) ==
            doctest::Approx(-0.5 * std::exp(-t / 1.5)).epsilon(1e-13));
    }
  }

  SUBCASE("no decay with all noise off") {
    SpinDecayParams p;
    p.p1 = {kNoNoise, kNoNoise};
    p.p2 = {kNoNoise, kNoNoise};
    const Direction z(0.0, 0.0, 1.0);
    CHECK(correlation(z, z, p, 50.0) == doctest::Approx(-1.0).epsilon(1e-15));
  }
}
