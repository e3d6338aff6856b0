// Copyright (c) 2026 The eprsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "eprsim/spatial_decoherence.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace eprsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_time(double t) {
  if (!std::isfinite(t) || t < 0.0) {
    throw std::invalid_argument("t must be finite and >= 0");
  }
}

double sign_of(Particle which) {
  return which == Particle::one ? 1.0 : -1.0;
}

// 2 tau - 3 + 4 e^-tau - e^-2tau; by series below tau = 0.01 where the direct
// form loses ~9 digits to cancellation (leading term (2/3) tau^3).
double drift_bracket(double tau) {
  if (tau < 0.01) {
    return tau * tau * tau *
           (2.0 / 3.0 +
            tau * (-0.5 + tau * (7.0 / 30.0 +
                                 tau * (-1.0 / 12.0 + tau * (31.0 / 1260.0)))));
  }
  return 2.0 * tau - 3.0 + 4.0 * std::exp(-tau) - std::exp(-2.0 * tau);
}

// Imaginary tilt of the R Gaussian, h(tau) in rho_spatial.
double tilt(const SpatialParams& p, double tau) {
  const double omt = -std::expm1(-tau); // 1 - e^-tau
  return p.hbar / (2.0 * p.d * p.d * p.m * p.gamma) * std::exp(-tau) * omt +
         p.D / (4.0 * p.m * p.gamma * p.gamma * p.hbar) * omt * omt;
}

double coherence_exponent_coeff(const SpatialParams& p, double tau) {
  const double omt2 = -std::expm1(-2.0 * tau); // 1 - e^-2tau
  return std::exp(-2.0 * tau) / (4.0 * p.d * p.d) +
         p.D / (8.0 * p.hbar * p.hbar * p.gamma) * omt2;
}

} // namespace

void SpatialParams::validate() const {
  const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(m)) throw std::invalid_argument("SpatialParams: m must be > 0");
  if (!positive(gamma)) {
    throw std::invalid_argument("SpatialParams: gamma must be > 0");
  }
  if (!std::isfinite(D) || D < 0.0) {
    throw std::invalid_argument("SpatialParams: D must be >= 0");
  }
  if (!std::isfinite(epsilon) || epsilon < 0.0) {
    throw std::invalid_argument("SpatialParams: epsilon must be >= 0");
  }
  if (!positive(d)) throw std::invalid_argument("SpatialParams: d must be > 0");
  if (!positive(hbar)) {
    throw std::invalid_argument("SpatialParams: hbar must be > 0");
  }
}

double big_m(const SpatialParams& p, double t) {
  p.validate();
  check_time(t);
  const double tau = p.gamma * t;
  const double omt = -std::expm1(-tau);
  const double mg = p.m * p.gamma;
  return p.d * p.d + p.hbar * p.hbar / (p.d * p.d * mg * mg) * omt * omt +
         p.D / (2.0 * mg * mg * p.gamma) * drift_bracket(tau);
}

double wavepacket_center(const SpatialParams& p, Particle which, double t) {
  p.validate();
  check_time(t);
  const double tau = p.gamma * t;
  return sign_of(which) * p.epsilon / (p.m * p.gamma * p.gamma) *
         (tau + std::expm1(-tau));
}

double separation(const SpatialParams& p, double t) {
  p.validate();
  check_time(t);
  const double tau = p.gamma * t;
  return 2.0 * p.epsilon / (p.m * p.gamma * p.gamma) *
         (tau + std::expm1(-tau));
}

double coherence_factor(const SpatialParams& p, double r, double t) {
  p.validate();
  check_time(t);
  if (!std::isfinite(r)) {
    throw std::invalid_argument("coherence_factor: r must be finite");
  }
  return std::exp(-coherence_exponent_coeff(p, p.gamma * t) * r * r);
}

Complex rho_spatial(const SpatialParams& p, Particle which, double R, double r,
                    double t) {
  p.validate();
  check_time(t);
  if (!std::isfinite(R) || !std::isfinite(r)) {
    throw std::invalid_argument("rho_spatial: R and r must be finite");
  }
  const double tau = p.gamma * t;
  const double M = big_m(p, t);
  const double a = coherence_exponent_coeff(p, tau);
  const double h = tilt(p, tau);
  const double xc = wavepacket_center(p, which, t);
  const double phase =
      sign_of(which) * p.epsilon / (p.hbar * p.gamma) * (-std::expm1(-tau));
  const Complex z(R - xc, -h * r);
  const Complex exponent = Complex(-a * r * r, phase * r) - z * z / M;
  return std::exp(exponent) / std::sqrt(kPi * M);
}

void PdeGrid::validate() const {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || x_min >= x_max) {
    throw std::invalid_argument("PdeGrid: require finite x_min < x_max");
  }
  if (n_points < 8) {
    throw std::invalid_argument("PdeGrid: n_points must be >= 8");
  }
}

double PdeResult::trace() const {
  const std::size_t n = grid.n_points;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += at(i, i).real();
  return s * grid.dx();
}

double PdeResult::mean_x() const {
  const std::size_t n = grid.n_points;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += grid.x(i) * at(i, i).real();
  return s * grid.dx() / trace();
}

double PdeResult::var_x() const {
  const std::size_t n = grid.n_points;
  const double mu = mean_x();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dxi = grid.x(i) - mu;
    s += dxi * dxi * at(i, i).real();
  }
  return s * grid.dx() / trace();
}

double pde_stable_dt(const SpatialParams& p, const PdeGrid& grid) {
  p.validate();
  grid.validate();
  const double dx = grid.dx();
  const double r_max = grid.x_max - grid.x_min;
  const double denom = 4.0 * p.hbar / (p.m * dx * dx) +
                       p.gamma * r_max / dx +
                       p.D / (4.0 * p.hbar * p.hbar) * r_max * r_max +
                       p.epsilon * r_max / p.hbar;
  return 2.0 / denom;
}

PdeResult pde_oracle_evolve(const SpatialParams& p, Particle which,
                            const PdeGrid& grid, double t_final, double dt) {
  p.validate();
  grid.validate();
  if (!std::isfinite(t_final) || t_final <= 0.0) {
    throw std::invalid_argument("pde_oracle_evolve: t_final must be > 0");
  }
  const double dt_max = pde_stable_dt(p, grid);
  if (!std::isfinite(dt) || dt <= 0.0 || dt > dt_max * (1.0 + 1e-12)) {
    throw std::invalid_argument(
        "pde_oracle_evolve: dt must lie in (0, " + std::to_string(dt_max) +
        "] (RK4 stability bound for this grid)");
  }
  for (double t : {0.0, t_final}) {
    const double c = wavepacket_center(p, which, t);
    const double w = 6.0 * std::sqrt(big_m(p, t));
    if (c - w < grid.x_min || c + w > grid.x_max) {
      throw std::invalid_argument(
          "pde_oracle_evolve: grid does not contain the packet "
          "(center +- 6 sqrt(M) at t = " +
          std::to_string(t) + ")");
    }
  }

  const std::size_t n = grid.n_points;
  const std::size_t S = n + 2; // padded stride; border stays identically zero
  const double dx = grid.dx();
  const double kin = p.hbar / (2.0 * p.m * dx * dx);
  const double s = sign_of(which);

  // All grid coefficients depend only on r = x_i - y_j = (i - j) dx.
  std::vector<double> fr(2 * n - 1);   // friction, times the antisymmetric stencil
  std::vector<Complex> loc(2 * n - 1); // diffusion + force, times rho itself
  for (std::size_t q = 0; q < 2 * n - 1; ++q) {
    const double r =
        (static_cast<double>(q) - static_cast<double>(n - 1)) * dx;
    fr[q] = -p.gamma * r / (4.0 * dx);
    loc[q] = Complex(-p.D * r * r / (4.0 * p.hbar * p.hbar),
                     s * p.epsilon * r / p.hbar);
  }

  std::vector<Complex> u(S * S, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid.x(i);
    for (std::size_t j = 0; j < n; ++j) {
      const double y = grid.x(j);
      u[(i + 1) * S + (j + 1)] =
          rho_spatial(p, which, 0.5 * (x + y), x - y, 0.0);
    }
  }

  const Complex ikin(0.0, kin);
  const auto stride = static_cast<std::ptrdiff_t>(S);
  auto rhs = [&](const std::vector<Complex>& in, std::vector<Complex>& out) {
    for (std::size_t i = 0; i < n; ++i) {
      const Complex* row = in.data() + (i + 1) * S + 1;
      Complex* orow = out.data() + (i + 1) * S + 1;
      const std::size_t base = i + (n - 1); // diag index at j = 0
      for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(n); ++j) {
        const Complex xp = row[j + stride];
        const Complex xm = row[j - stride];
        const Complex yp = row[j + 1];
        const Complex ym = row[j - 1];
        orow[j] = ikin * (xp + xm - yp - ym) +
                  fr[base - j] * (xp - xm - yp + ym) + loc[base - j] * row[j];
      }
    }
  };

  const auto n_steps = static_cast<std::size_t>(
      std::ceil(t_final / dt - 1e-12));
  const double h = t_final / static_cast<double>(std::max<std::size_t>(n_steps, 1));

  std::vector<Complex> k1(S * S, 0.0), k2(S * S, 0.0), k3(S * S, 0.0),
      k4(S * S, 0.0), tmp(S * S, 0.0);
  auto axpy = [&](const std::vector<Complex>& base, double c,
                  const std::vector<Complex>& k, std::vector<Complex>& out) {
    for (std::size_t q = 0; q < S * S; ++q) out[q] = base[q] + c * k[q];
  };
  for (std::size_t step = 0; step < std::max<std::size_t>(n_steps, 1); ++step) {
    rhs(u, k1);
    axpy(u, 0.5 * h, k1, tmp);
    rhs(tmp, k2);
    axpy(u, 0.5 * h, k2, tmp);
    rhs(tmp, k3);
    axpy(u, h, k3, tmp);
    rhs(tmp, k4);
    for (std::size_t q = 0; q < S * S; ++q) {
      u[q] += (h / 6.0) * (k1[q] + 2.0 * k2[q] + 2.0 * k3[q] + k4[q]);
    }
  }

  PdeResult result;
  result.grid = grid;
  result.t_final = t_final;
  result.rho.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      result.rho[i * n + j] = u[(i + 1) * S + (j + 1)];
    }
  }
  return result;
}

void write_grid_csv(const PdeResult& result, std::ostream& os) {
  os << "x,y,re,im\n";
  const std::size_t n = result.grid.n_points;
  char buf[160];
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Complex v = result.at(i, j);
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n",
                    result.grid.x(i), result.grid.x(j), v.real(), v.imag());
      os << buf;
    }
  }
}

} // namespace eprsim
