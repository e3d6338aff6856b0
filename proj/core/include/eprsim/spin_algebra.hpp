// Copyright (c) 2026 The eprsim Authors
// SPDX-License-Identifier: Apache-2.0
//
// spin_algebra.hpp: Pauli operators, two-qubit helpers, and the validated
// value types (Direction, Polarization, DensityMatrix4) shared by the library.

#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace eprsim {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

enum class Axis { x, y, z };

// Validation tolerances. These are part of the public contract: constructors
// below throw std::invalid_argument when a bound is exceeded.
inline constexpr double kUnitNormTol = 1e-12;     // | |n|^2 - 1 | for directions
inline constexpr double kPolarizationTol = 1e-10; // |P| may reach 1 + this
inline constexpr double kHermitianTol = 1e-12;    // entrywise |rho - rho^dag|
inline constexpr double kTraceTol = 1e-12;        // |Tr(rho) - 1|
inline constexpr double kEigenvalueFloor = -1e-10;

// Measurement axis: unit vector, checked on construction.
class Direction {
 public:
  Direction(double x, double y, double z);
  explicit Direction(const Vec3& v) : Direction(v.x(), v.y(), v.z()) {}

  // Rescales an arbitrary nonzero vector onto the unit sphere. This is the
  // only sanctioned way to build a Direction from unnormalized input; the
  // constructor itself rejects it.
  static Direction normalized(double x, double y, double z);

  const Vec3& vec() const { return v_; }
  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  double z() const { return v_.z(); }

 private:
  Vec3 v_;
};

inline double dot(const Direction& a, const Direction& b) {
  return a.vec().dot(b.vec());
}

// Single-particle polarization vector <sigma>; norm at most 1 (+ tolerance).
class Polarization {
 public:
  Polarization() : v_(Vec3::Zero()) {}
  Polarization(double x, double y, double z);
  explicit Polarization(const Vec3& v) : Polarization(v.x(), v.y(), v.z()) {}

  const Vec3& vec() const { return v_; }
  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  double z() const { return v_.z(); }
  double norm() const { return v_.norm(); }

 private:
  Vec3 v_;
};

// Two-spin density matrix in the product basis (uu, ud, du, dd).
// Construction enforces Hermiticity (1e-12 entrywise), unit trace (1e-12),
// and positive semidefiniteness (eigenvalues >= -1e-10).
class DensityMatrix4 {
 public:
  explicit DensityMatrix4(const Mat4& m);

  const Mat4& matrix() const { return m_; }
  Eigen::Vector4d eigenvalues() const; // ascending, real

 private:
  Mat4 m_;
};

Mat2 pauli(Axis a);

// sigma . n for a unit direction; Hermitian, traceless, eigenvalues +-1.
Mat2 sigma_dot(const Direction& n);

// Kronecker product, first factor = particle 1.
Mat4 tensor(const Mat2& a, const Mat2& b);

// |psi><psi| for the spin singlet (|ud> - |du>)/sqrt(2).
DensityMatrix4 singlet_density();

// Re Tr(rho * obs) for Hermitian obs. Non-Hermitian observables are rejected;
// a residual imaginary trace above 1e-10 (cannot happen for valid inputs)
// raises std::runtime_error.
double expectation(const DensityMatrix4& rho, const Mat4& obs);

// Product-form two-spin state (1/4)(1x1 + (sigma1.P1)(sigma2.P2)).
// Positive for all admissible polarizations: the eigenvalues are
// (1 +- |P1||P2|)/4, each twice.
DensityMatrix4 from_polarizations(const Polarization& p1, const Polarization& p2);

// Bloch form of a Hermitian 2x2 matrix: rho = (weight * 1 + spin . sigma)/2.
struct BlochForm {
  double weight{0.0}; // Tr(rho)
  Vec3 spin;          // spin[a] = Tr(rho sigma_a)

  // spin / weight; only meaningful when weight != 0.
  Vec3 polarization() const {
    if (weight == 0.0) return spin;
    return spin / weight;
  }
};

BlochForm decompose(const Mat2& rho2);

} // namespace eprsim
