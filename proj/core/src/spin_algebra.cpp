// Copyright (c) 2026 The eprsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "eprsim/spin_algebra.hpp"

#include <cmath>
#include <string>

namespace eprsim {

namespace {

const Complex kI(0.0, 1.0);

bool finite(double v) { return std::isfinite(v); }

double max_hermitian_defect(const Mat4& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// sigma . v for an arbitrary real vector (not necessarily unit).
Mat2 sigma_dot_vec(const Vec3& v) {
  Mat2 m;
  m << Complex(v.z(), 0.0), Complex(v.x(), -v.y()),
       Complex(v.x(), v.y()), Complex(-v.z(), 0.0);
  return m;
}

} // namespace

Direction::Direction(double x, double y, double z) : v_(x, y, z) {
  if (!finite(x) || !finite(y) || !finite(z)) {
    throw std::invalid_argument("Direction: components must be finite");
  }
  const double n2 = v_.squaredNorm();
  if (std::abs(n2 - 1.0) > kUnitNormTol) {
    throw std::invalid_argument(
        "Direction: squared norm " + std::to_string(n2) +
        " deviates from 1 by more than 1e-12; normalize explicitly");
  }
}

Direction Direction::normalized(double x, double y, double z) {
  const Vec3 v(x, y, z);
  const double n = v.norm();
  if (!finite(n) || n == 0.0) {
    throw std::invalid_argument("Direction: cannot normalize a zero or non-finite vector");
  }
  const Vec3 u = v / n;
  return Direction(u.x(), u.y(), u.z());
}

Polarization::Polarization(double x, double y, double z) : v_(x, y, z) {
  if (!finite(x) || !finite(y) || !finite(z)) {
    throw std::invalid_argument("Polarization: components must be finite");
  }
  const double n = v_.norm();
  if (n > 1.0 + kPolarizationTol) {
    throw std::invalid_argument("Polarization: norm " + std::to_string(n) +
                                " exceeds 1 + 1e-10");
  }
}

DensityMatrix4::DensityMatrix4(const Mat4& m) : m_(m) {
  const double herm = max_hermitian_defect(m_);
  if (!(herm <= kHermitianTol)) {
    throw std::invalid_argument("DensityMatrix4: Hermiticity defect " +
                                std::to_string(herm) + " exceeds 1e-12");
  }
  const Complex tr = m_.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > kTraceTol) {
    throw std::invalid_argument("DensityMatrix4: trace deviates from 1 by more than 1e-12");
  }
  Eigen::SelfAdjointEigenSolver<Mat4> es(m_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < kEigenvalueFloor) {
    throw std::invalid_argument("DensityMatrix4: eigenvalue " +
                                std::to_string(es.eigenvalues().minCoeff()) +
                                " below -1e-10");
  }
}

Eigen::Vector4d DensityMatrix4::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Mat4> es(m_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Mat2 pauli(Axis a) {
  Mat2 m;
  switch (a) {
    case Axis::x:
      m << 0, 1, 1, 0;
      return m;
    case Axis::y:
      m << 0, -kI, kI, 0;
      return m;
    case Axis::z:
      m << 1, 0, 0, -1;
      return m;
  }
  throw std::invalid_argument("pauli: bad axis");
}

Mat2 sigma_dot(const Direction& n) { return sigma_dot_vec(n.vec()); }

Mat4 tensor(const Mat2& a, const Mat2& b) {
  Mat4 out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    }
  }
  return out;
}

DensityMatrix4 singlet_density() {
  Mat4 m = Mat4::Zero();
  m(1, 1) = 0.5;
  m(2, 2) = 0.5;
  m(1, 2) = -0.5;
  m(2, 1) = -0.5;
  return DensityMatrix4(m);
}

double expectation(const DensityMatrix4& rho, const Mat4& obs) {
  const double defect = max_hermitian_defect(obs);
  if (!(defect <= kHermitianTol)) {
    throw std::invalid_argument("expectation: observable is not Hermitian (defect " +
                                std::to_string(defect) + ")");
  }
  const Complex tr = (rho.matrix() * obs).trace();
  if (std::abs(tr.imag()) >= 1e-10) {
    throw std::runtime_error("expectation: residual imaginary trace " +
                             std::to_string(tr.imag()));
  }
  return tr.real();
}

DensityMatrix4 from_polarizations(const Polarization& p1, const Polarization& p2) {
  const Mat4 prod = tensor(sigma_dot_vec(p1.vec()), sigma_dot_vec(p2.vec()));
  return DensityMatrix4(0.25 * (Mat4::Identity() + prod));
}

BlochForm decompose(const Mat2& rho2) {
  const double defect = (rho2 - rho2.adjoint()).cwiseAbs().maxCoeff();
  if (!(defect <= kHermitianTol)) {
    throw std::invalid_argument("decompose: input is not Hermitian (defect " +
                                std::to_string(defect) + ")");
  }
  BlochForm out;
  out.weight = rho2.trace().real();
  out.spin = Vec3((rho2 * pauli(Axis::x)).trace().real(),
                  (rho2 * pauli(Axis::y)).trace().real(),
                  (rho2 * pauli(Axis::z)).trace().real());
  return out;
}

} // namespace eprsim
