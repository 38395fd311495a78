#include "vbsim/linalg.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace vbsim {

namespace pauli {
Matrix2c identity() { return Matrix2c::Identity(); }
Matrix2c x() {
  Matrix2c m;
  m << 0, 1, 1, 0;
  return m;
}
Matrix2c y() {
  Matrix2c m;
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
Matrix2c z() {
  Matrix2c m;
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace pauli

Matrix16c kron4(const Matrix2c& a, const Matrix2c& b, const Matrix2c& c, const Matrix2c& d) {
  const std::array<const Matrix2c*, 4> ops{&a, &b, &c, &d};
  Matrix16c out;
  for (int r = 0; r < kDim; ++r) {
    for (int col = 0; col < kDim; ++col) {
      Complex v = 1.0;
      for (int q = 1; q <= kNumQubits && v != Complex(0); ++q) {
        v *= (*ops[q - 1])(qubit_bit(r, q), qubit_bit(col, q));
      }
      out(r, col) = v;
    }
  }
  return out;
}

Matrix16c embed_pair(const Matrix2c& a, int i, const Matrix2c& b, int j) {
  if (i < 1 || i > kNumQubits || j < 1 || j > kNumQubits || i == j) {
    throw DomainError("embed_pair: qubit indices must be distinct values in 1..4");
  }
  std::array<Matrix2c, 4> ops;
  ops.fill(Matrix2c::Identity());
  ops[i - 1] = a;
  ops[j - 1] = b;
  return kron4(ops[0], ops[1], ops[2], ops[3]);
}

PureState4::PureState4() : amp_(Vector16c::Zero()) { amp_(0) = 1.0; }

PureState4 PureState4::from_amplitudes(const Vector16c& amplitudes, double tol) {
  const double norm2 = amplitudes.squaredNorm();
  if (!std::isfinite(norm2) || std::abs(norm2 - 1.0) > tol) {
    std::ostringstream msg;
    msg << "PureState4: squared norm " << norm2 << " differs from 1";
    throw DomainError(msg.str());
  }
  return PureState4(amplitudes);
}

PureState4 PureState4::normalized(const Vector16c& amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw DomainError("PureState4: cannot normalize a zero or non-finite vector");
  }
  return PureState4(amplitudes / norm);
}

DensityMatrix::DensityMatrix() : m_(Matrix16c::Identity() / 16.0) {}

namespace {

template <typename M>
void validate_density(const M& m, double tol, const char* what) {
  if (!m.allFinite()) {
    throw DomainError(std::string(what) + ": non-finite entries");
  }
  const double herm = hermiticity_defect(m);
  if (herm > tol) {
    std::ostringstream msg;
    msg << what << ": not Hermitian (defect " << herm << ")";
    throw DomainError(msg.str());
  }
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > tol) {
    std::ostringstream msg;
    msg << what << ": trace " << tr << " differs from 1";
    throw DomainError(msg.str());
  }
  const M h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<M> es(h, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -tol) {
    std::ostringstream msg;
    msg << what << ": not positive semidefinite (min eigenvalue " << min_eig << ")";
    throw DomainError(msg.str());
  }
}

}  // namespace

DensityMatrix DensityMatrix::from_matrix(const Matrix16c& m, double tol) {
  validate_density(m, tol, "DensityMatrix");
  return DensityMatrix(0.5 * (m + m.adjoint()));
}

DensityMatrix DensityMatrix::from_pure(const PureState4& psi) {
  return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
}

double DensityMatrix::purity() const { return (m_ * m_).trace().real(); }

TwoQubitDensity TwoQubitDensity::from_matrix(const Matrix4c& m, double tol) {
  validate_density(m, tol, "TwoQubitDensity");
  return TwoQubitDensity(0.5 * (m + m.adjoint()));
}

TwoQubitDensity TwoQubitDensity::from_pure(const Eigen::Matrix<Complex, 4, 1>& psi) {
  const double norm2 = psi.squaredNorm();
  if (std::abs(norm2 - 1.0) > 1e-12) {
    throw DomainError("TwoQubitDensity: state is not normalized");
  }
  return TwoQubitDensity(psi * psi.adjoint());
}

}  // namespace vbsim
