#pragma once

// Shared numeric types for the four-qubit (tetramer) state space.
//
// Basis convention: |q1 q2 q3 q4> with H -> 0 and V -> 1, flattened as
// index = 8*q1 + 4*q2 + 2*q3 + q4. Qubits are numbered 1..4 in every public
// interface.

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace vbsim {

using Complex = std::complex<double>;
using Vector16c = Eigen::Matrix<Complex, 16, 1>;
using Matrix16c = Eigen::Matrix<Complex, 16, 16>;
using Matrix4c = Eigen::Matrix<Complex, 4, 4>;
using Matrix2c = Eigen::Matrix<Complex, 2, 2>;
using Operator16 = Matrix16c;

inline constexpr int kNumQubits = 4;
inline constexpr int kDim = 16;

/// Precondition or parameter outside the supported domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input file parsed but violates the documented schema.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bit of qubit `q` (1-based) inside a basis index.
constexpr int qubit_bit(int index, int q) { return (index >> (kNumQubits - q)) & 1; }

namespace pauli {
Matrix2c identity();
Matrix2c x();
Matrix2c y();
Matrix2c z();
}  // namespace pauli

/// Tensor product of four single-qubit operators, ops[0] acting on qubit 1.
Matrix16c kron4(const Matrix2c& a, const Matrix2c& b, const Matrix2c& c, const Matrix2c& d);

/// Embeds `a` on qubit i and `b` on qubit j (identity elsewhere).
Matrix16c embed_pair(const Matrix2c& a, int i, const Matrix2c& b, int j);

/// Normalized four-qubit pure state. Equality is up to global phase.
class PureState4 {
 public:
  PureState4();  // |HHHH>

  /// Throws DomainError unless the norm is 1 within `tol`.
  static PureState4 from_amplitudes(const Vector16c& amplitudes, double tol = 1e-12);
  /// Rescales to unit norm. Throws DomainError for the zero vector.
  static PureState4 normalized(const Vector16c& amplitudes);

  const Vector16c& amplitudes() const { return amp_; }
  Complex operator[](int index) const { return amp_(index); }

  Complex inner(const PureState4& other) const { return amp_.dot(other.amp_); }
  /// |<this|other>|^2
  double overlap(const PureState4& other) const { return std::norm(inner(other)); }

 private:
  explicit PureState4(Vector16c a) : amp_(std::move(a)) {}
  Vector16c amp_;
};

/// 16x16 Hermitian, positive semidefinite, unit-trace matrix.
class DensityMatrix {
 public:
  static constexpr double kTolerance = 1e-10;

  DensityMatrix();  // I/16

  /// Validates the invariants; throws DomainError on violation.
  static DensityMatrix from_matrix(const Matrix16c& m, double tol = kTolerance);
  static DensityMatrix from_pure(const PureState4& psi);
  static DensityMatrix maximally_mixed() { return DensityMatrix(); }

  const Matrix16c& matrix() const { return m_; }
  double purity() const;
  double trace() const { return m_.trace().real(); }

 private:
  explicit DensityMatrix(Matrix16c m) : m_(std::move(m)) {}
  Matrix16c m_;
};

/// Two-qubit reduced state.
class TwoQubitDensity {
 public:
  static constexpr double kTolerance = 1e-10;

  static TwoQubitDensity from_matrix(const Matrix4c& m, double tol = kTolerance);
  static TwoQubitDensity from_pure(const Eigen::Matrix<Complex, 4, 1>& psi);

  const Matrix4c& matrix() const { return m_; }

 private:
  explicit TwoQubitDensity(Matrix4c m) : m_(std::move(m)) {}
  Matrix4c m_;
};

/// Largest |m_ij - conj(m_ji)|.
template <typename Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace vbsim
