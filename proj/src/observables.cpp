#include "vbsim/observables.hpp"

#include <algorithm>
#include <cmath>

namespace vbsim {

namespace {

Matrix4c kron2(const Matrix2c& a, const Matrix2c& b) {
  Matrix4c m;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) m(r, c) = a(r >> 1, c >> 1) * b(r & 1, c & 1);
  }
  return m;
}

const Matrix4c& heisenberg_pair() {
  static const Matrix4c op =
      kron2(pauli::x(), pauli::x()) + kron2(pauli::y(), pauli::y()) + kron2(pauli::z(), pauli::z());
  return op;
}

}  // namespace

TwoQubitDensity partial_trace(const DensityMatrix& rho, int i, int j) {
  if (i < 1 || j > kNumQubits || i >= j) {
    throw DomainError("partial_trace: require 1 <= i < j <= 4");
  }
  const Matrix16c& m = rho.matrix();
  Matrix4c out = Matrix4c::Zero();
  for (int r = 0; r < kDim; ++r) {
    for (int c = 0; c < kDim; ++c) {
      // Traced qubits must agree between row and column.
      bool match = true;
      for (int q = 1; q <= kNumQubits; ++q) {
        if (q != i && q != j && qubit_bit(r, q) != qubit_bit(c, q)) {
          match = false;
          break;
        }
      }
      if (!match) continue;
      const int rr = 2 * qubit_bit(r, i) + qubit_bit(r, j);
      const int cc = 2 * qubit_bit(c, i) + qubit_bit(c, j);
      out(rr, cc) += m(r, c);
    }
  }
  return TwoQubitDensity::from_matrix(out);
}

double pair_energy(const TwoQubitDensity& rho_ij) {
  const double e = -(rho_ij.matrix() * heisenberg_pair()).trace().real() / 3.0;
  return std::clamp(e, -1.0, 1.0);
}

PairEnergies pair_energies(const DensityMatrix& rho) {
  return {pair_energy(partial_trace(rho, 1, 2)), pair_energy(partial_trace(rho, 1, 3)),
          pair_energy(partial_trace(rho, 1, 4))};
}

PairEnergies pair_energies_closed(ThetaAngle theta) {
  const double n = ground_state_norm(theta);
  if (!(n > 0.0)) throw DomainError("pair_energies_closed: vanishing normalization");
  const double t = theta.radians();
  const double s2 = std::pow(std::sin(t), 2);
  const double c2 = std::pow(std::cos(t), 2);
  const double cos2t = std::cos(2.0 * t);
  return {-(s2 * cos2t) / n, (s2 * c2) / n, (c2 * cos2t) / n};
}

double complementarity_sum(const PairEnergies& e) {
  return e.e12 * e.e12 + e.e13 * e.e13 + e.e14 * e.e14;
}

double concurrence_from_energy(double e) { return std::clamp(-0.5 + 1.5 * e, 0.0, 1.0); }

double wootters_concurrence(const TwoQubitDensity& rho_ij) {
  // With rho = W W^dag, the square roots of the eigenvalues of
  // rho (Y (x) Y) rho^* (Y (x) Y) are the singular values of W^T (Y (x) Y) W,
  // which avoids square roots of rounding-level eigenvalues.
  const Matrix4c yy = kron2(pauli::y(), pauli::y());
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(rho_ij.matrix());
  const Eigen::Vector4d vals = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Matrix4c w = es.eigenvectors() * vals.asDiagonal();
  const Matrix4c tau = w.transpose() * yy * w;
  Eigen::JacobiSVD<Matrix4c> svd(tau);
  Eigen::Vector4d lambda = svd.singularValues();
  std::sort(lambda.data(), lambda.data() + 4, std::greater<>());
  return std::clamp(lambda(0) - lambda(1) - lambda(2) - lambda(3), 0.0, 1.0);
}

std::array<double, 3> pair_concurrences(const DensityMatrix& rho) {
  return {wootters_concurrence(partial_trace(rho, 1, 2)), wootters_concurrence(partial_trace(rho, 1, 3)),
          wootters_concurrence(partial_trace(rho, 1, 4))};
}

double monogamy_sum(const std::array<double, 3>& c) { return c[0] * c[0] + c[1] * c[1] + c[2] * c[2]; }

double total_energy(const DensityMatrix& rho, CouplingRatio kappa) {
  if (!kappa.is_finite()) {
    throw DomainError("total_energy: infinite coupling ratio has no finite energy");
  }
  auto bond = [&](int i, int j) {
    return (partial_trace(rho, i, j).matrix() * heisenberg_pair()).trace().real();
  };
  return bond(1, 3) + bond(2, 4) + kappa.value() * (bond(1, 2) + bond(3, 4));
}

Tensor3 correlation_tensor(const TwoQubitDensity& rho_ij) {
  const std::array<Matrix2c, 3> axes{pauli::x(), pauli::y(), pauli::z()};
  Tensor3 t{};
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) t[a][b] = (rho_ij.matrix() * kron2(axes[a], axes[b])).trace().real();
  }
  return t;
}

}  // namespace vbsim
