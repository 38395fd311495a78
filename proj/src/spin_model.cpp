#include "vbsim/spin_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

namespace vbsim {

namespace {

constexpr double kAngleSlack = 1e-12;
// Angles this close to an endpoint of the physical range are the endpoint.
constexpr double kEndpointSlack = 1e-14;

Vector16c singlet_pair(int i, int j, int k, int l) {
  // (|HV> - |VH>)_{ij} (|HV> - |VH>)_{kl} / 2
  Vector16c v = Vector16c::Zero();
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      int index = 0;
      index |= a << (kNumQubits - i);
      index |= (1 - a) << (kNumQubits - j);
      index |= b << (kNumQubits - k);
      index |= (1 - b) << (kNumQubits - l);
      const double sign = (a == 0 ? 1.0 : -1.0) * (b == 0 ? 1.0 : -1.0);
      v(index) += 0.5 * sign;
    }
  }
  return v;
}

}  // namespace

CouplingRatio::CouplingRatio(double kappa) : value_(kappa) {
  if (!std::isfinite(kappa)) {
    throw DomainError("CouplingRatio: use plus_infinity()/minus_infinity() for the limits");
  }
}

CouplingRatio CouplingRatio::parse(const std::string& text) {
  if (text == "+inf" || text == "inf" || text == "+infinity" || text == "infinity") {
    return plus_infinity();
  }
  if (text == "-inf" || text == "-infinity") {
    return minus_infinity();
  }
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw DomainError("cannot parse coupling ratio '" + text + "'");
  }
  return CouplingRatio(v);
}

double CouplingRatio::value() const {
  if (!is_finite()) {
    throw DomainError("CouplingRatio: infinite coupling has no finite value");
  }
  return value_;
}

std::string CouplingRatio::to_string() const {
  switch (kind_) {
    case Kind::PlusInfinity:
      return "+inf";
    case Kind::MinusInfinity:
      return "-inf";
    case Kind::Finite:
      break;
  }
  std::ostringstream os;
  os << std::setprecision(17) << value_;
  return os.str();
}

ThetaAngle::ThetaAngle(double radians) : radians_(radians) {
  if (!std::isfinite(radians) || radians < -kAngleSlack || radians > max() + kAngleSlack) {
    std::ostringstream msg;
    msg << "theta = " << radians << " rad is outside [0, pi/2]";
    throw DomainError(msg.str());
  }
  radians_ = std::clamp(radians, 0.0, max());
}

ThetaAngle ThetaAngle::from_pi_multiple(double multiple) {
  return ThetaAngle(multiple * std::numbers::pi);
}

double ThetaAngle::pi_multiple() const { return radians_ / std::numbers::pi; }

double ThetaAngle::physical_min() { return std::atan(1.0 / std::sqrt(2.0)); }

bool ThetaAngle::in_physical_range() const { return radians_ >= physical_min() - kEndpointSlack; }

Operator16 pair_coupling_operator(int i, int j) {
  if (i < 1 || j > kNumQubits || i >= j) {
    throw DomainError("pair_coupling_operator: require 1 <= i < j <= 4");
  }
  return embed_pair(pauli::x(), i, pauli::x(), j) + embed_pair(pauli::y(), i, pauli::y(), j) +
         embed_pair(pauli::z(), i, pauli::z(), j);
}

Operator16 initial_hamiltonian() { return pair_coupling_operator(1, 3) + pair_coupling_operator(2, 4); }

Operator16 competing_hamiltonian() {
  return pair_coupling_operator(1, 2) + pair_coupling_operator(3, 4);
}

Operator16 build_hamiltonian(CouplingRatio kappa) {
  if (!kappa.is_finite()) {
    throw DomainError(
        "build_hamiltonian: infinite coupling ratio; use the H1 limit (exact_ground_state) instead");
  }
  return initial_hamiltonian() + kappa.value() * competing_hamiltonian();
}

Operator16 total_spin_squared() {
  Operator16 s2 = 12.0 * Operator16::Identity();
  for (int i = 1; i <= kNumQubits; ++i) {
    for (int j = i + 1; j <= kNumQubits; ++j) {
      s2 += 2.0 * pair_coupling_operator(i, j);
    }
  }
  return s2;
}

double ground_state_energy_closed(CouplingRatio kappa) {
  if (!kappa.is_finite()) {
    throw DomainError("ground_state_energy_closed: energy diverges for infinite coupling");
  }
  const double k = kappa.value();
  return -2.0 * (1.0 + k) - 4.0 * std::sqrt(1.0 - k + k * k);
}

ThetaAngle theta_from_kappa(CouplingRatio kappa) {
  switch (kappa.kind()) {
    case CouplingRatio::Kind::PlusInfinity:
      return ThetaAngle(ThetaAngle::max());
    case CouplingRatio::Kind::MinusInfinity:
      return ThetaAngle(ThetaAngle::physical_min());
    case CouplingRatio::Kind::Finite:
      break;
  }
  const double k = kappa.value();
  const double root = std::sqrt(k * k - k + 1.0);
  // For negative kappa the direct sum cancels; use the rationalized form.
  const double tan2 = k >= 0.0 ? k + root : (1.0 - k) / (root - k);
  return ThetaAngle(std::atan(std::sqrt(tan2)));
}

CouplingRatio kappa_from_theta(ThetaAngle theta) {
  const double t = theta.radians();
  if (std::abs(t - ThetaAngle::max()) <= kEndpointSlack) {
    return CouplingRatio::plus_infinity();
  }
  const double lo = ThetaAngle::physical_min();
  if (std::abs(t - lo) <= kEndpointSlack) {
    return CouplingRatio::minus_infinity();
  }
  if (t < lo) {
    std::ostringstream msg;
    msg << "kappa_from_theta: theta = " << theta.pi_multiple()
        << " pi is below arctan(1/sqrt 2); no coupling ratio maps there";
    throw DomainError(msg.str());
  }
  const double tan2 = std::pow(std::tan(t), 2);
  return CouplingRatio((tan2 * tan2 - 1.0) / (2.0 * tan2 - 1.0));
}

PureState4 dimer_state(Pairing pairing) {
  switch (pairing) {
    case Pairing::Horizontal:
      return PureState4::from_amplitudes(singlet_pair(1, 2, 3, 4));
    case Pairing::Vertical:
      return PureState4::from_amplitudes(singlet_pair(1, 3, 2, 4));
    case Pairing::Crossed:
      return PureState4::from_amplitudes(singlet_pair(1, 4, 2, 3));
  }
  throw DomainError("dimer_state: unknown pairing");
}

double ground_state_norm(ThetaAngle theta) {
  const double c = std::cos(theta.radians());
  const double s = std::sin(theta.radians());
  const double c2 = std::cos(2.0 * theta.radians());
  return 0.5 * (std::pow(c, 4) + c2 * c2 + std::pow(s, 4));
}

PureState4 ground_state_analytic(ThetaAngle theta) {
  const double n = ground_state_norm(theta);
  if (!(n > 0.0)) {
    throw DomainError("ground_state_analytic: vanishing normalization");
  }
  const double t = theta.radians();
  const double cos2 = std::pow(std::cos(t), 2);
  const Vector16c v = std::cos(2.0 * t) * dimer_state(Pairing::Horizontal).amplitudes() -
                      cos2 * dimer_state(Pairing::Vertical).amplitudes();
  // The two dimer states are not orthogonal; the closed-form n(theta) is the
  // exact squared norm of v, so renormalizing only removes rounding.
  return PureState4::normalized(v / std::sqrt(n));
}

double ExactGroundState::overlap(const PureState4& psi) const {
  double total = 0.0;
  for (const auto& v : eigenspace) total += std::norm(v.dot(psi.amplitudes()));
  return total;
}

namespace {

ExactGroundState lowest_eigenspace(const Operator16& h, double tol) {
  Eigen::SelfAdjointEigenSolver<Operator16> es(h);
  ExactGroundState out;
  out.energy = es.eigenvalues()(0);
  for (int k = 0; k < kDim; ++k) {
    if (es.eigenvalues()(k) - out.energy > tol) break;
    out.eigenspace.push_back(es.eigenvectors().col(k));
  }
  return out;
}

}  // namespace

ExactGroundState exact_ground_state(CouplingRatio kappa, double degeneracy_tol) {
  switch (kappa.kind()) {
    case CouplingRatio::Kind::Finite:
      return lowest_eigenspace(build_hamiltonian(kappa), degeneracy_tol);
    case CouplingRatio::Kind::PlusInfinity:
      return lowest_eigenspace(competing_hamiltonian(), degeneracy_tol);
    case CouplingRatio::Kind::MinusInfinity:
      break;
  }
  // Restrict -H1 to the kernel of the total spin.
  Eigen::SelfAdjointEigenSolver<Operator16> spin(total_spin_squared());
  std::vector<Vector16c> kernel;
  for (int k = 0; k < kDim; ++k) {
    if (std::abs(spin.eigenvalues()(k)) < 1e-9) kernel.push_back(spin.eigenvectors().col(k));
  }
  const int m = static_cast<int>(kernel.size());
  Eigen::MatrixXcd basis(kDim, m);
  for (int k = 0; k < m; ++k) basis.col(k) = kernel[k];
  const Eigen::MatrixXcd restricted = -(basis.adjoint() * competing_hamiltonian() * basis);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(restricted);
  ExactGroundState out;
  out.energy = es.eigenvalues()(0);
  for (int k = 0; k < m; ++k) {
    if (es.eigenvalues()(k) - out.energy > degeneracy_tol) break;
    out.eigenspace.push_back(basis * es.eigenvectors().col(k));
  }
  return out;
}

double expectation(const Operator16& op, const PureState4& psi) {
  return psi.amplitudes().dot(op * psi.amplitudes()).real();
}

}  // namespace vbsim
