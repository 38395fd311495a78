#pragma once

// Operator algebra and closed forms for the J1-J2 spin-1/2 tetramer.
//
// Bonds (1,3) and (2,4) carry J1, bonds (1,2) and (3,4) carry J2, and the
// Hamiltonian in units of J1 is H(kappa) = H0 + kappa*H1 with kappa = J2/J1.
// Spin products are built from the Pauli matrices themselves, so a singlet
// bond contributes -3 and a triplet bond +1.

#include <vector>

#include "vbsim/linalg.hpp"

namespace vbsim {

/// J2/J1 on the extended real line. The infinities are explicit sentinels.
class CouplingRatio {
 public:
  enum class Kind { Finite, PlusInfinity, MinusInfinity };

  constexpr CouplingRatio() = default;
  /// Throws DomainError for NaN or an IEEE infinity; use the named limits.
  explicit CouplingRatio(double kappa);

  static constexpr CouplingRatio plus_infinity() { return CouplingRatio(Kind::PlusInfinity); }
  static constexpr CouplingRatio minus_infinity() { return CouplingRatio(Kind::MinusInfinity); }
  /// Accepts "+inf", "inf", "-inf" or a decimal number.
  static CouplingRatio parse(const std::string& text);

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_finite() const { return kind_ == Kind::Finite; }
  /// Finite value; throws DomainError for the sentinels.
  double value() const;
  /// "+inf", "-inf" or the value at 17 significant digits.
  std::string to_string() const;

  friend bool operator==(const CouplingRatio&, const CouplingRatio&) = default;

 private:
  constexpr explicit CouplingRatio(Kind kind) : kind_(kind) {}
  Kind kind_ = Kind::Finite;
  double value_ = 0.0;
};

/// Coupler angle in radians, 0 <= theta <= pi/2.
class ThetaAngle {
 public:
  constexpr ThetaAngle() = default;
  explicit ThetaAngle(double radians);
  /// theta = multiple * pi, the notation used on the command line.
  static ThetaAngle from_pi_multiple(double multiple);

  constexpr double radians() const { return radians_; }
  double pi_multiple() const;

  /// arctan(1/sqrt 2), the image of kappa = -inf.
  static double physical_min();
  static double max() { return 1.5707963267948966; }
  bool in_physical_range() const;

 private:
  double radians_ = 0.0;
};

enum class Pairing {
  Horizontal,  // |Phi_=>  : singlets on (1,2) and (3,4)
  Vertical,    // |Phi_||> : singlets on (1,3) and (2,4)
  Crossed,     // |Phi_x>  : singlets on (1,4) and (2,3)
};

/// sigma_i . sigma_j embedded on four qubits; 1 <= i < j <= 4.
Operator16 pair_coupling_operator(int i, int j);

/// S_1.S_3 + S_2.S_4
Operator16 initial_hamiltonian();
/// S_1.S_2 + S_3.S_4
Operator16 competing_hamiltonian();
/// H0 + kappa*H1. Throws DomainError for the infinite limits.
Operator16 build_hamiltonian(CouplingRatio kappa);
/// (sum_i sigma_i)^2; zero exactly on the total-spin-zero subspace.
Operator16 total_spin_squared();

/// -2(1+kappa) - 4 sqrt(1 - kappa + kappa^2). Throws DomainError if infinite.
double ground_state_energy_closed(CouplingRatio kappa);

/// tan^2(theta) = kappa + sqrt(kappa^2 - kappa + 1), total on the extended reals.
ThetaAngle theta_from_kappa(CouplingRatio kappa);
/// Inverse of theta_from_kappa on [arctan(1/sqrt 2), pi/2]; endpoints map to
/// the infinite sentinels. Throws DomainError below the physical range.
CouplingRatio kappa_from_theta(ThetaAngle theta);

PureState4 dimer_state(Pairing pairing);

/// n(theta) = (cos^4 + cos^2(2 theta) + sin^4) / 2
double ground_state_norm(ThetaAngle theta);

/// (cos 2theta |Phi_=> - cos^2 theta |Phi_||>) / sqrt(n(theta))
PureState4 ground_state_analytic(ThetaAngle theta);

/// Lowest eigenvalue and an orthonormal basis of its eigenspace.
struct ExactGroundState {
  double energy = 0.0;
  std::vector<Vector16c> eigenspace;
  /// Squared norm of the projection of `psi` onto the eigenspace.
  double overlap(const PureState4& psi) const;
};

/// Dense diagonalization of H(kappa). For kappa = +inf the ground space of
/// H1 is returned; for kappa = -inf that of -H1 restricted to total spin 0.
/// The reported energy for the limits is the eigenvalue of +/-H1.
ExactGroundState exact_ground_state(CouplingRatio kappa, double degeneracy_tol = 1e-9);

/// <psi|op|psi> for a Hermitian operator.
double expectation(const Operator16& op, const PureState4& psi);

}  // namespace vbsim
