#pragma once

// Pairwise energy witnesses, concurrence, complementarity and monogamy for
// four-qubit states.

#include <array>

#include "vbsim/linalg.hpp"
#include "vbsim/spin_model.hpp"

namespace vbsim {

/// Normalized Heisenberg energies of spin 1 with spins 2, 3 and 4.
struct PairEnergies {
  double e12 = 0.0;
  double e13 = 0.0;
  double e14 = 0.0;

  std::array<double, 3> as_array() const { return {e12, e13, e14}; }
};

/// Reduced state of qubits i < j.
TwoQubitDensity partial_trace(const DensityMatrix& rho, int i, int j);

/// -(1/3) Tr(rho_ij sigma.sigma)
double pair_energy(const TwoQubitDensity& rho_ij);

/// Energies of the pairs (1,2), (1,3), (1,4) of `rho`.
PairEnergies pair_energies(const DensityMatrix& rho);

/// Closed forms along the ideal ground-state family.
PairEnergies pair_energies_closed(ThetaAngle theta);

/// e12^2 + e13^2 + e14^2
double complementarity_sum(const PairEnergies& e);

/// max{0, -1/2 + 3/2 e}, clamped to [0, 1].
double concurrence_from_energy(double e);

/// Wootters concurrence max{0, l1 - l2 - l3 - l4}.
double wootters_concurrence(const TwoQubitDensity& rho_ij);

/// Wootters concurrences of the pairs (1,2), (1,3), (1,4).
std::array<double, 3> pair_concurrences(const DensityMatrix& rho);

/// Sum of squares of the three concurrences.
double monogamy_sum(const std::array<double, 3>& concurrences);

/// Tr(rho H(kappa)) assembled from pairwise terms. Throws DomainError for
/// an infinite coupling ratio.
double total_energy(const DensityMatrix& rho, CouplingRatio kappa);

/// T[a][b] = Tr(rho_ij sigma_a (x) sigma_b), a, b over (X, Y, Z).
using Tensor3 = std::array<std::array<double, 3>, 3>;
Tensor3 correlation_tensor(const TwoQubitDensity& rho_ij);

}  // namespace vbsim
