#pragma once

// Bosonic linear-optics model of the four-photon source, the tunable
// directional coupler (TDC) on spatial modes 1 and 3, and fourfold
// coincidence post-selection.
//
// Coupler convention. Creation operators of spatial modes 1 and 3 transform
// identically for every internal degree of freedom:
//
//     a1^dag -> sin(theta) a1^dag + cos(theta) a3^dag
//     a3^dag -> -cos(theta) a1^dag + sin(theta) a3^dag
//
// so the cross-coupled port carries power cos^2(theta) and the coupler is the
// identity at theta = pi/2. With this labeling the coincidence-post-selected
// state equals the tetramer ground state for every theta.

#include <cstdint>
#include <map>
#include <vector>

#include "vbsim/linalg.hpp"
#include "vbsim/spin_model.hpp"

namespace vbsim {

/// Photon occupation of every (spatial mode, internal state) pair.
using Occupation = std::vector<std::uint8_t>;

/// Sparse superposition over Fock states. Amplitudes refer to normalized
/// Fock vectors |n1 n2 ...>, so a doubly occupied mode carries the sqrt(2!)
/// factor relative to the raw creation-operator monomial.
class FockState {
 public:
  /// `internal_dim` is 2 (polarization) or 2*L for L distinguishability labels.
  FockState(int spatial_modes, int internal_dim);

  int spatial_modes() const { return spatial_modes_; }
  int internal_dim() const { return internal_dim_; }
  int photon_number() const { return photons_; }
  const std::map<Occupation, Complex>& terms() const { return terms_; }

  /// Mode slot of (spatial mode 1..S, internal state 0..D-1).
  int slot(int spatial, int internal) const;

  /// Adds `amplitude` to the term; throws DomainError if the photon number
  /// differs from the terms already present or the shape is wrong.
  void add(const Occupation& occupation, Complex amplitude);

  /// Sum of |amplitude|^2.
  double norm_squared() const;

 private:
  int spatial_modes_;
  int internal_dim_;
  int photons_ = -1;
  std::map<Occupation, Complex> terms_;
};

/// Two singlets (|HV> - |VH>)/sqrt 2 on spatial pairs (1,2) and (3,4).
FockState singlet_source();

/// The same source with the two photons that meet at the coupler made
/// distinguishable: the photon entering mode 1 carries label 0, the one
/// entering mode 3 label 1 (internal_dim = 4, internal = pol + 2*label).
FockState singlet_source_tagged();

/// Applies the coupler to spatial modes 1 and 3. The input must have exactly
/// four spatial modes; otherwise DomainError.
FockState apply_tdc(const FockState& state, ThetaAngle theta);

/// Kept component has no support at all.
class PostselectionImpossible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Kept component is nonzero but too small to renormalize reliably.
class PostselectionUnderflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PostselectionResult {
  PureState4 state;
  double success_probability = 0.0;
};

struct MixedPostselectionResult {
  DensityMatrix state;
  double success_probability = 0.0;
};

/// Keeps one photon per spatial mode and maps polarization to qubits
/// (H -> 0, V -> 1). Requires internal_dim == 2.
PostselectionResult postselect_coincidence(const FockState& state);

/// As postselect_coincidence, tracing out distinguishability labels.
MixedPostselectionResult postselect_coincidence_mixed(const FockState& state);

/// Full indistinguishable pipeline: source, coupler, post-selection.
PostselectionResult simulate_postselected(ThetaAngle theta);

/// Post-selected state when the photons at the coupler are fully
/// distinguishable (no two-photon interference).
MixedPostselectionResult simulate_distinguishable(ThetaAngle theta);

/// White-noise fraction p and two-photon interference visibility V.
class NoiseParams {
 public:
  NoiseParams() = default;
  /// Throws DomainError unless both lie in [0, 1].
  NoiseParams(double white_noise_p, double visibility);

  double white_noise_p() const { return p_; }
  double visibility() const { return v_; }
  bool is_ideal() const { return p_ == 0.0 && v_ == 1.0; }

 private:
  double p_ = 0.0;
  double v_ = 1.0;
};

/// rho = (1-p) [V |psi><psi| + (1-V) rho_dist] + p I/16.
DensityMatrix apply_noise(const PureState4& state, const NoiseParams& params,
                          const DensityMatrix& distinguishable);

/// apply_noise with rho_dist taken from simulate_distinguishable(theta).
DensityMatrix noisy_ground_state(ThetaAngle theta, const NoiseParams& params);

}  // namespace vbsim
