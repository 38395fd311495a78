#include "vbsim/optics.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace vbsim {

namespace {

constexpr double kUnderflowFloor = 1e-200;

double sqrt_factorial_product(const Occupation& occ) {
  double f = 1.0;
  for (auto n : occ) {
    for (int k = 2; k <= n; ++k) f *= static_cast<double>(k);
  }
  return std::sqrt(f);
}

struct PhotonRoute {
  int slot;
  Complex amplitude;
};

}  // namespace

FockState::FockState(int spatial_modes, int internal_dim)
    : spatial_modes_(spatial_modes), internal_dim_(internal_dim) {
  if (spatial_modes < 1 || internal_dim < 2 || internal_dim % 2 != 0) {
    throw DomainError("FockState: need >= 1 spatial mode and an even internal dimension");
  }
}

int FockState::slot(int spatial, int internal) const {
  if (spatial < 1 || spatial > spatial_modes_ || internal < 0 || internal >= internal_dim_) {
    throw DomainError("FockState: mode index out of range");
  }
  return (spatial - 1) * internal_dim_ + internal;
}

void FockState::add(const Occupation& occupation, Complex amplitude) {
  if (static_cast<int>(occupation.size()) != spatial_modes_ * internal_dim_) {
    throw DomainError("FockState: occupation vector has the wrong length");
  }
  int n = 0;
  for (auto k : occupation) n += k;
  if (photons_ >= 0 && n != photons_) {
    std::ostringstream msg;
    msg << "FockState: term with " << n << " photons added to a " << photons_ << "-photon state";
    throw DomainError(msg.str());
  }
  photons_ = n;
  terms_[occupation] += amplitude;
}

double FockState::norm_squared() const {
  double s = 0.0;
  for (const auto& [occ, amp] : terms_) s += std::norm(amp);
  return s;
}

namespace {

FockState make_source(bool tagged) {
  const int internal = tagged ? 4 : 2;
  FockState state(4, internal);
  // psi^-_{12} psi^-_{34} = 1/2 (HV - VH)(HV - VH)
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      Occupation occ(state.spatial_modes() * internal, 0);
      const int label3 = tagged ? 1 : 0;
      occ[state.slot(1, a)] += 1;
      occ[state.slot(2, 1 - a)] += 1;
      occ[state.slot(3, b + 2 * label3)] += 1;
      occ[state.slot(4, 1 - b)] += 1;
      const double sign = (a == 0 ? 1.0 : -1.0) * (b == 0 ? 1.0 : -1.0);
      state.add(occ, 0.5 * sign);
    }
  }
  return state;
}

}  // namespace

FockState singlet_source() { return make_source(false); }

FockState singlet_source_tagged() { return make_source(true); }

FockState apply_tdc(const FockState& state, ThetaAngle theta) {
  if (state.spatial_modes() != 4) {
    throw DomainError("apply_tdc: the coupler model expects exactly four spatial modes");
  }
  const double s = std::sin(theta.radians());
  const double c = std::cos(theta.radians());
  const int d = state.internal_dim();

  FockState out(4, d);
  std::map<Occupation, Complex> monomials;

  for (const auto& [occ, amp] : state.terms()) {
    // Creation-operator routes for each photon, one list per photon.
    std::vector<std::vector<PhotonRoute>> routes;
    Occupation fixed(occ.size(), 0);
    for (int spatial = 1; spatial <= 4; ++spatial) {
      for (int k = 0; k < d; ++k) {
        const int slot = state.slot(spatial, k);
        for (int n = 0; n < occ[slot]; ++n) {
          if (spatial == 1) {
            routes.push_back({{state.slot(1, k), s}, {state.slot(3, k), c}});
          } else if (spatial == 3) {
            routes.push_back({{state.slot(1, k), -c}, {state.slot(3, k), s}});
          } else {
            fixed[slot] += 1;
          }
        }
      }
    }
    const Complex coeff = amp / sqrt_factorial_product(occ);
    const std::size_t choices = std::size_t{1} << routes.size();
    for (std::size_t mask = 0; mask < choices; ++mask) {
      Occupation target = fixed;
      Complex a = coeff;
      for (std::size_t p = 0; p < routes.size(); ++p) {
        const PhotonRoute& r = routes[p][(mask >> p) & 1U];
        target[r.slot] += 1;
        a *= r.amplitude;
      }
      monomials[target] += a;
    }
  }

  for (const auto& [occ, coeff] : monomials) {
    if (coeff == Complex(0.0)) continue;
    out.add(occ, coeff * sqrt_factorial_product(occ));
  }
  return out;
}

namespace {

// Walks the one-photon-per-spatial-mode terms; `visit(qubit_index, label_key, amp)`.
template <typename Visit>
void for_each_coincidence(const FockState& state, Visit&& visit) {
  const int d = state.internal_dim();
  for (const auto& [occ, amp] : state.terms()) {
    int index = 0;
    int labels = 0;
    bool one_each = true;
    for (int spatial = 1; spatial <= 4 && one_each; ++spatial) {
      int count = 0;
      int internal = -1;
      for (int k = 0; k < d; ++k) {
        const int n = occ[state.slot(spatial, k)];
        count += n;
        if (n > 0) internal = k;
      }
      if (count != 1) {
        one_each = false;
        break;
      }
      index |= (internal % 2) << (kNumQubits - spatial);
      labels = labels * (d / 2) + internal / 2;
    }
    if (one_each) visit(index, labels, amp);
  }
}

void check_kept(double prob) {
  if (prob == 0.0) {
    throw PostselectionImpossible("post-selection impossible: no fourfold-coincidence component");
  }
  if (prob < kUnderflowFloor) {
    std::ostringstream msg;
    msg << "post-selection underflow: coincidence probability " << prob;
    throw PostselectionUnderflow(msg.str());
  }
}

}  // namespace

PostselectionResult postselect_coincidence(const FockState& state) {
  if (state.spatial_modes() != 4 || state.internal_dim() != 2) {
    throw DomainError("postselect_coincidence: expects four spatial modes with polarization only");
  }
  if (state.photon_number() != 4) {
    throw PostselectionImpossible("post-selection impossible: state does not hold four photons");
  }
  Vector16c kept = Vector16c::Zero();
  for_each_coincidence(state, [&](int index, int, Complex amp) { kept(index) += amp; });
  const double prob = kept.squaredNorm();
  check_kept(prob);
  return {PureState4::normalized(kept), prob};
}

MixedPostselectionResult postselect_coincidence_mixed(const FockState& state) {
  if (state.spatial_modes() != 4) {
    throw DomainError("postselect_coincidence_mixed: expects four spatial modes");
  }
  if (state.photon_number() != 4) {
    throw PostselectionImpossible("post-selection impossible: state does not hold four photons");
  }
  std::map<int, Vector16c> branches;
  for_each_coincidence(state, [&](int index, int labels, Complex amp) {
    auto [it, inserted] = branches.try_emplace(labels, Vector16c::Zero());
    it->second(index) += amp;
  });
  Matrix16c rho = Matrix16c::Zero();
  for (const auto& [labels, v] : branches) rho += v * v.adjoint();
  const double prob = rho.trace().real();
  check_kept(prob);
  return {DensityMatrix::from_matrix(rho / prob), prob};
}

PostselectionResult simulate_postselected(ThetaAngle theta) {
  return postselect_coincidence(apply_tdc(singlet_source(), theta));
}

MixedPostselectionResult simulate_distinguishable(ThetaAngle theta) {
  return postselect_coincidence_mixed(apply_tdc(singlet_source_tagged(), theta));
}

NoiseParams::NoiseParams(double white_noise_p, double visibility)
    : p_(white_noise_p), v_(visibility) {
  if (!(p_ >= 0.0 && p_ <= 1.0) || !(v_ >= 0.0 && v_ <= 1.0)) {
    std::ostringstream msg;
    msg << "NoiseParams: white_noise_p = " << p_ << " and visibility = " << v_
        << " must both lie in [0, 1]";
    throw DomainError(msg.str());
  }
}

DensityMatrix apply_noise(const PureState4& state, const NoiseParams& params,
                          const DensityMatrix& distinguishable) {
  const double p = params.white_noise_p();
  const double v = params.visibility();
  const Matrix16c pure = state.amplitudes() * state.amplitudes().adjoint();
  const Matrix16c rho = (1.0 - p) * (v * pure + (1.0 - v) * distinguishable.matrix()) +
                        p * Matrix16c::Identity() / 16.0;
  return DensityMatrix::from_matrix(rho);
}

DensityMatrix noisy_ground_state(ThetaAngle theta, const NoiseParams& params) {
  const PureState4 psi = simulate_postselected(theta).state;
  if (params.visibility() == 1.0) {
    return apply_noise(psi, params, DensityMatrix::from_pure(psi));
  }
  return apply_noise(psi, params, simulate_distinguishable(theta).state);
}

}  // namespace vbsim
