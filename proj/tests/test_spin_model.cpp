#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "vbsim/spin_model.hpp"

using namespace vbsim;

namespace {

// sigma_i . sigma_j from its action on basis states: ZZ is diagonal (+1
// parallel, -1 antiparallel) and XX + YY maps an antiparallel pair to twice
// the flipped pair.
Matrix16c bond_oracle(int i, int j) {
  Matrix16c m = Matrix16c::Zero();
  for (int b = 0; b < 16; ++b) {
    const int bi = (b >> (4 - i)) & 1;
    const int bj = (b >> (4 - j)) & 1;
    if (bi == bj) {
      m(b, b) += 1.0;
    } else {
      m(b, b) -= 1.0;
      const int flipped = b ^ (1 << (4 - i)) ^ (1 << (4 - j));
      m(flipped, b) += 2.0;
    }
  }
  return m;
}

Matrix16c hamiltonian_oracle(double kappa) {
  return bond_oracle(1, 3) + bond_oracle(2, 4) + kappa * (bond_oracle(1, 2) + bond_oracle(3, 4));
}

double min_eigenvalue(const Matrix16c& h) {
  Eigen::SelfAdjointEigenSolver<Matrix16c> es(h);
  return es.eigenvalues()(0);
}

Vector16c basis_ket(const char* label) {
  int index = 0;
  for (int q = 0; q < 4; ++q) index = 2 * index + (label[q] == 'V' ? 1 : 0);
  Vector16c v = Vector16c::Zero();
  v(index) = 1.0;
  return v;
}

}  // namespace

TEST(PairOperator, TwoQubitSpectrumIsSingletAndTriplet) {
  Matrix4c lit;
  lit << 1, 0, 0, 0,
         0, -1, 2, 0,
         0, 2, -1, 0,
         0, 0, 0, 1;
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(lit);
  EXPECT_NEAR(es.eigenvalues()(0), -3.0, 1e-14);
  for (int k = 1; k < 4; ++k) EXPECT_NEAR(es.eigenvalues()(k), 1.0, 1e-14);

  const Matrix16c op = pair_coupling_operator(1, 2);
  for (int r = 0; r < 16; ++r) {
    for (int c = 0; c < 16; ++c) {
      const Complex expected = ((r & 3) == (c & 3)) ? lit(r >> 2, c >> 2) : Complex(0.0);
      EXPECT_NEAR(std::abs(op(r, c) - expected), 0.0, 1e-14) << r << "," << c;
    }
  }
}

TEST(PairOperator, MatchesBitOracleForEveryPair) {
  for (int i = 1; i <= 4; ++i) {
    for (int j = i + 1; j <= 4; ++j) {
      EXPECT_LT((pair_coupling_operator(i, j) - bond_oracle(i, j)).norm(), 1e-14) << i << j;
    }
  }
  EXPECT_THROW(pair_coupling_operator(2, 2), DomainError);
  EXPECT_THROW(pair_coupling_operator(0, 3), DomainError);
}

TEST(Hamiltonian, MatchesOracle) {
  for (double kappa : {-2.5, 0.0, 0.7, 1.0, 13.0}) {
    EXPECT_LT((build_hamiltonian(CouplingRatio(kappa)) - hamiltonian_oracle(kappa)).norm(), 1e-13);
  }
  EXPECT_THROW(build_hamiltonian(CouplingRatio::plus_infinity()), DomainError);
}

TEST(GroundEnergy, SpotValues) {
  EXPECT_NEAR(min_eigenvalue(hamiltonian_oracle(0.0)), -6.0, 1e-12);
  EXPECT_NEAR(min_eigenvalue(hamiltonian_oracle(1.0)), -8.0, 1e-12);
  EXPECT_NEAR(min_eigenvalue(hamiltonian_oracle(-1.0)), -4.0 * std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(ground_state_energy_closed(CouplingRatio(0.0)), -6.0, 1e-14);
  EXPECT_NEAR(ground_state_energy_closed(CouplingRatio(1.0)), -8.0, 1e-14);
  EXPECT_NEAR(ground_state_energy_closed(CouplingRatio(-1.0)), -4.0 * std::sqrt(3.0), 1e-14);
}

TEST(GroundEnergy, ClosedFormMatchesEigensolverOnGrid) {
  for (int k = 0; k <= 100; ++k) {
    const double kappa = -50.0 + k;
    const double oracle = min_eigenvalue(hamiltonian_oracle(kappa));
    EXPECT_NEAR(ground_state_energy_closed(CouplingRatio(kappa)), oracle, 1e-10) << kappa;
    EXPECT_NEAR(exact_ground_state(CouplingRatio(kappa)).energy, oracle, 1e-10) << kappa;
  }
  EXPECT_THROW(ground_state_energy_closed(CouplingRatio::minus_infinity()), DomainError);
}

TEST(GroundState, AnalyticStateSpansExactGroundSpace) {
  const double lo = ThetaAngle::physical_min();
  const double hi = ThetaAngle::max();
  for (int k = 0; k <= 200; ++k) {
    const ThetaAngle theta(lo + (hi - lo) * k / 200.0);
    const ExactGroundState gs = exact_ground_state(kappa_from_theta(theta));
    ASSERT_EQ(gs.eigenspace.size(), 1u) << k;
    EXPECT_NEAR(gs.overlap(ground_state_analytic(theta)), 1.0, 1e-10) << k;
  }
}

TEST(GroundState, HasTotalSpinZero) {
  const Matrix16c s2 = total_spin_squared();
  for (double t : {0.0, 0.3, 0.7, 1.1, 1.5707963267948966}) {
    const PureState4 psi = ground_state_analytic(ThetaAngle(t));
    EXPECT_LT((s2 * psi.amplitudes()).norm(), 1e-13) << t;
  }
}

TEST(GroundState, EnergyExpectationEqualsClosedForm) {
  for (double kappa : {-4.0, -0.5, 0.0, 0.5, 1.0, 3.0}) {
    const CouplingRatio k(kappa);
    const PureState4 psi = ground_state_analytic(theta_from_kappa(k));
    EXPECT_NEAR(expectation(build_hamiltonian(k), psi), ground_state_energy_closed(k), 1e-10) << kappa;
  }
}

TEST(Mapping, KnownPoints) {
  EXPECT_NEAR(theta_from_kappa(CouplingRatio(0.0)).radians(), std::numbers::pi / 4, 1e-15);
  EXPECT_NEAR(theta_from_kappa(CouplingRatio(1.0)).radians(), std::atan(std::sqrt(2.0)), 1e-15);
  EXPECT_NEAR(theta_from_kappa(CouplingRatio::plus_infinity()).radians(), std::numbers::pi / 2, 1e-15);
  EXPECT_NEAR(theta_from_kappa(CouplingRatio::minus_infinity()).radians(), std::atan(1.0 / std::sqrt(2.0)), 1e-15);
  EXPECT_EQ(kappa_from_theta(ThetaAngle(ThetaAngle::max())), CouplingRatio::plus_infinity());
  EXPECT_EQ(kappa_from_theta(ThetaAngle(ThetaAngle::physical_min())), CouplingRatio::minus_infinity());
  EXPECT_NEAR(kappa_from_theta(ThetaAngle(std::atan(std::sqrt(2.0)))).value(), 1.0, 1e-12);
}

TEST(Mapping, DefiningRelationHolds) {
  for (double kappa : {-1e3, -7.0, -1.0, 0.0, 0.25, 1.0, 42.0}) {
    const double t = std::tan(theta_from_kappa(CouplingRatio(kappa)).radians());
    const double expected = kappa + std::sqrt(kappa * kappa - kappa + 1.0);
    EXPECT_NEAR(t * t, expected, 1e-9 * std::max(1.0, std::abs(expected))) << kappa;
  }
}

TEST(Mapping, RoundTrip) {
  for (int k = 0; k <= 400; ++k) {
    const double kappa = -1e4 + 2e4 * k / 400.0;
    const CouplingRatio back = kappa_from_theta(theta_from_kappa(CouplingRatio(kappa)));
    ASSERT_TRUE(back.is_finite());
    EXPECT_NEAR(back.value(), kappa, 1e-9 * std::max(1.0, std::abs(kappa))) << kappa;
  }
  for (double kappa : {-3.0, -0.999, 0.0, 0.5, 2.0, 17.0}) {
    EXPECT_NEAR(kappa_from_theta(theta_from_kappa(CouplingRatio(kappa))).value(), kappa, 1e-12);
  }
}

TEST(Mapping, RejectsOutOfRange) {
  EXPECT_THROW(kappa_from_theta(ThetaAngle(0.3)), DomainError);
  EXPECT_THROW(ThetaAngle(-0.1), DomainError);
  EXPECT_THROW(ThetaAngle::from_pi_multiple(2.0), DomainError);
  EXPECT_THROW(CouplingRatio(std::nan("")), DomainError);
  EXPECT_THROW((void)CouplingRatio(std::numeric_limits<double>::infinity()), DomainError);
  EXPECT_THROW(CouplingRatio::plus_infinity().value(), DomainError);
}

TEST(CouplingRatio, ParseAndPrint) {
  EXPECT_EQ(CouplingRatio::parse("+inf"), CouplingRatio::plus_infinity());
  EXPECT_EQ(CouplingRatio::parse("inf"), CouplingRatio::plus_infinity());
  EXPECT_EQ(CouplingRatio::parse("-inf"), CouplingRatio::minus_infinity());
  EXPECT_DOUBLE_EQ(CouplingRatio::parse("-2.5").value(), -2.5);
  EXPECT_EQ(CouplingRatio::minus_infinity().to_string(), "-inf");
  EXPECT_EQ(CouplingRatio(1.0).to_string(), "1");
  EXPECT_THROW(CouplingRatio::parse("abc"), DomainError);
}

TEST(DimerStates, BasisExpansions) {
  const Vector16c eq = 0.5 * (basis_ket("HVHV") - basis_ket("HVVH") - basis_ket("VHHV") + basis_ket("VHVH"));
  const Vector16c par = 0.5 * (basis_ket("HHVV") - basis_ket("HVVH") - basis_ket("VHHV") + basis_ket("VVHH"));
  const Vector16c cross = 0.5 * (basis_ket("HHVV") - basis_ket("HVHV") - basis_ket("VHVH") + basis_ket("VVHH"));
  EXPECT_LT((dimer_state(Pairing::Horizontal).amplitudes() - eq).norm(), 1e-15);
  EXPECT_LT((dimer_state(Pairing::Vertical).amplitudes() - par).norm(), 1e-15);
  EXPECT_LT((dimer_state(Pairing::Crossed).amplitudes() - cross).norm(), 1e-15);
  EXPECT_LT((cross - (par - eq)).norm(), 1e-15);
  EXPECT_NEAR(eq.dot(par).real(), 0.5, 1e-15);
  EXPECT_NEAR(eq.dot(cross).real(), -0.5, 1e-15);
}

TEST(DimerStates, AreGroundStatesOfTheirBonds) {
  // A dimer covering is the ground state of the Hamiltonian containing only its bonds.
  const PureState4 eq = dimer_state(Pairing::Horizontal);
  EXPECT_NEAR(expectation(bond_oracle(1, 2) + bond_oracle(3, 4), eq), -6.0, 1e-14);
  const PureState4 par = dimer_state(Pairing::Vertical);
  EXPECT_NEAR(expectation(bond_oracle(1, 3) + bond_oracle(2, 4), par), -6.0, 1e-14);
  const PureState4 cross = dimer_state(Pairing::Crossed);
  EXPECT_NEAR(expectation(bond_oracle(1, 4) + bond_oracle(2, 3), cross), -6.0, 1e-14);
}

TEST(GroundState, NormAndLimits) {
  for (double t : {0.0, 0.2, 0.785398, 1.3, 1.5707963267948966}) {
    const double c = std::pow(std::cos(t), 2);
    const double s = std::pow(std::sin(t), 2);
    EXPECT_NEAR(ground_state_norm(ThetaAngle(t)), c * c + s * s - c * s, 1e-14);
  }
  EXPECT_NEAR(ground_state_analytic(ThetaAngle(ThetaAngle::max())).overlap(dimer_state(Pairing::Horizontal)), 1.0,
              1e-15);
  EXPECT_NEAR(ground_state_analytic(ThetaAngle(std::numbers::pi / 4)).overlap(dimer_state(Pairing::Vertical)),
              1.0, 1e-15);
}

TEST(ExactGroundState, InfiniteLimits) {
  const auto plus = exact_ground_state(CouplingRatio::plus_infinity());
  ASSERT_EQ(plus.eigenspace.size(), 1u);
  EXPECT_NEAR(plus.overlap(dimer_state(Pairing::Horizontal)), 1.0, 1e-12);
  const auto minus = exact_ground_state(CouplingRatio::minus_infinity());
  ASSERT_EQ(minus.eigenspace.size(), 1u);
  EXPECT_NEAR(minus.overlap(ground_state_analytic(ThetaAngle(ThetaAngle::physical_min()))), 1.0, 1e-12);
}
