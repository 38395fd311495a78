#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "vbsim/observables.hpp"
#include "vbsim/optics.hpp"
#include "vbsim/tomography.hpp"

using namespace vbsim;

namespace {

DensityMatrix random_density(std::mt19937_64& rng, int rank) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Matrix<Complex, 16, Eigen::Dynamic> a(16, rank);
  for (int r = 0; r < 16; ++r) {
    for (int c = 0; c < rank; ++c) a(r, c) = Complex(g(rng), g(rng));
  }
  Matrix16c m = a * a.adjoint();
  m /= m.trace();
  return DensityMatrix::from_matrix(m);
}

DensityMatrix paper_state(double theta_pi) {
  return DensityMatrix::from_pure(ground_state_analytic(ThetaAngle::from_pi_multiple(theta_pi)));
}

}  // namespace

TEST(Settings, EnumerationOrder) {
  EXPECT_EQ(MeasurementSetting::from_index(0).label(), "ZZZZ");
  EXPECT_EQ(MeasurementSetting::from_index(1).label(), "ZZZX");
  EXPECT_EQ(MeasurementSetting::from_index(27).label(), "XZZZ");
  EXPECT_EQ(MeasurementSetting::from_index(80).label(), "YYYY");
  for (int k = 0; k < kNumSettings; ++k) {
    EXPECT_EQ(MeasurementSetting::parse(MeasurementSetting::from_index(k).label()).index(), k);
  }
  EXPECT_THROW(MeasurementSetting::parse("ZZZ"), FormatError);
  EXPECT_THROW(MeasurementSetting::parse("ZZZQ"), FormatError);
  EXPECT_EQ(all_settings().size(), 81u);
}

TEST(Projectors, CompleteForEverySetting) {
  for (const auto& s : all_settings()) {
    Matrix16c sum = Matrix16c::Zero();
    for (int o = 0; o < kNumOutcomes; ++o) sum += basis_projector(s, o);
    EXPECT_LT((sum - Matrix16c::Identity()).norm(), 1e-13) << s.label();
  }
}

TEST(Projectors, SingleQubitEigenvectors) {
  const Matrix2c paulis[3] = {pauli::z(), pauli::x(), pauli::y()};
  for (int b = 0; b < 3; ++b) {
    for (int bit = 0; bit < 2; ++bit) {
      const auto v = basis_vector(static_cast<Basis>(b), bit);
      const double eig = (v.adjoint() * paulis[b] * v)(0, 0).real();
      EXPECT_NEAR(eig, bit == 0 ? 1.0 : -1.0, 1e-15);
    }
  }
  const auto r = basis_vector(Basis::Y, 0);
  EXPECT_NEAR(std::abs(r(1) - Complex(0.0, 1.0) / std::sqrt(2.0)), 0.0, 1e-15);
}

TEST(Distribution, HorizontalDimerInZ) {
  const DensityMatrix rho = DensityMatrix::from_pure(dimer_state(Pairing::Horizontal));
  const auto p = expected_distribution(rho, MeasurementSetting::parse("ZZZZ"));
  for (int o = 0; o < kNumOutcomes; ++o) {
    const bool hit = o == 0b0101 || o == 0b0110 || o == 0b1001 || o == 0b1010;
    EXPECT_NEAR(p[o], hit ? 0.25 : 0.0, 1e-15) << o;
  }
}

TEST(Sampling, DeterministicInSeed) {
  const DensityMatrix rho = paper_state(0.304);
  const auto a = sample_dataset(rho, 600.0, 7);
  const auto b = sample_dataset(rho, 600.0, 7);
  const auto c = sample_dataset(rho, 600.0, 8);
  EXPECT_TRUE(a.is_integral());
  bool differs = false;
  for (int s = 0; s < kNumSettings; ++s) {
    EXPECT_EQ(a.records()[s].counts, b.records()[s].counts);
    differs = differs || a.records()[s].counts != c.records()[s].counts;
  }
  EXPECT_TRUE(differs);
  EXPECT_NEAR(a.total_counts() / kNumSettings, 600.0, 5.0);
}

TEST(Dataset, RejectsIncompleteOrDuplicateRecords) {
  const auto base = expected_dataset(paper_state(0.25), 100.0).records();
  std::vector<CountRecord> missing(base.begin(), base.end() - 1);
  EXPECT_THROW(TomographyDataset(missing, {}), FormatError);
  std::vector<CountRecord> dup = base;
  dup[5] = dup[4];
  EXPECT_THROW(TomographyDataset(dup, {}), FormatError);
  std::vector<CountRecord> shuffled(base.rbegin(), base.rend());
  const TomographyDataset ok(shuffled, {});
  EXPECT_EQ(ok.records().front().setting.label(), "ZZZZ");
}

TEST(Mle, RecoversStateFromExpectedCounts) {
  for (double t : {0.045, 0.222, 0.304, 0.468}) {
    const PureState4 psi = ground_state_analytic(ThetaAngle::from_pi_multiple(t));
    const auto data = expected_dataset(DensityMatrix::from_pure(psi), 600.0);
    const auto r = mle_reconstruct(data);
    EXPECT_TRUE(r.converged) << t;
    EXPECT_GE(fidelity(r.rho, psi), 1.0 - 1e-6) << t;
  }
}

TEST(Mle, RecoversMixedState) {
  std::mt19937_64 rng(3);
  const DensityMatrix rho = random_density(rng, 16);
  const auto r = mle_reconstruct(expected_dataset(rho, 1000.0));
  EXPECT_TRUE(r.converged);
  EXPECT_LT((r.rho.matrix() - rho.matrix()).norm(), 1e-5);
}

TEST(Mle, LikelihoodIsMonotone) {
  MleOptions opt;
  opt.record_history = true;
  const auto data = sample_dataset(noisy_ground_state(ThetaAngle::from_pi_multiple(0.197), NoiseParams(0.1, 0.9)),
                                   600.0, 11);
  const auto r = mle_reconstruct(data, opt);
  ASSERT_GE(r.history.size(), 2u);
  for (std::size_t k = 1; k < r.history.size(); ++k) EXPECT_GE(r.history[k], r.history[k - 1] - 1e-9) << k;
  EXPECT_NEAR(r.history.back(), r.log_likelihood, 1e-9);
  EXPECT_NEAR(log_likelihood(data, r.rho), r.log_likelihood, 1e-6);
  EXPECT_GE(r.log_likelihood, log_likelihood(data, DensityMatrix::maximally_mixed()));
}

TEST(Mle, OutputIsPhysical) {
  const auto data = sample_dataset(paper_state(0.366), 600.0, 2);
  const auto r = mle_reconstruct(data);
  Eigen::SelfAdjointEigenSolver<Matrix16c> es(r.rho.matrix());
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12);
  EXPECT_NEAR(r.rho.trace(), 1.0, 1e-12);
  EXPECT_LT(hermiticity_defect(r.rho.matrix()), 1e-12);
}

TEST(Mle, MaximallyMixedFromSampledCounts) {
  const auto data = sample_dataset(DensityMatrix::maximally_mixed(), 600.0, 5);
  const double purity = mle_reconstruct(data).rho.purity();
  EXPECT_GE(purity, 1.0 / 16.0 - 1e-12);
  EXPECT_LE(purity, 1.0 / 16.0 + 0.05);
}

TEST(Mle, RejectsEmptyDataset) {
  std::vector<CountRecord> records;
  for (const auto& s : all_settings()) records.push_back({s, {}});
  EXPECT_THROW(mle_reconstruct(TomographyDataset(records, {})), DomainError);
}

TEST(LinearInversion, ExactOnExpectedCounts) {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 3; ++k) {
    const DensityMatrix rho = random_density(rng, 1 + 5 * k);
    const Operator16 est = linear_inversion(expected_dataset(rho, 500.0));
    EXPECT_LT((est - rho.matrix()).norm(), 1e-12);
  }
}

TEST(LinearInversion, UnitTraceOnSampledCounts) {
  const Operator16 est = linear_inversion(sample_dataset(paper_state(0.25), 600.0, 4));
  EXPECT_NEAR(est.trace().real(), 1.0, 1e-12);
  EXPECT_LT(hermiticity_defect(est), 1e-12);
}

TEST(MonteCarlo, TraceHasNoSpread) {
  const auto data = sample_dataset(paper_state(0.25), 600.0, 1);
  const auto s = monte_carlo_uncertainty(
      data, [](const ReconstructionResult& r) { return r.rho.trace(); }, 10, 100);
  EXPECT_EQ(s.runs, 10);
  EXPECT_EQ(s.failed_runs, 0);
  EXPECT_NEAR(s.mean, 1.0, 1e-12);
  EXPECT_LT(s.stddev, 1e-12);
}

TEST(MonteCarlo, FidelitySpreadSmallAtHighCounts) {
  const PureState4 psi = ground_state_analytic(ThetaAngle::from_pi_multiple(0.304));
  const auto data = sample_dataset(DensityMatrix::from_pure(psi), 1e6, 1);
  const auto s = monte_carlo_uncertainty(
      data, [&](const ReconstructionResult& r) { return fidelity(r.rho, psi); }, 10, 200);
  EXPECT_GT(s.stddev, 0.0);
  EXPECT_LT(s.stddev, 1e-3);
}

TEST(MonteCarlo, DeterministicInSeed) {
  const auto data = sample_dataset(paper_state(0.197), 600.0, 3);
  const PureState4 psi = ground_state_analytic(ThetaAngle::from_pi_multiple(0.197));
  const Statistic f = [&](const ReconstructionResult& r) { return fidelity(r.rho, psi); };
  const auto a = monte_carlo_uncertainty(data, f, 3, 42);
  const auto b = monte_carlo_uncertainty(data, f, 3, 42);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.stddev, b.stddev);
}

TEST(MonteCarlo, ThrowsWhenMostRunsFail) {
  const auto data = sample_dataset(paper_state(0.25), 100.0, 1);
  const Statistic bad = [](const ReconstructionResult&) -> double { throw DomainError("nope"); };
  EXPECT_ANY_THROW(monte_carlo_uncertainty(data, bad, 4, 1));
}

TEST(Format, Uncertainty) {
  EXPECT_EQ(format_uncertainty(0.8884, 0.0021), "0.888(2)");
  EXPECT_EQ(format_uncertainty(0.7456, 0.006), "0.746(6)");
  EXPECT_EQ(format_uncertainty(0.712, 0.004), "0.712(4)");
}

TEST(CorrelationTensor, CountsAgreeWithDensityMatrix) {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 20; ++k) {
    const DensityMatrix rho = random_density(rng, 1 + k % 4);
    const auto data = expected_dataset(rho, 1000.0);
    for (auto [i, j] : {std::pair{1, 2}, {1, 3}, {1, 4}, {2, 3}, {3, 4}}) {
      const CorrelationTensor t = correlation_tensor(data, i, j);
      const Tensor3 ref = correlation_tensor(partial_trace(rho, i, j));
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          ASSERT_TRUE(t[a][b].has_value());
          EXPECT_NEAR(*t[a][b], ref[a][b], 1e-10);
        }
      }
    }
  }
  EXPECT_THROW(correlation_tensor(expected_dataset(DensityMatrix(), 1.0), 2, 1), DomainError);
}

TEST(CorrelationTensor, EmptyEntriesWithoutCounts) {
  std::vector<CountRecord> records;
  for (const auto& s : all_settings()) {
    CountRecord r{s, {}};
    if (s.bases[0] == Basis::Z) r.counts[0] = 10.0;
    records.push_back(r);
  }
  const auto t = correlation_tensor(TomographyDataset(records, {}), 1, 2);
  EXPECT_FALSE(t[0][0].has_value());
  ASSERT_TRUE(t[2][2].has_value());
  EXPECT_DOUBLE_EQ(*t[2][2], 1.0);
}

TEST(Fidelity, PureStates) {
  const PureState4 a = dimer_state(Pairing::Horizontal);
  const PureState4 b = dimer_state(Pairing::Vertical);
  EXPECT_NEAR(fidelity(DensityMatrix::from_pure(a), b), 0.25, 1e-15);
  EXPECT_NEAR(fidelity(DensityMatrix::from_pure(a), a), 1.0, 1e-15);
  EXPECT_NEAR(fidelity(DensityMatrix(), a), 1.0 / 16.0, 1e-15);
}
