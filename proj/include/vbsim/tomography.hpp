#pragma once

// Four-qubit state tomography over all 81 products of the single-qubit
// bases Z = {H, V}, X = {+, -}, Y = {R, L}.
//
// Outcome encoding: a 4-bit index with the first qubit in the most
// significant bit (same layout as the state basis). Bit value 0 selects the
// first-listed vector of the basis (H, +, R), bit value 1 the second (V, -, L).
// Settings are enumerated in base 3 with qubit 1 most significant and the
// digit order Z, X, Y, so index 0 is "ZZZZ" and index 80 is "YYYY".

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vbsim/linalg.hpp"
#include "vbsim/optics.hpp"

namespace vbsim {

enum class Basis : std::uint8_t { Z = 0, X = 1, Y = 2 };

char basis_letter(Basis b);

struct MeasurementSetting {
  std::array<Basis, 4> bases{};

  /// "XYZZ"-style label; throws FormatError on anything else.
  static MeasurementSetting parse(const std::string& label);
  static MeasurementSetting from_index(int index);
  int index() const;
  std::string label() const;

  friend bool operator==(const MeasurementSetting&, const MeasurementSetting&) = default;
};

inline constexpr int kNumSettings = 81;
inline constexpr int kNumOutcomes = 16;

/// All 81 settings in index order.
const std::vector<MeasurementSetting>& all_settings();

/// Single-qubit eigenvector selected by `bit` in basis `b`.
Eigen::Matrix<Complex, 2, 1> basis_vector(Basis b, int bit);

/// Product measurement vector for (setting, outcome).
Vector16c measurement_vector(const MeasurementSetting& setting, int outcome);

/// Rank-1 projector onto measurement_vector(setting, outcome).
Operator16 basis_projector(const MeasurementSetting& setting, int outcome);

/// Born-rule outcome probabilities, clamped to [0, 1].
std::array<double, kNumOutcomes> expected_distribution(const DensityMatrix& rho,
                                                       const MeasurementSetting& setting);

struct CountRecord {
  MeasurementSetting setting;
  /// Raw counts; integers for sampled data, possibly fractional for the
  /// noiseless expected-count datasets used in regression tests.
  std::array<double, kNumOutcomes> counts{};

  double total() const;
};

struct DatasetMeta {
  std::uint64_t seed = 0;
  double mean_total = 0.0;
  std::optional<double> theta;  // radians
  NoiseParams noise;
};

class TomographyDataset {
 public:
  TomographyDataset() = default;
  /// Requires one record per setting, no duplicates; records are stored in
  /// setting-index order. Throws FormatError otherwise.
  TomographyDataset(std::vector<CountRecord> records, DatasetMeta meta);

  const std::vector<CountRecord>& records() const { return records_; }
  const CountRecord& record(const MeasurementSetting& s) const { return records_[s.index()]; }
  const DatasetMeta& meta() const { return meta_; }
  double total_counts() const;
  bool is_integral() const;

 private:
  std::vector<CountRecord> records_;
  DatasetMeta meta_;
};

/// Independent Poisson(mean_total * p_o) draws per outcome; deterministic in `seed`.
TomographyDataset sample_dataset(const DensityMatrix& rho, double mean_total, std::uint64_t seed,
                                 DatasetMeta meta = {});

/// Counts equal to mean_total * p_o exactly (non-integer).
TomographyDataset expected_dataset(const DensityMatrix& rho, double mean_total,
                                   DatasetMeta meta = {});

struct MleOptions {
  int max_iterations = 5000;
  /// Stop once the log-likelihood gain of an accepted step drops below this.
  double tolerance = 1e-10;
  bool record_history = false;
  /// Follow the fixed-point stage with accelerated projected-gradient
  /// refinement, which reaches rank-deficient optima.
  bool refine = true;
  /// Fixed-point iterations before handing over to the refinement stage.
  int fixed_point_iterations = 300;
};

struct ReconstructionResult {
  DensityMatrix rho;
  double log_likelihood = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Log-likelihood after each accepted step, when requested.
  std::vector<double> history;
};

/// Maximum-likelihood estimate via the R rho R fixed-point iteration with a
/// diluted step whenever the plain step lowers the likelihood. Throws
/// DomainError for a dataset without counts.
ReconstructionResult mle_reconstruct(const TomographyDataset& dataset, const MleOptions& options = {});

/// sum n_o log p_o(rho) over the dataset (terms with n_o = 0 skipped).
double log_likelihood(const TomographyDataset& dataset, const DensityMatrix& rho);

/// Least-squares estimate from per-setting frequencies. Hermitian with unit
/// trace, not necessarily positive. Diagnostic only.
Operator16 linear_inversion(const TomographyDataset& dataset);

/// <target|rho|target>, clamped to [0, 1].
double fidelity(const DensityMatrix& rho, const PureState4& target);

/// Statistic evaluated on each Monte Carlo reconstruction.
using Statistic = std::function<double(const ReconstructionResult&)>;

struct UncertaintySummary {
  double mean = 0.0;
  double stddev = 0.0;
  int runs = 0;
  int failed_runs = 0;
};

/// Resamples every count as Poisson(observed) with run seed `seed + run`,
/// reconstructs, and summarizes each statistic. A run whose reconstruction or
/// statistic throws is counted as failed; more than half failing throws.
std::vector<UncertaintySummary> monte_carlo_uncertainty(const TomographyDataset& dataset,
                                                        const std::vector<Statistic>& statistics,
                                                        int runs, std::uint64_t seed,
                                                        const MleOptions& options = {});

UncertaintySummary monte_carlo_uncertainty(const TomographyDataset& dataset,
                                           const Statistic& statistic, int runs = 10,
                                           std::uint64_t seed = 0, const MleOptions& options = {});

/// "0.888(2)": mean to three decimals, stddev in units of the last digit.
std::string format_uncertainty(double mean, double stddev, int decimals = 3);

/// Correlation tensor T[w][v] for w, v in (X, Y, Z), from coincidences
/// marginalized over the other two qubits and pooled over every setting with
/// bases (w, v) on the pair. Entries with no counts are empty.
using CorrelationTensor = std::array<std::array<std::optional<double>, 3>, 3>;
CorrelationTensor correlation_tensor(const TomographyDataset& dataset, int i, int j);

}  // namespace vbsim
