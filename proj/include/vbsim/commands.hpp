#pragma once

// Subcommand implementations behind the `vbsim` tool. Each command writes
// its files and also returns what it wrote, so tests can drive them without
// a subprocess.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vbsim/io.hpp"
#include "vbsim/observables.hpp"
#include "vbsim/optics.hpp"
#include "vbsim/spin_model.hpp"
#include "vbsim/tomography.hpp"

namespace vbsim::cli {

using io::json;

enum class ExitCode : int {
  Ok = 0,
  Usage = 1,
  Domain = 2,
  Io = 3,
  NonConvergence = 4,
  Format = 5,
};

/// The eight coupler settings reconstructed in the experiment, in units of pi.
inline constexpr std::array<double, 8> kTomographyThetasPi{0.045, 0.197, 0.222, 0.25,
                                                      0.304, 0.366, 0.455, 0.468};

/// 200 s per setting at a 3 Hz fourfold-coincidence rate.
inline constexpr double kDefaultMeanTotal = 200.0 * 3.0;

struct SweepSpec {
  double theta_min = ThetaAngle::physical_min();
  double theta_max = ThetaAngle::max();
  int steps = 101;
  /// When non-empty, rows are generated from these ratios instead of the grid.
  std::vector<CouplingRatio> kappas;

  /// Throws DomainError for steps < 2 or a range outside [0, pi/2].
  void validate() const;
  std::vector<ThetaAngle> thetas() const;
};

struct RunConfig {
  std::uint64_t seed = 1;
  double mean_total = kDefaultMeanTotal;
  NoiseParams noise;
  int runs = 10;
  std::filesystem::path out;

  json to_json() const;
};

struct SweepRow {
  ThetaAngle theta;
  /// Empty below arctan(1/sqrt 2), where no coupling ratio maps.
  std::optional<CouplingRatio> kappa;
  double energy_closed = 0.0;
  double energy_eigensolver = 0.0;
  PairEnergies e;
  double complementarity = 0.0;
};

std::vector<SweepRow> sweep_energy(const SweepSpec& spec);

/// Columns: theta, kappa, E_closed, E_eigensolver, e12, e13, e14,
/// complementarity_sum. Leading '#' lines carry the tool version and config.
std::string sweep_csv(const std::vector<SweepRow>& rows, const json& config);

/// Writes sweep_csv to config.out and returns the rows.
std::vector<SweepRow> cmd_sweep_energy(const SweepSpec& spec, const RunConfig& config);

struct GroundStateOutput {
  DensityMatrix rho;
  PureState4 ideal;
  double success_probability = 0.0;
  double fidelity = 0.0;
  json document;
};

/// Ideal or noise-degraded state at theta; written to config.out when set.
GroundStateOutput cmd_ground_state(ThetaAngle theta, const RunConfig& config);

/// Samples an 81-setting dataset from the (noisy) state at theta.
TomographyDataset cmd_simulate_counts(ThetaAngle theta, const RunConfig& config);

struct ReconstructOutput {
  std::string name;
  ReconstructionResult result;
  std::optional<PureState4> ideal;
  json density;
  json report;
};

/// MLE, fidelity against the dataset's ideal state, and Monte Carlo
/// uncertainties on fidelity and pair energies (skipped when runs == 0).
ReconstructOutput reconstruct_dataset(const TomographyDataset& dataset, const RunConfig& config,
                                      const std::string& name);

/// Reconstructs every dataset; writes dm_<name>.json and report_<name>.json
/// into config.out (a directory) when set.
std::vector<ReconstructOutput> cmd_reconstruct(const std::vector<std::filesystem::path>& datasets,
                                               const RunConfig& config);

/// Energies, concurrences, complementarity, monogamy, total energy (null for
/// an infinite ratio) and the three correlation tensors of `rho`.
json analyze_state(const DensityMatrix& rho, CouplingRatio kappa);

json cmd_analyze(const std::filesystem::path& density_path, CouplingRatio kappa, const RunConfig& config);

struct BundleSpec {
  std::vector<double> thetas_pi{kTomographyThetasPi.begin(), kTomographyThetasPi.end()};
  int sweep_steps = 201;
};

/// End-to-end simulate -> reconstruct -> analyze for every theta, plus the
/// theory curves. Writes the figure bundle into config.out and returns its
/// manifest.
json cmd_report_figures(const BundleSpec& spec, const RunConfig& config);

/// "0.304" style label used in bundle file names.
std::string theta_label(ThetaAngle theta);

/// Divides each pair's series by its maximum over the series.
std::vector<PairEnergies> renormalize_by_max(const std::vector<PairEnergies>& series);

}  // namespace vbsim::cli
