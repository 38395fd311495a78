#include <cstdlib>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vbsim/commands.hpp"

using namespace vbsim;
using namespace vbsim::cli;

namespace {

struct NoiseFlags {
  double p = 0.0;
  double visibility = 1.0;
};

void add_noise(CLI::App* cmd, NoiseFlags& flags) {
  cmd->add_option("--noise-p", flags.p, "white-noise weight p in [0, 1]")->capture_default_str();
  cmd->add_option("--visibility", flags.visibility, "two-photon visibility V in [0, 1]")->capture_default_str();
}

void add_seed(CLI::App* cmd, std::uint64_t& seed) {
  cmd->add_option("--seed", seed, "RNG seed")->envname("VBSIM_SEED")->capture_default_str();
}

bool all_converged(const std::vector<ReconstructOutput>& outputs) {
  for (const auto& o : outputs) {
    if (!o.result.converged) {
      std::cerr << "vbsim: reconstruction of '" << o.name << "' did not converge after " << o.result.iterations
                << " iterations\n";
      return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator for the photonic J1-J2 tetramer quantum simulation"};
  app.set_version_flag("--version", io::tool_version());
  app.require_subcommand(1);

  RunConfig config;
  NoiseFlags noise;
  double theta_pi = 0.25;
  std::string kappa_text = "1";
  std::string out;
  std::vector<std::string> kappa_list;
  std::vector<std::string> inputs;
  SweepSpec sweep;
  double theta_min_pi = ThetaAngle::physical_min() / std::numbers::pi;
  double theta_max_pi = 0.5;
  BundleSpec bundle;

  auto* sweep_cmd = app.add_subcommand("sweep-energy", "ground-state energy and pair energies along theta");
  sweep_cmd->add_option("--theta-min-pi", theta_min_pi, "lower end of the grid, in units of pi");
  sweep_cmd->add_option("--theta-max-pi", theta_max_pi, "upper end of the grid, in units of pi");
  sweep_cmd->add_option("--steps", sweep.steps, "grid points")->capture_default_str();
  sweep_cmd->add_option("--kappa", kappa_list, "explicit coupling ratios (+inf, -inf allowed)");
  sweep_cmd->add_option("--out", out, "CSV output path")->required();

  auto* gs_cmd = app.add_subcommand("ground-state", "post-selected (noisy) state at theta");
  gs_cmd->add_option("--theta-pi", theta_pi, "coupler angle in units of pi")->required();
  add_noise(gs_cmd, noise);
  gs_cmd->add_option("--out", out, "density-matrix JSON output path")->required();

  auto* sim_cmd = app.add_subcommand("simulate-counts", "sample an 81-setting tomography dataset");
  sim_cmd->add_option("--theta-pi", theta_pi, "coupler angle in units of pi")->required();
  add_seed(sim_cmd, config.seed);
  sim_cmd->add_option("--mean-total", config.mean_total, "mean coincidences per setting")->capture_default_str();
  add_noise(sim_cmd, noise);
  sim_cmd->add_option("--out", out, "dataset JSON output path")->required();

  auto* rec_cmd = app.add_subcommand("reconstruct", "maximum-likelihood reconstruction with Monte Carlo errors");
  rec_cmd->add_option("datasets", inputs, "dataset JSON files")->required();
  rec_cmd->add_option("--runs", config.runs, "Monte Carlo resamples (0 disables)")->capture_default_str();
  add_seed(rec_cmd, config.seed);
  rec_cmd->add_option("--out", out, "output directory")->required();

  auto* an_cmd = app.add_subcommand("analyze", "observables of a density matrix");
  an_cmd->add_option("density", inputs, "density-matrix JSON file")->required()->expected(1);
  an_cmd->add_option("--kappa", kappa_text, "coupling ratio for the total energy")->capture_default_str();
  an_cmd->add_option("--out", out, "JSON output path")->required();

  auto* fig_cmd = app.add_subcommand("report-figures", "simulate, reconstruct and analyze the figure bundle");
  fig_cmd->add_option("--theta-pi", bundle.thetas_pi, "coupler angles in units of pi");
  fig_cmd->add_option("--steps", bundle.sweep_steps, "theory curve grid points")->capture_default_str();
  add_seed(fig_cmd, config.seed);
  fig_cmd->add_option("--mean-total", config.mean_total, "mean coincidences per setting")->capture_default_str();
  fig_cmd->add_option("--runs", config.runs, "Monte Carlo resamples (0 disables)")->capture_default_str();
  add_noise(fig_cmd, noise);
  fig_cmd->add_option("--out", out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ExitCode::Usage);
  }

  try {
    config.noise = NoiseParams(noise.p, noise.visibility);
    config.out = out;
    if (sweep_cmd->parsed()) {
      for (const auto& k : kappa_list) sweep.kappas.push_back(CouplingRatio::parse(k));
      sweep.theta_min = theta_min_pi * std::numbers::pi;
      sweep.theta_max = theta_max_pi == 0.5 ? ThetaAngle::max() : theta_max_pi * std::numbers::pi;
      cmd_sweep_energy(sweep, config);
    } else if (gs_cmd->parsed()) {
      const auto r = cmd_ground_state(ThetaAngle::from_pi_multiple(theta_pi), config);
      std::cout << "fidelity " << r.fidelity << " success_probability " << r.success_probability << "\n";
    } else if (sim_cmd->parsed()) {
      cmd_simulate_counts(ThetaAngle::from_pi_multiple(theta_pi), config);
    } else if (rec_cmd->parsed()) {
      std::vector<std::filesystem::path> paths(inputs.begin(), inputs.end());
      const auto outputs = cmd_reconstruct(paths, config);
      for (const auto& o : outputs) {
        const json& f = o.report["fidelity"];
        std::cout << o.name << ": fidelity "
                  << (f.is_null() ? std::string("n/a")
                                  : f["text"].is_null() ? io::format_double(f["value"].get<double>())
                                                        : f["text"].get<std::string>())
                  << "\n";
      }
      if (!all_converged(outputs)) return static_cast<int>(ExitCode::NonConvergence);
    } else if (an_cmd->parsed()) {
      cmd_analyze(inputs.front(), CouplingRatio::parse(kappa_text), config);
    } else if (fig_cmd->parsed()) {
      const json manifest = cmd_report_figures(bundle, config);
      bool ok = true;
      for (const auto& s : manifest["states"]) ok = ok && s["converged"].get<bool>();
      if (!ok) {
        std::cerr << "vbsim: at least one reconstruction did not converge\n";
        return static_cast<int>(ExitCode::NonConvergence);
      }
    }
  } catch (const DomainError& e) {
    std::cerr << "vbsim: " << e.what() << "\n";
    return static_cast<int>(ExitCode::Domain);
  } catch (const IoError& e) {
    std::cerr << "vbsim: " << e.what() << "\n";
    return static_cast<int>(ExitCode::Io);
  } catch (const FormatError& e) {
    std::cerr << "vbsim: " << e.what() << "\n";
    return static_cast<int>(ExitCode::Format);
  } catch (const std::exception& e) {
    std::cerr << "vbsim: " << e.what() << "\n";
    return static_cast<int>(ExitCode::Domain);
  }
  return static_cast<int>(ExitCode::Ok);
}
