#include "vbsim/commands.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace vbsim::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::array<std::pair<int, int>, 3> kPairs{{{1, 2}, {1, 3}, {1, 4}}};

std::string fmt(double v) { return io::format_double(v); }

json tensor_to_json(const Tensor3& t) {
  json out = json::array();
  for (const auto& row : t) out.push_back(json(row));
  return out;
}

json tensor_to_json(const CorrelationTensor& t) {
  json out = json::array();
  for (const auto& row : t) {
    json r = json::array();
    for (const auto& v : row) {
      if (v) {
        r.push_back(*v);
      } else {
        r.push_back(nullptr);
      }
    }
    out.push_back(r);
  }
  return out;
}

json energies_to_json(const PairEnergies& e) { return {{"e12", e.e12}, {"e13", e.e13}, {"e14", e.e14}}; }

json summary_to_json(double value, const UncertaintySummary& s) {
  return {{"value", value},
          {"mc_mean", s.mean},
          {"mc_std", s.stddev},
          {"text", format_uncertainty(value, s.stddev)}};
}

json point_to_json(double value) {
  return {{"value", value}, {"mc_mean", nullptr}, {"mc_std", nullptr}, {"text", nullptr}};
}

json theta_to_json(ThetaAngle theta) { return {{"theta", theta.radians()}, {"theta_pi", theta.pi_multiple()}}; }

std::uint64_t mc_seed(std::uint64_t seed) { return seed ^ 0x9E3779B97F4A7C15ULL; }

std::string csv_header(const json& config) {
  std::ostringstream os;
  os << "# vbsim " << io::tool_version() << "\n";
  os << "# config: " << config.dump() << "\n";
  return os.str();
}

}  // namespace

void SweepSpec::validate() const {
  if (!kappas.empty()) return;
  if (steps < 2) throw DomainError("sweep: steps must be at least 2");
  if (!(theta_min >= 0.0 && theta_max <= ThetaAngle::max() + 1e-12 && theta_min <= theta_max)) {
    throw DomainError("sweep: theta range must satisfy 0 <= min <= max <= pi/2");
  }
}

std::vector<ThetaAngle> SweepSpec::thetas() const {
  validate();
  std::vector<ThetaAngle> out;
  if (!kappas.empty()) {
    for (const auto& k : kappas) out.push_back(theta_from_kappa(k));
    return out;
  }
  out.reserve(steps);
  for (int k = 0; k < steps; ++k) {
    const double t = theta_min + (theta_max - theta_min) * k / (steps - 1);
    out.emplace_back(k == steps - 1 ? theta_max : t);
  }
  return out;
}

json RunConfig::to_json() const {
  return {{"seed", seed},
          {"mean_total", mean_total},
          {"noise", io::noise_to_json(noise)},
          {"runs", runs},
          {"out", out.string()}};
}

std::vector<SweepRow> sweep_energy(const SweepSpec& spec) {
  const auto thetas = spec.thetas();
  std::vector<SweepRow> rows;
  rows.reserve(thetas.size());
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    SweepRow row;
    row.theta = thetas[k];
    if (!spec.kappas.empty()) {
      row.kappa = spec.kappas[k];
    } else if (row.theta.in_physical_range()) {
      row.kappa = kappa_from_theta(row.theta);
    }
    if (!row.kappa) {
      row.energy_closed = kNaN;
      row.energy_eigensolver = kNaN;
    } else if (!row.kappa->is_finite()) {
      row.energy_closed = -kInf;
      row.energy_eigensolver = -kInf;
    } else {
      row.energy_closed = ground_state_energy_closed(*row.kappa);
      row.energy_eigensolver = exact_ground_state(*row.kappa).energy;
    }
    row.e = pair_energies_closed(row.theta);
    row.complementarity = complementarity_sum(row.e);
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, const json& config) {
  std::ostringstream os;
  os << csv_header(config);
  os << "theta,kappa,E_closed,E_eigensolver,e12,e13,e14,complementarity_sum\n";
  for (const auto& r : rows) {
    os << fmt(r.theta.radians()) << ',' << (r.kappa ? r.kappa->to_string() : "nan") << ','
       << fmt(r.energy_closed) << ',' << fmt(r.energy_eigensolver) << ',' << fmt(r.e.e12) << ','
       << fmt(r.e.e13) << ',' << fmt(r.e.e14) << ',' << fmt(r.complementarity) << '\n';
  }
  return os.str();
}

std::vector<SweepRow> cmd_sweep_energy(const SweepSpec& spec, const RunConfig& config) {
  auto rows = sweep_energy(spec);
  json cfg = config.to_json();
  cfg["steps"] = spec.kappas.empty() ? json(spec.steps) : json(nullptr);
  cfg["theta_min"] = spec.theta_min;
  cfg["theta_max"] = spec.theta_max;
  if (!config.out.empty()) io::write_text(config.out, sweep_csv(rows, cfg));
  return rows;
}

GroundStateOutput cmd_ground_state(ThetaAngle theta, const RunConfig& config) {
  const PostselectionResult post = simulate_postselected(theta);
  GroundStateOutput out{noisy_ground_state(theta, config.noise), post.state, post.success_probability, 0.0, {}};
  out.fidelity = fidelity(out.rho, out.ideal);
  json meta = theta_to_json(theta);
  meta["noise"] = io::noise_to_json(config.noise);
  meta["tool_version"] = io::tool_version();
  out.document = io::matrix_to_json(out.rho.matrix(), meta);
  out.document["success_probability"] = out.success_probability;
  out.document["fidelity"] = out.fidelity;
  if (!config.out.empty()) io::write_json(config.out, out.document);
  return out;
}

TomographyDataset cmd_simulate_counts(ThetaAngle theta, const RunConfig& config) {
  if (!(config.mean_total > 0.0) || !std::isfinite(config.mean_total)) {
    throw DomainError("simulate-counts: mean total must be positive");
  }
  DatasetMeta meta{config.seed, config.mean_total, theta.radians(), config.noise};
  auto dataset = sample_dataset(noisy_ground_state(theta, config.noise), config.mean_total, config.seed, meta);
  if (!config.out.empty()) io::write_dataset(config.out, dataset);
  return dataset;
}

ReconstructOutput reconstruct_dataset(const TomographyDataset& dataset, const RunConfig& config,
                                      const std::string& name) {
  if (config.runs < 0) throw DomainError("reconstruct: runs must be nonnegative");
  ReconstructOutput out;
  out.name = name;
  out.result = mle_reconstruct(dataset);
  if (dataset.meta().theta) out.ideal = ground_state_analytic(ThetaAngle(*dataset.meta().theta));

  const PairEnergies e = pair_energies(out.result.rho);
  const double f = out.ideal ? fidelity(out.result.rho, *out.ideal) : kNaN;

  json report = {{"name", name},
                 {"log_likelihood", out.result.log_likelihood},
                 {"iterations", out.result.iterations},
                 {"converged", out.result.converged},
                 {"complementarity_sum", complementarity_sum(e)},
                 {"runs", config.runs}};
  json dmeta = io::dataset_to_json(dataset)["meta"];
  report["dataset"] = dmeta;

  std::vector<Statistic> stats;
  for (int k = 0; k < 3; ++k) {
    stats.push_back([k](const ReconstructionResult& r) { return pair_energies(r.rho).as_array()[k]; });
  }
  if (out.ideal) {
    const PureState4 target = *out.ideal;
    stats.push_back([target](const ReconstructionResult& r) { return fidelity(r.rho, target); });
  }

  const auto values = e.as_array();
  json energies = json::object();
  if (config.runs > 0) {
    const std::uint64_t seed = mc_seed(config.seed);
    const auto summaries = monte_carlo_uncertainty(dataset, stats, config.runs, seed);
    for (int k = 0; k < 3; ++k) {
      energies["e1" + std::to_string(k + 2)] = summary_to_json(values[k], summaries[k]);
    }
    report["fidelity"] = out.ideal ? summary_to_json(f, summaries[3]) : json(nullptr);
    report["failed_runs"] = summaries.front().failed_runs;
    report["mc_seed"] = seed;
  } else {
    for (int k = 0; k < 3; ++k) energies["e1" + std::to_string(k + 2)] = point_to_json(values[k]);
    report["fidelity"] = out.ideal ? point_to_json(f) : json(nullptr);
    report["failed_runs"] = 0;
    report["mc_seed"] = nullptr;
  }
  report["pair_energies"] = energies;
  out.report = report;

  json meta = dmeta;
  meta["log_likelihood"] = out.result.log_likelihood;
  meta["converged"] = out.result.converged;
  out.density = io::matrix_to_json(out.result.rho.matrix(), meta);
  if (out.ideal) {
    const json ideal = io::matrix_to_json(DensityMatrix::from_pure(*out.ideal).matrix());
    out.density["ideal"] = {{"re", ideal["re"]}, {"im", ideal["im"]}};
  }
  return out;
}

std::vector<ReconstructOutput> cmd_reconstruct(const std::vector<std::filesystem::path>& datasets,
                                               const RunConfig& config) {
  std::vector<ReconstructOutput> outputs;
  for (const auto& path : datasets) {
    const TomographyDataset dataset = io::read_dataset(path);
    outputs.push_back(reconstruct_dataset(dataset, config, path.stem().string()));
    const auto& o = outputs.back();
    if (!config.out.empty()) {
      io::write_json(config.out / ("dm_" + o.name + ".json"), o.density);
      io::write_json(config.out / ("report_" + o.name + ".json"), o.report);
    }
  }
  return outputs;
}

json analyze_state(const DensityMatrix& rho, CouplingRatio kappa) {
  const PairEnergies e = pair_energies(rho);
  const auto conc = pair_concurrences(rho);
  const auto values = e.as_array();
  json energy_conc = json::object();
  json wootters = json::object();
  json tensors = json::object();
  for (int k = 0; k < 3; ++k) {
    const auto [i, j] = kPairs[k];
    const std::string key = std::to_string(i) + std::to_string(j);
    energy_conc["C" + key] = concurrence_from_energy(values[k]);
    wootters["C" + key] = conc[k];
    tensors[key] = tensor_to_json(correlation_tensor(partial_trace(rho, i, j)));
  }
  json out = {{"kappa", kappa.to_string()},
              {"pair_energies", energies_to_json(e)},
              {"concurrence_from_energy", energy_conc},
              {"concurrence_wootters", wootters},
              {"complementarity_sum", complementarity_sum(e)},
              {"monogamy_sum", monogamy_sum(conc)},
              {"tensor_axes", {"X", "Y", "Z"}},
              {"tensors", tensors},
              {"tool_version", io::tool_version()}};
  out["total_energy"] = kappa.is_finite() ? json(total_energy(rho, kappa)) : json(nullptr);
  return out;
}

json cmd_analyze(const std::filesystem::path& density_path, CouplingRatio kappa, const RunConfig& config) {
  DensityMatrix rho;
  try {
    rho = io::density_from_json(io::read_json(density_path));
  } catch (const FormatError& e) {
    throw FormatError(density_path.string() + ": " + e.what());
  }
  json out = analyze_state(rho, kappa);
  out["input"] = density_path.string();
  if (!config.out.empty()) io::write_json(config.out, out);
  return out;
}

std::string theta_label(ThetaAngle theta) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << theta.pi_multiple();
  return os.str();
}

std::vector<PairEnergies> renormalize_by_max(const std::vector<PairEnergies>& series) {
  std::array<double, 3> peak{0.0, 0.0, 0.0};
  for (const auto& e : series) {
    const auto v = e.as_array();
    for (int k = 0; k < 3; ++k) peak[k] = std::max(peak[k], v[k]);
  }
  std::vector<PairEnergies> out;
  out.reserve(series.size());
  for (const auto& e : series) {
    const auto v = e.as_array();
    std::array<double, 3> r{};
    for (int k = 0; k < 3; ++k) r[k] = peak[k] > 0.0 ? v[k] / peak[k] : v[k];
    out.push_back({r[0], r[1], r[2]});
  }
  return out;
}

json cmd_report_figures(const BundleSpec& spec, const RunConfig& config) {
  if (config.out.empty()) throw IoError("report-figures: an output directory is required");
  if (spec.thetas_pi.empty()) throw DomainError("report-figures: no theta values");
  const std::filesystem::path dir = config.out;
  json cfg = config.to_json();
  cfg["sweep_steps"] = spec.sweep_steps;
  cfg["thetas_pi"] = spec.thetas_pi;
  json files = json::array();

  SweepSpec physical;
  physical.steps = spec.sweep_steps;
  io::write_text(dir / "energy_curve.csv", sweep_csv(sweep_energy(physical), cfg));
  files.push_back("energy_curve.csv");

  SweepSpec full;
  full.theta_min = 0.0;
  full.steps = spec.sweep_steps;
  const auto theory = sweep_energy(full);

  std::vector<ThetaAngle> thetas;
  std::vector<PairEnergies> measured;
  std::vector<ReconstructOutput> recon;
  json states = json::array();
  std::ostringstream energy_rows;
  for (std::size_t k = 0; k < spec.thetas_pi.size(); ++k) {
    const ThetaAngle theta = ThetaAngle::from_pi_multiple(spec.thetas_pi[k]);
    RunConfig local = config;
    local.seed = config.seed + k;
    local.out.clear();
    const TomographyDataset dataset = cmd_simulate_counts(theta, local);
    const std::string label = theta_label(theta);
    ReconstructOutput r = reconstruct_dataset(dataset, local, label);

    io::write_dataset(dir / ("counts_" + label + ".json"), dataset);
    io::write_json(dir / ("dm_" + label + ".json"), r.density);
    io::write_json(dir / ("report_" + label + ".json"), r.report);

    json tensors = json::object();
    const DensityMatrix ideal = DensityMatrix::from_pure(*r.ideal);
    for (const auto& [i, j] : kPairs) {
      const std::string key = std::to_string(i) + std::to_string(j);
      tensors[key] = {{"measured", tensor_to_json(correlation_tensor(dataset, i, j))},
                      {"reconstructed", tensor_to_json(correlation_tensor(partial_trace(r.result.rho, i, j)))},
                      {"ideal", tensor_to_json(correlation_tensor(partial_trace(ideal, i, j)))}};
    }
    json tdoc = theta_to_json(theta);
    tdoc["axes"] = {"X", "Y", "Z"};
    tdoc["pairs"] = tensors;
    io::write_json(dir / ("tensors_" + label + ".json"), tdoc);
    for (const char* prefix : {"counts_", "dm_", "report_", "tensors_"}) {
      files.push_back(std::string(prefix) + label + ".json");
    }

    if (theta.in_physical_range()) {
      const CouplingRatio kappa = kappa_from_theta(theta);
      if (kappa.is_finite()) {
        energy_rows << fmt(theta.radians()) << ',' << fmt(theta.pi_multiple()) << ',' << kappa.to_string() << ','
                    << fmt(total_energy(r.result.rho, kappa)) << ',' << fmt(ground_state_energy_closed(kappa))
                    << '\n';
      }
    }

    json s = theta_to_json(theta);
    s["label"] = label;
    s["fidelity"] = r.report["fidelity"];
    s["converged"] = r.result.converged;
    s["iterations"] = r.result.iterations;
    states.push_back(s);

    thetas.push_back(theta);
    measured.push_back(pair_energies(r.result.rho));
    recon.push_back(std::move(r));
  }

  std::ostringstream em;
  em << csv_header(cfg) << "theta,theta_pi,kappa,E_measured,E_theory\n" << energy_rows.str();
  io::write_text(dir / "energy_measured.csv", em.str());
  files.push_back("energy_measured.csv");

  const auto normalized = renormalize_by_max(measured);
  std::array<double, 3> peak{0.0, 0.0, 0.0};
  for (const auto& e : measured) {
    for (int k = 0; k < 3; ++k) peak[k] = std::max(peak[k], e.as_array()[k]);
  }
  std::ostringstream pe;
  std::ostringstream cs;
  pe << csv_header(cfg) << "# e_max: e12=" << fmt(peak[0]) << " e13=" << fmt(peak[1]) << " e14=" << fmt(peak[2])
     << "\n"
     << "kind,theta,theta_pi,e12,e13,e14\n";
  cs << csv_header(cfg) << "kind,theta,theta_pi,complementarity_sum\n";
  auto emit = [&](const char* kind, ThetaAngle t, const PairEnergies& e) {
    pe << kind << ',' << fmt(t.radians()) << ',' << fmt(t.pi_multiple()) << ',' << fmt(e.e12) << ','
       << fmt(e.e13) << ',' << fmt(e.e14) << '\n';
    cs << kind << ',' << fmt(t.radians()) << ',' << fmt(t.pi_multiple()) << ',' << fmt(complementarity_sum(e))
       << '\n';
  };
  for (const auto& row : theory) emit("theory", row.theta, row.e);
  for (std::size_t k = 0; k < thetas.size(); ++k) emit("measured", thetas[k], measured[k]);
  for (std::size_t k = 0; k < thetas.size(); ++k) emit("measured_renormalized", thetas[k], normalized[k]);
  io::write_text(dir / "pair_energies.csv", pe.str());
  io::write_text(dir / "complementarity.csv", cs.str());
  files.push_back("pair_energies.csv");
  files.push_back("complementarity.csv");

  json manifest = {{"tool_version", io::tool_version()},
                   {"config", cfg},
                   {"e_max", {{"e12", peak[0]}, {"e13", peak[1]}, {"e14", peak[2]}}},
                   {"states", states},
                   {"files", files}};
  io::write_json(dir / "bundle.json", manifest);
  return manifest;
}

}  // namespace vbsim::cli
