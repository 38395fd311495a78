#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <limits>

#include "vbsim/io.hpp"
#include "vbsim/observables.hpp"
#include "vbsim/optics.hpp"
#include "vbsim/spin_model.hpp"
#include "vbsim/tomography.hpp"

namespace py = pybind11;
using namespace vbsim;

namespace {

using CountsArray = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

CouplingRatio to_ratio(double kappa) {
  if (std::isinf(kappa)) return kappa > 0 ? CouplingRatio::plus_infinity() : CouplingRatio::minus_infinity();
  return CouplingRatio(kappa);
}

double from_ratio(CouplingRatio k) {
  if (k.is_finite()) return k.value();
  const double inf = std::numeric_limits<double>::infinity();
  return k.kind() == CouplingRatio::Kind::PlusInfinity ? inf : -inf;
}

DensityMatrix to_density(const Matrix16c& m) { return DensityMatrix::from_matrix(m, 1e-9); }

TomographyDataset to_dataset(const CountsArray& counts) {
  if (counts.rows() != kNumSettings || counts.cols() != kNumOutcomes) {
    throw py::value_error("counts must have shape (81, 16)");
  }
  std::vector<CountRecord> records;
  for (int s = 0; s < kNumSettings; ++s) {
    CountRecord r;
    r.setting = MeasurementSetting::from_index(s);
    for (int o = 0; o < kNumOutcomes; ++o) r.counts[o] = counts(s, o);
    records.push_back(r);
  }
  return TomographyDataset(std::move(records), {});
}

CountsArray from_dataset(const TomographyDataset& d) {
  CountsArray out(kNumSettings, kNumOutcomes);
  for (int s = 0; s < kNumSettings; ++s) {
    for (int o = 0; o < kNumOutcomes; ++o) out(s, o) = d.records()[s].counts[o];
  }
  return out;
}

std::array<double, 3> energies(const PairEnergies& e) { return e.as_array(); }

}  // namespace

PYBIND11_MODULE(_vbsim, m) {
  m.doc() = "Numerical model of the photonic J1-J2 tetramer simulation.";
  m.attr("__version__") = io::tool_version();

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def("theta_from_kappa", [](double k) { return theta_from_kappa(to_ratio(k)).radians(); }, py::arg("kappa"),
        "Coupler angle (radians) for J2/J1; accepts +/-inf.");
  m.def("kappa_from_theta", [](double t) { return from_ratio(kappa_from_theta(ThetaAngle(t))); },
        py::arg("theta"));
  m.def("ground_state_energy", [](double k) { return ground_state_energy_closed(CouplingRatio(k)); },
        py::arg("kappa"));
  m.def("exact_ground_energy", [](double k) { return exact_ground_state(CouplingRatio(k)).energy; },
        py::arg("kappa"), "Lowest eigenvalue of the 16x16 Hamiltonian.");
  m.def("hamiltonian", [](double k) { return Matrix16c(build_hamiltonian(CouplingRatio(k))); }, py::arg("kappa"));
  m.def("ground_state", [](double t) { return Vector16c(ground_state_analytic(ThetaAngle(t)).amplitudes()); },
        py::arg("theta"));
  m.def("postselected_state",
        [](double t) {
          const auto r = simulate_postselected(ThetaAngle(t));
          return py::make_tuple(Vector16c(r.state.amplitudes()), r.success_probability);
        },
        py::arg("theta"), "Post-selected four-photon state and its success probability.");
  m.def("noisy_density_matrix",
        [](double t, double p, double v) {
          return Matrix16c(noisy_ground_state(ThetaAngle(t), NoiseParams(p, v)).matrix());
        },
        py::arg("theta"), py::arg("p") = 0.0, py::arg("visibility") = 1.0);

  m.def("pair_energies", [](const Matrix16c& rho) { return energies(pair_energies(to_density(rho))); },
        py::arg("rho"));
  m.def("pair_energies_closed", [](double t) { return energies(pair_energies_closed(ThetaAngle(t))); },
        py::arg("theta"));
  m.def("pair_concurrences", [](const Matrix16c& rho) { return pair_concurrences(to_density(rho)); },
        py::arg("rho"));
  m.def("concurrence_from_energy", &concurrence_from_energy, py::arg("e"));
  m.def("total_energy", [](const Matrix16c& rho, double k) { return total_energy(to_density(rho), CouplingRatio(k)); },
        py::arg("rho"), py::arg("kappa"));
  m.def("correlation_tensor",
        [](const Matrix16c& rho, int i, int j) { return correlation_tensor(partial_trace(to_density(rho), i, j)); },
        py::arg("rho"), py::arg("i"), py::arg("j"));
  m.def("fidelity",
        [](const Matrix16c& rho, const Vector16c& psi) {
          return fidelity(to_density(rho), PureState4::normalized(psi));
        },
        py::arg("rho"), py::arg("psi"));

  m.def("setting_labels", [] {
    std::vector<std::string> out;
    for (const auto& s : all_settings()) out.push_back(s.label());
    return out;
  });
  m.def("simulate_counts",
        [](const Matrix16c& rho, double mean_total, std::uint64_t seed) {
          return from_dataset(sample_dataset(to_density(rho), mean_total, seed));
        },
        py::arg("rho"), py::arg("mean_total") = 600.0, py::arg("seed") = 1,
        "Poisson counts, shape (81, 16), rows in setting_labels() order.");
  m.def("expected_counts",
        [](const Matrix16c& rho, double mean_total) {
          return from_dataset(expected_dataset(to_density(rho), mean_total));
        },
        py::arg("rho"), py::arg("mean_total") = 600.0);
  m.def("reconstruct",
        [](const CountsArray& counts, int max_iterations) {
          MleOptions opt;
          opt.max_iterations = max_iterations;
          const auto r = mle_reconstruct(to_dataset(counts), opt);
          py::dict out;
          out["rho"] = Matrix16c(r.rho.matrix());
          out["log_likelihood"] = r.log_likelihood;
          out["iterations"] = r.iterations;
          out["converged"] = r.converged;
          return out;
        },
        py::arg("counts"), py::arg("max_iterations") = 5000, "Maximum-likelihood density matrix.");
  m.def("format_uncertainty", &format_uncertainty, py::arg("mean"), py::arg("stddev"), py::arg("decimals") = 3);
}
