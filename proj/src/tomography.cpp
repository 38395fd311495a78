#include "vbsim/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>

namespace vbsim {

char basis_letter(Basis b) {
  switch (b) {
    case Basis::Z:
      return 'Z';
    case Basis::X:
      return 'X';
    case Basis::Y:
      return 'Y';
  }
  return '?';
}

MeasurementSetting MeasurementSetting::parse(const std::string& label) {
  if (label.size() != 4) {
    throw FormatError("measurement setting '" + label + "' must have exactly four letters");
  }
  MeasurementSetting s;
  for (int q = 0; q < 4; ++q) {
    switch (label[q]) {
      case 'Z':
        s.bases[q] = Basis::Z;
        break;
      case 'X':
        s.bases[q] = Basis::X;
        break;
      case 'Y':
        s.bases[q] = Basis::Y;
        break;
      default:
        throw FormatError("measurement setting '" + label + "' uses a letter other than X, Y, Z");
    }
  }
  return s;
}

MeasurementSetting MeasurementSetting::from_index(int index) {
  if (index < 0 || index >= kNumSettings) {
    throw DomainError("measurement setting index out of range");
  }
  MeasurementSetting s;
  for (int q = 3; q >= 0; --q) {
    s.bases[q] = static_cast<Basis>(index % 3);
    index /= 3;
  }
  return s;
}

int MeasurementSetting::index() const {
  int index = 0;
  for (auto b : bases) index = 3 * index + static_cast<int>(b);
  return index;
}

std::string MeasurementSetting::label() const {
  std::string out(4, ' ');
  for (int q = 0; q < 4; ++q) out[q] = basis_letter(bases[q]);
  return out;
}

const std::vector<MeasurementSetting>& all_settings() {
  static const std::vector<MeasurementSetting> settings = [] {
    std::vector<MeasurementSetting> v;
    v.reserve(kNumSettings);
    for (int k = 0; k < kNumSettings; ++k) v.push_back(MeasurementSetting::from_index(k));
    return v;
  }();
  return settings;
}

Eigen::Matrix<Complex, 2, 1> basis_vector(Basis b, int bit) {
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix<Complex, 2, 1> v;
  switch (b) {
    case Basis::Z:
      v << (bit == 0 ? 1.0 : 0.0), (bit == 0 ? 0.0 : 1.0);
      break;
    case Basis::X:
      v << r, (bit == 0 ? r : -r);
      break;
    case Basis::Y:
      v << r, (bit == 0 ? Complex(0, r) : Complex(0, -r));
      break;
  }
  return v;
}

Vector16c measurement_vector(const MeasurementSetting& setting, int outcome) {
  if (outcome < 0 || outcome >= kNumOutcomes) {
    throw DomainError("measurement outcome must be in 0..15");
  }
  std::array<Eigen::Matrix<Complex, 2, 1>, 4> local;
  for (int q = 1; q <= 4; ++q) local[q - 1] = basis_vector(setting.bases[q - 1], qubit_bit(outcome, q));
  Vector16c v;
  for (int index = 0; index < kDim; ++index) {
    Complex a = 1.0;
    for (int q = 1; q <= 4; ++q) a *= local[q - 1](qubit_bit(index, q));
    v(index) = a;
  }
  return v;
}

Operator16 basis_projector(const MeasurementSetting& setting, int outcome) {
  const Vector16c v = measurement_vector(setting, outcome);
  return v * v.adjoint();
}

std::array<double, kNumOutcomes> expected_distribution(const DensityMatrix& rho,
                                                       const MeasurementSetting& setting) {
  std::array<double, kNumOutcomes> p{};
  for (int o = 0; o < kNumOutcomes; ++o) {
    const Vector16c v = measurement_vector(setting, o);
    p[o] = std::clamp(v.dot(rho.matrix() * v).real(), 0.0, 1.0);
  }
  return p;
}

double CountRecord::total() const { return std::accumulate(counts.begin(), counts.end(), 0.0); }

TomographyDataset::TomographyDataset(std::vector<CountRecord> records, DatasetMeta meta)
    : meta_(std::move(meta)) {
  if (records.size() != kNumSettings) {
    std::ostringstream msg;
    msg << "dataset has " << records.size() << " records; expected " << kNumSettings;
    throw FormatError(msg.str());
  }
  std::vector<bool> seen(kNumSettings, false);
  records_.resize(kNumSettings);
  for (auto& r : records) {
    const int k = r.setting.index();
    if (seen[k]) throw FormatError("dataset repeats setting " + r.setting.label());
    for (double c : r.counts) {
      if (!(c >= 0.0) || !std::isfinite(c)) {
        throw FormatError("dataset record " + r.setting.label() + " has a negative or non-finite count");
      }
    }
    seen[k] = true;
    records_[k] = std::move(r);
  }
}

double TomographyDataset::total_counts() const {
  double t = 0.0;
  for (const auto& r : records_) t += r.total();
  return t;
}

bool TomographyDataset::is_integral() const {
  for (const auto& r : records_) {
    for (double c : r.counts) {
      if (c != std::floor(c)) return false;
    }
  }
  return true;
}

namespace {

long long draw_poisson(std::mt19937_64& rng, double mean) {
  if (!(mean > 0.0)) return 0;
  std::poisson_distribution<long long> dist(mean);
  return dist(rng);
}

}  // namespace

TomographyDataset sample_dataset(const DensityMatrix& rho, double mean_total, std::uint64_t seed,
                                 DatasetMeta meta) {
  if (!(mean_total > 0.0) || !std::isfinite(mean_total)) {
    throw DomainError("sample_dataset: mean_total must be positive");
  }
  std::mt19937_64 rng(seed);
  std::vector<CountRecord> records;
  records.reserve(kNumSettings);
  for (const auto& s : all_settings()) {
    const auto p = expected_distribution(rho, s);
    CountRecord r{s, {}};
    for (int o = 0; o < kNumOutcomes; ++o) r.counts[o] = static_cast<double>(draw_poisson(rng, mean_total * p[o]));
    records.push_back(r);
  }
  meta.seed = seed;
  meta.mean_total = mean_total;
  return TomographyDataset(std::move(records), std::move(meta));
}

namespace {
constexpr double kRoundingFloor = 1e-15;
}  // namespace

TomographyDataset expected_dataset(const DensityMatrix& rho, double mean_total, DatasetMeta meta) {
  if (!(mean_total > 0.0) || !std::isfinite(mean_total)) {
    throw DomainError("expected_dataset: mean_total must be positive");
  }
  std::vector<CountRecord> records;
  records.reserve(kNumSettings);
  for (const auto& s : all_settings()) {
    const auto p = expected_distribution(rho, s);
    CountRecord r{s, {}};
    // Probabilities at rounding level are exact zeros of the Born rule.
    for (int o = 0; o < kNumOutcomes; ++o) r.counts[o] = p[o] < kRoundingFloor ? 0.0 : mean_total * p[o];
    records.push_back(r);
  }
  meta.mean_total = mean_total;
  return TomographyDataset(std::move(records), std::move(meta));
}

namespace {

using FrameMatrix = Eigen::Matrix<Complex, kDim, Eigen::Dynamic>;

// Measurement vectors and counts of the outcomes that were actually observed.
struct ObservedFrame {
  FrameMatrix vectors;
  Eigen::VectorXd counts;
  double total = 0.0;
};

const FrameMatrix& full_frame() {
  static const FrameMatrix frame = [] {
    FrameMatrix f(kDim, kNumSettings * kNumOutcomes);
    for (const auto& s : all_settings()) {
      for (int o = 0; o < kNumOutcomes; ++o) f.col(s.index() * kNumOutcomes + o) = measurement_vector(s, o);
    }
    return f;
  }();
  return frame;
}

ObservedFrame observed_frame(const TomographyDataset& dataset) {
  std::vector<int> cols;
  std::vector<double> counts;
  for (const auto& r : dataset.records()) {
    for (int o = 0; o < kNumOutcomes; ++o) {
      if (r.counts[o] > 0.0) {
        cols.push_back(r.setting.index() * kNumOutcomes + o);
        counts.push_back(r.counts[o]);
      }
    }
  }
  ObservedFrame f;
  f.vectors.resize(kDim, static_cast<Eigen::Index>(cols.size()));
  f.counts.resize(static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) {
    f.vectors.col(static_cast<Eigen::Index>(k)) = full_frame().col(cols[k]);
    f.counts(static_cast<Eigen::Index>(k)) = counts[k];
  }
  f.total = f.counts.sum();
  return f;
}

Eigen::VectorXd probabilities(const ObservedFrame& f, const Matrix16c& rho) {
  const FrameMatrix m = rho * f.vectors;
  return f.vectors.conjugate().cwiseProduct(m).colwise().sum().real().transpose();
}

double log_likelihood_of(const ObservedFrame& f, const Eigen::VectorXd& p) {
  double ll = 0.0;
  for (Eigen::Index k = 0; k < p.size(); ++k) ll += f.counts(k) * std::log(p(k));
  return ll;
}

// Log-likelihood gain computed from probability ratios to avoid cancellation.
double log_likelihood_gain(const ObservedFrame& f, const Eigen::VectorXd& p_new,
                           const Eigen::VectorXd& p_old) {
  double gain = 0.0;
  for (Eigen::Index k = 0; k < p_new.size(); ++k) gain += f.counts(k) * std::log(p_new(k) / p_old(k));
  return gain;
}

Matrix16c normalized_step(const Matrix16c& left, const Matrix16c& rho) {
  Matrix16c next = left * rho * left.adjoint();
  next = 0.5 * (next + next.adjoint());
  return next / next.trace().real();
}

bool probabilities_positive(const Eigen::VectorXd& p) { return (p.array() > 0.0).all(); }

}  // namespace

namespace {

// Euclidean projection of a Hermitian matrix onto unit-trace PSD matrices:
// eigenvalues are projected onto the probability simplex.
Matrix16c project_to_density(const Matrix16c& h) {
  Eigen::SelfAdjointEigenSolver<Matrix16c> es(0.5 * (h + h.adjoint()));
  Eigen::Matrix<double, kDim, 1> lambda = es.eigenvalues();
  std::array<double, kDim> sorted{};
  for (int k = 0; k < kDim; ++k) sorted[k] = lambda(k);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double shift = 0.0;
  for (int k = 0; k < kDim; ++k) {
    cumulative += sorted[k];
    const double candidate = (cumulative - 1.0) / (k + 1);
    if (sorted[k] - candidate > 0.0) shift = candidate;
  }
  lambda = (lambda.array() - shift).cwiseMax(0.0);
  return es.eigenvectors() * lambda.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

struct Iterate {
  Matrix16c rho;
  Eigen::VectorXd p;
  double ll = 0.0;
};

Matrix16c ascent_direction(const ObservedFrame& f, const Eigen::VectorXd& p) {
  const Eigen::VectorXd weights = f.counts.cwiseQuotient(p) / f.total;
  return f.vectors * weights.asDiagonal() * f.vectors.adjoint();
}

}  // namespace

double log_likelihood(const TomographyDataset& dataset, const DensityMatrix& rho) {
  const ObservedFrame f = observed_frame(dataset);
  return log_likelihood_of(f, probabilities(f, rho.matrix()));
}

ReconstructionResult mle_reconstruct(const TomographyDataset& dataset, const MleOptions& options) {
  const ObservedFrame f = observed_frame(dataset);
  if (!(f.total > 0.0)) {
    throw DomainError("mle_reconstruct: dataset contains no counts");
  }

  Iterate x{Matrix16c::Identity() / 16.0, {}, 0.0};
  x.p = probabilities(f, x.rho);
  x.ll = log_likelihood_of(f, x.p);

  ReconstructionResult result;
  if (options.record_history) result.history.push_back(x.ll);
  auto accept = [&](Iterate next) {
    x = std::move(next);
    if (options.record_history) result.history.push_back(x.ll);
  };

  int it = 0;
  bool converged = false;

  // Stage 1: R rho R fixed point, diluted when the plain step loses likelihood.
  const int fixed_point_cap =
      options.refine ? std::min(options.fixed_point_iterations, options.max_iterations) : options.max_iterations;
  for (; it < fixed_point_cap; ++it) {
    const Matrix16c r = ascent_direction(f, x.p);
    Iterate next{normalized_step(r, x.rho), {}, 0.0};
    next.p = probabilities(f, next.rho);
    double gain = probabilities_positive(next.p) ? log_likelihood_gain(f, next.p, x.p) : -1.0;
    for (double eps = 1.0; gain < 0.0 && eps > 1e-12; eps *= 0.5) {
      next.rho = normalized_step(Matrix16c::Identity() + eps * r, x.rho);
      next.p = probabilities(f, next.rho);
      gain = probabilities_positive(next.p) ? log_likelihood_gain(f, next.p, x.p) : -1.0;
    }
    if (gain < 0.0) break;
    next.ll = x.ll + gain;
    accept(std::move(next));
    if (gain < options.tolerance) {
      ++it;
      break;
    }
  }

  // Stage 2: monotone accelerated projected gradient. Projection onto the
  // boundary of the state space reaches rank-deficient optima that the
  // multiplicative iteration only approaches sublinearly.
  if (options.refine) {
    Iterate y = x;
    Iterate previous = x;
    double momentum = 1.0;
    double step = 1.0 / 16.0;
    bool restarted = true;
    for (; it < options.max_iterations; ++it) {
      const Matrix16c grad = ascent_direction(f, y.p);  // gradient of LL / N
      Iterate z;
      double gain_over_y = -1.0;
      for (int tries = 0; tries < 60; ++tries) {
        z.rho = project_to_density(y.rho + step * grad);
        z.p = probabilities(f, z.rho);
        if (probabilities_positive(z.p)) {
          gain_over_y = log_likelihood_gain(f, z.p, y.p) / f.total;
          const Matrix16c d = z.rho - y.rho;
          const double linear = (grad.adjoint() * d).trace().real();
          if (gain_over_y >= linear - d.squaredNorm() / (2.0 * step)) break;
        }
        step *= 0.5;
      }
      if (!probabilities_positive(z.p)) break;
      z.ll = y.ll + gain_over_y * f.total;

      const double gain = probabilities_positive(z.p) ? log_likelihood_gain(f, z.p, x.p) : -1.0;
      previous = x;
      if (gain > 0.0) {
        z.ll = x.ll + gain;
        accept(z);
      }
      const bool small = gain < options.tolerance;
      if (small && restarted) {
        converged = true;
        ++it;
        break;
      }
      if (small) {
        // Drop the momentum and retry from the best iterate.
        y = x;
        momentum = 1.0;
        restarted = true;
        continue;
      }
      const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
      Iterate ny;
      ny.rho = x.rho + (momentum / next_momentum) * (z.rho - x.rho) +
               ((momentum - 1.0) / next_momentum) * (x.rho - previous.rho);
      ny.rho = project_to_density(ny.rho);
      ny.p = probabilities(f, ny.rho);
      if (probabilities_positive(ny.p)) {
        ny.ll = x.ll + log_likelihood_gain(f, ny.p, x.p);
        y = std::move(ny);
        restarted = false;
      } else {
        y = x;
        restarted = true;
      }
      momentum = restarted ? 1.0 : next_momentum;
      step *= 1.5;
    }
  } else {
    converged = it < options.max_iterations;
  }

  result.rho = DensityMatrix::from_matrix(0.5 * (x.rho + x.rho.adjoint()) / x.rho.trace().real());
  result.log_likelihood = log_likelihood_of(f, x.p);
  result.iterations = it;
  result.converged = converged;
  return result;
}

namespace {

struct PauliTerm {
  Matrix16c op;
  int identities = 0;
};

const std::vector<PauliTerm>& pauli_strings() {
  static const std::vector<PauliTerm> terms = [] {
    const std::array<Matrix2c, 4> single{pauli::identity(), pauli::x(), pauli::y(), pauli::z()};
    std::vector<PauliTerm> v;
    v.reserve(256);
    for (int code = 0; code < 256; ++code) {
      std::array<int, 4> idx{(code >> 6) & 3, (code >> 4) & 3, (code >> 2) & 3, code & 3};
      PauliTerm t;
      t.op = kron4(single[idx[0]], single[idx[1]], single[idx[2]], single[idx[3]]);
      t.identities = static_cast<int>(std::count(idx.begin(), idx.end(), 0));
      v.push_back(std::move(t));
    }
    return v;
  }();
  return terms;
}

}  // namespace

Operator16 linear_inversion(const TomographyDataset& dataset) {
  // The frame operator of the product-MUB measurement is diagonal on Pauli
  // strings: S(P) = 3^{#identities(P)} P.
  Matrix16c m = Matrix16c::Zero();
  for (const auto& r : dataset.records()) {
    const double n = r.total();
    if (!(n > 0.0)) {
      throw DomainError("linear_inversion: setting " + r.setting.label() + " has no counts");
    }
    for (int o = 0; o < kNumOutcomes; ++o) {
      if (r.counts[o] == 0.0) continue;
      const Vector16c v = full_frame().col(r.setting.index() * kNumOutcomes + o);
      m += (r.counts[o] / n) * (v * v.adjoint());
    }
  }
  Matrix16c rho = Matrix16c::Zero();
  for (const auto& t : pauli_strings()) {
    const Complex coeff = (m * t.op).trace() / (16.0 * std::pow(3.0, t.identities));
    rho += coeff.real() * t.op;
  }
  return 0.5 * (rho + rho.adjoint());
}

double fidelity(const DensityMatrix& rho, const PureState4& target) {
  const double f = target.amplitudes().dot(rho.matrix() * target.amplitudes()).real();
  return std::clamp(f, 0.0, 1.0);
}

std::vector<UncertaintySummary> monte_carlo_uncertainty(const TomographyDataset& dataset,
                                                        const std::vector<Statistic>& statistics,
                                                        int runs, std::uint64_t seed,
                                                        const MleOptions& options) {
  if (runs < 2) throw DomainError("monte_carlo_uncertainty: need at least two runs");
  const std::size_t m = statistics.size();
  std::vector<std::vector<double>> values(m);
  int failed = 0;
  for (int run = 0; run < runs; ++run) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(run));
    std::vector<CountRecord> records = dataset.records();
    for (auto& r : records) {
      for (double& c : r.counts) c = static_cast<double>(draw_poisson(rng, c));
    }
    try {
      const TomographyDataset resampled(std::move(records), dataset.meta());
      const ReconstructionResult rec = mle_reconstruct(resampled, options);
      std::vector<double> row(m);
      for (std::size_t k = 0; k < m; ++k) {
        row[k] = statistics[k](rec);
        if (!std::isfinite(row[k])) throw DomainError("statistic is not finite");
      }
      for (std::size_t k = 0; k < m; ++k) values[k].push_back(row[k]);
    } catch (const std::exception&) {
      ++failed;
    }
  }
  if (2 * failed > runs) {
    std::ostringstream msg;
    msg << "monte_carlo_uncertainty: " << failed << " of " << runs << " runs failed";
    throw DomainError(msg.str());
  }
  std::vector<UncertaintySummary> out(m);
  for (std::size_t k = 0; k < m; ++k) {
    const auto& v = values[k];
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    out[k] = {mean, v.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0, runs, failed};
  }
  return out;
}

UncertaintySummary monte_carlo_uncertainty(const TomographyDataset& dataset,
                                           const Statistic& statistic, int runs, std::uint64_t seed,
                                           const MleOptions& options) {
  return monte_carlo_uncertainty(dataset, std::vector<Statistic>{statistic}, runs, seed, options).front();
}

std::string format_uncertainty(double mean, double stddev, int decimals) {
  const double scale = std::pow(10.0, decimals);
  const long long digits = std::llround(std::abs(stddev) * scale);
  std::ostringstream os;
  os << std::fixed << std::setprecision(decimals) << mean << '(' << digits << ')';
  return os.str();
}

CorrelationTensor correlation_tensor(const TomographyDataset& dataset, int i, int j) {
  if (i < 1 || j > 4 || i >= j) {
    throw DomainError("correlation_tensor: require 1 <= i < j <= 4");
  }
  constexpr std::array<Basis, 3> axes{Basis::X, Basis::Y, Basis::Z};
  CorrelationTensor t;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      double num = 0.0;
      double den = 0.0;
      for (const auto& r : dataset.records()) {
        if (r.setting.bases[i - 1] != axes[a] || r.setting.bases[j - 1] != axes[b]) continue;
        for (int o = 0; o < kNumOutcomes; ++o) {
          const bool same = qubit_bit(o, i) == qubit_bit(o, j);
          num += same ? r.counts[o] : -r.counts[o];
          den += r.counts[o];
        }
      }
      if (den > 0.0) t[a][b] = num / den;
    }
  }
  return t;
}

}  // namespace vbsim
