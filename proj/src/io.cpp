#include "vbsim/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "vbsim/spin_model.hpp"

namespace vbsim::io {

std::string tool_version() { return VBSIM_VERSION; }

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

json noise_to_json(const NoiseParams& noise) {
  return {{"white_noise_p", noise.white_noise_p()}, {"visibility", noise.visibility()}};
}

NoiseParams noise_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("noise parameters must be an object");
  try {
    return NoiseParams(j.value("white_noise_p", 0.0), j.value("visibility", 1.0));
  } catch (const json::exception& e) {
    throw FormatError(std::string("noise parameters: ") + e.what());
  }
}

json dataset_to_json(const TomographyDataset& dataset) {
  if (!dataset.is_integral()) {
    throw FormatError("dataset files store integer counts only");
  }
  const DatasetMeta& m = dataset.meta();
  json meta = {{"seed", m.seed},
               {"mean_total", m.mean_total},
               {"noise", noise_to_json(m.noise)},
               {"tool_version", tool_version()}};
  if (m.theta) {
    meta["theta"] = *m.theta;
    meta["theta_pi"] = ThetaAngle(*m.theta).pi_multiple();
  } else {
    meta["theta"] = nullptr;
  }
  json records = json::array();
  for (const auto& r : dataset.records()) {
    json counts = json::array();
    for (double c : r.counts) counts.push_back(static_cast<long long>(c));
    records.push_back({{"setting", r.setting.label()}, {"counts", counts}});
  }
  return {{"meta", meta}, {"records", records}};
}

TomographyDataset dataset_from_json(const json& j) {
  if (!j.is_object() || !j.contains("records") || !j["records"].is_array()) {
    throw FormatError("dataset: missing 'records' array");
  }
  DatasetMeta meta;
  if (j.contains("meta")) {
    const json& mj = j["meta"];
    if (!mj.is_object()) throw FormatError("dataset: 'meta' must be an object");
    try {
      if (mj.contains("seed") && !mj["seed"].is_null()) meta.seed = mj["seed"].get<std::uint64_t>();
      if (mj.contains("mean_total") && !mj["mean_total"].is_null()) meta.mean_total = mj["mean_total"].get<double>();
      if (mj.contains("theta") && !mj["theta"].is_null()) meta.theta = mj["theta"].get<double>();
    } catch (const json::exception& e) {
      throw FormatError(std::string("dataset meta: ") + e.what());
    }
    if (mj.contains("noise")) meta.noise = noise_from_json(mj["noise"]);
  }
  std::vector<CountRecord> records;
  const json& rj = j["records"];
  for (std::size_t k = 0; k < rj.size(); ++k) {
    const json& r = rj[k];
    const std::string where = "dataset record " + std::to_string(k);
    if (!r.is_object() || !r.contains("setting") || !r["setting"].is_string()) {
      throw FormatError(where + ": missing 'setting' string");
    }
    CountRecord rec;
    try {
      rec.setting = MeasurementSetting::parse(r["setting"].get<std::string>());
    } catch (const FormatError& e) {
      throw FormatError(where + ": " + e.what());
    }
    const std::string named = where + " (" + rec.setting.label() + ")";
    if (!r.contains("counts") || !r["counts"].is_array() || r["counts"].size() != kNumOutcomes) {
      throw FormatError(named + ": 'counts' must be an array of 16 integers");
    }
    for (int o = 0; o < kNumOutcomes; ++o) {
      const json& c = r["counts"][o];
      if (!c.is_number_integer() || c.get<long long>() < 0) {
        throw FormatError(named + ": count " + std::to_string(o) + " is not a nonnegative integer");
      }
      rec.counts[o] = static_cast<double>(c.get<long long>());
    }
    records.push_back(rec);
  }
  return TomographyDataset(std::move(records), std::move(meta));
}

json matrix_to_json(const Matrix16c& m, const json& meta) {
  json re = json::array();
  json im = json::array();
  for (int r = 0; r < kDim; ++r) {
    json rr = json::array();
    json ii = json::array();
    for (int c = 0; c < kDim; ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  json out = {{"dim", kDim}, {"re", re}, {"im", im}};
  if (!meta.empty()) out["meta"] = meta;
  return out;
}

Matrix16c matrix_from_json(const json& j) {
  if (!j.is_object() || j.value("dim", 0) != kDim) {
    throw FormatError("density matrix: 'dim' must be 16");
  }
  Matrix16c m;
  for (const char* part : {"re", "im"}) {
    if (!j.contains(part) || !j[part].is_array() || j[part].size() != kDim) {
      throw FormatError(std::string("density matrix: '") + part + "' must be a 16x16 array");
    }
  }
  for (int r = 0; r < kDim; ++r) {
    const json& rr = j["re"][r];
    const json& ii = j["im"][r];
    if (!rr.is_array() || !ii.is_array() || rr.size() != kDim || ii.size() != kDim) {
      throw FormatError("density matrix: row " + std::to_string(r) + " does not have 16 entries");
    }
    for (int c = 0; c < kDim; ++c) {
      if (!rr[c].is_number() || !ii[c].is_number()) {
        throw FormatError("density matrix: entry (" + std::to_string(r) + "," + std::to_string(c) +
                          ") is not a number");
      }
      m(r, c) = Complex(rr[c].get<double>(), ii[c].get<double>());
    }
  }
  return m;
}

DensityMatrix density_from_json(const json& j, double tol) {
  return DensityMatrix::from_matrix(matrix_from_json(j), tol);
}

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed while writing '" + path.string() + "'");
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

TomographyDataset read_dataset(const std::filesystem::path& path) {
  try {
    return dataset_from_json(read_json(path));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_dataset(const std::filesystem::path& path, const TomographyDataset& dataset) {
  write_json(path, dataset_to_json(dataset));
}

}  // namespace vbsim::io
