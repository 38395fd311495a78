#pragma once

// File formats.
//
// Dataset (JSON):
//   {"meta": {"seed": int, "mean_total": number, "theta": number (radians),
//             "noise": {"white_noise_p": number, "visibility": number}, ...},
//    "records": [{"setting": "XYZZ", "counts": [16 ints]}, ... 81 records]}
//   Counts are indexed by the 4-bit outcome with qubit 1 in the most
//   significant bit; bit 0 is the first-listed basis vector (H, +, R).
//
// Density matrix (JSON):
//   {"dim": 16, "re": [[16 numbers] x 16], "im": [[16 numbers] x 16], "meta": {...}}
//   Rows and columns follow the basis index 8*q1 + 4*q2 + 2*q3 + q4 (H = 0).

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "vbsim/linalg.hpp"
#include "vbsim/tomography.hpp"

namespace vbsim::io {

using nlohmann::json;

std::string tool_version();

/// Doubles at 17 significant digits; infinities as "+inf"/"-inf".
std::string format_double(double v);

json noise_to_json(const NoiseParams& noise);
NoiseParams noise_from_json(const json& j);

json dataset_to_json(const TomographyDataset& dataset);
/// Throws FormatError naming the offending record.
TomographyDataset dataset_from_json(const json& j);

json matrix_to_json(const Matrix16c& m, const json& meta = json::object());
Matrix16c matrix_from_json(const json& j);
/// Reads and validates a density matrix.
DensityMatrix density_from_json(const json& j, double tol = 1e-9);

/// Throws IoError with the path in the message.
json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

TomographyDataset read_dataset(const std::filesystem::path& path);
void write_dataset(const std::filesystem::path& path, const TomographyDataset& dataset);

}  // namespace vbsim::io
