#pragma once

// Artifact emission: CSV, JSON and plot-data text with fixed 12-digit floats
// and LF line endings, plus calibration fixtures.

#include "horocount/dimension.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace horo {

using Json = nlohmann::ordered_json;

/// "%.12g".
std::string fmt12(double x);
/// x rounded to 12 significant digits (what fmt12 prints).
double round12(double x);

/// "p/q" on the line, "re+imi" / "re-imi" in the plane.
std::string point_str(const ExactPoint& z, int dim);
/// Inverse of point_str; also accepts "re,im" and the named constants.
ExactPoint parse_point(std::string_view text, int dim);

/// Creates parent directories; Io error when the path cannot be written.
void write_text(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);
std::string dump(const Json& j);

/// z,R,tau,k,count,prediction,ratio,regime rows sorted by (regime, z, R, tau, k).
std::string count_csv(const std::vector<CountRecord>& records);
Json band_json(const ComparabilityBand& b);
ComparabilityBand band_from_json(const Json& j);
Json record_json(const CountRecord& r);

Json measure_json(const MeasureRecord& m);
std::string measure_csv(const std::vector<MeasureRecord>& records);

/// "# label" then "log_r log_value" lines.
std::string plotdata(const Series& s);
/// File-name-safe version of a series label.
std::string slug(std::string_view label);

Json calibration_json(const Calibration& c);
Calibration calibration_from_json(const Json& j);

}  // namespace horo
