#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "hmf/analysis.hpp"
#include "hmf/ensemble.hpp"

namespace hmf {

/// `t,mx,my` header, then one row per sample with 15 significant digits.
void write_series_csv(const std::filesystem::path& path,
                      std::span<const MagnetizationSample> samples);
std::string format_series_csv(std::span<const MagnetizationSample> samples);
std::vector<MagnetizationSample> read_series_csv(const std::filesystem::path& path);

/// Named column of a headed CSV file.
TimeSeries read_series_column(const std::filesystem::path& path, const std::string& column);

void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& sp);

/// Writes text to path through a temporary file renamed into place.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace hmf
