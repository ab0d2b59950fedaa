#pragma once

#include <filesystem>

#include "hmf/ensemble.hpp"

namespace hmf {

// Snapshot layout, all fields little-endian:
//   0  char[8]  magic "HMFSNAP\0"
//   8  uint32   version (1)
//  12  uint32   symmetry flag (0 or 1)
//  16  uint64   particle count N
//  24  float64  time
//  32  float64  pmax
//  40  float64  x[N], then p[N], then w[N]
inline constexpr char kCheckpointMagic[8] = {'H', 'M', 'F', 'S', 'N', 'A', 'P', '\0'};
inline constexpr unsigned kCheckpointVersion = 1;

/// Writes through a temporary file renamed into place.
void write_checkpoint(const std::filesystem::path& path, const WeightedEnsemble& e);
WeightedEnsemble read_checkpoint(const std::filesystem::path& path);

}  // namespace hmf
