#pragma once

#include "bathlab/diagnostics.hpp"

#include <filesystem>

namespace bathlab {

// Binary checkpoint, little-endian:
//   "BLCK" | u32 version=1 | f64 extent | i32 points_per_axis | i32 max_mode | f64 dt
//   | u64 step | f64 time | f64 c_infinity | u64 rows | u64 cols
//   | rows*cols complex128 (re, im) in column-major order | u64 FNV-1a of all preceding bytes
struct CheckpointHeader {
    double extent = 0.0;
    int points_per_axis = 0;
    int max_mode = 0;
    double dt = 0.0;
};

void save_checkpoint(const std::filesystem::path& path, const CheckpointHeader& header, const DistributionState& state);

struct Checkpoint {
    CheckpointHeader header;
    DistributionState state;
};

// Throws ConfigError on a malformed, truncated or corrupted file.
Checkpoint load_checkpoint(const std::filesystem::path& path);

} // namespace bathlab
