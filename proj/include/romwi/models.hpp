#pragma once
#include <cstdint>

#include "romwi/grid.hpp"

namespace romwi {

// Built-in desk-scale velocity models. Dimensions in meters, speeds in m/s.

// 2.0 km x 2.5 km, background 3000, disk of 4000 with radius 600 centered at
// (1000, 1000). cbar = 3000.
VelocityField camembert_model(double h);
const double kCamembertDiskX = 1000, kCamembertDiskZ = 1000, kCamembertDiskR = 600;

// 2.5 km x 1.5 km two-parameter model: c_top above a slanted interface,
// c_top*contrast below. position = interface depth at the left edge; the
// interface dips by kSlantSlope * x. cbar = c_top = 1500.
VelocityField slanted_model(double h, double position, double contrast);
const double kSlantSlope = 0.12, kSlantTop = 1500.0;
const double kSlantW = 2500.0, kSlantH = 1500.0;

// 2.0 km x 2.0 km homogeneous 2500 plus a smooth buried Gaussian lens
// (+300 m/s, sigma 250 m) centered at (1000, 1000).
VelocityField gaussian_bump_model(double h);

// 2.0 km x 2.0 km stack of flat layers under a homogeneous 2000 m/s cap;
// layer speeds pseudo-random in [2200, 3600], deterministic in seed.
VelocityField layered_model(double h, std::uint64_t seed);

}  // namespace romwi
