#pragma once

#include <array>

#include "core/volume.hpp"

namespace bodyct {

/// Resamples onto an isotropic (or per-axis) target spacing with B-spline
/// interpolation of the given order (0 = nearest, 1 = trilinear,
/// 2/3 = quadratic/cubic with IIR prefiltering, mirror boundaries).
///
/// The output grid covers the same physical extent, centred on it: per axis
/// n' = round(n*s/s'), so the extent changes by at most one target voxel.
/// Sample coordinates outside the input grid take the nearest-edge value.
/// A volume already at the target spacing round-trips bitwise at order <= 1.
VolumeGrid resample(const VolumeGrid& input, std::array<double, 3> target_spacing,
                    int spline_order = 3);

/// The IIR coefficient pass alone, exposed for tests.
void bspline_prefilter_line(double* line, std::int64_t n, int spline_order);

}  // namespace bodyct
