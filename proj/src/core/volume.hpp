#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace bodyct {

/// Regular voxel grid with physical geometry. Axis order is (z, y, x)
/// throughout; voxels are stored z-major (index = (z*ny + y)*nx + x) and
/// origin is the physical center of voxel (0,0,0) in millimetres. The y axis
/// increases from anterior to posterior.
struct VolumeGrid {
    std::array<std::int64_t, 3> size{0, 0, 0};  // (nz, ny, nx)
    std::array<double, 3> spacing{1.0, 1.0, 1.0};
    std::array<double, 3> origin{0.0, 0.0, 0.0};
    std::vector<double> voxels;

    std::int64_t count() const { return size[0] * size[1] * size[2]; }

    std::int64_t index(std::int64_t z, std::int64_t y, std::int64_t x) const {
        return (z * size[1] + y) * size[2] + x;
    }
    double at(std::int64_t z, std::int64_t y, std::int64_t x) const {
        return voxels[static_cast<std::size_t>(index(z, y, x))];
    }
    double& at(std::int64_t z, std::int64_t y, std::int64_t x) {
        return voxels[static_cast<std::size_t>(index(z, y, x))];
    }

    /// Physical extent (size * spacing) per axis.
    std::array<double, 3> extent() const;

    void validate() const;  // positive size/spacing, voxel count consistent
};

/// Raw little-endian voxel file plus a JSON sidecar describing geometry.
/// The sidecar is the addressable path; the voxel file sits next to it.
VolumeGrid load_volume(const std::string& meta_path);

void save_volume(const VolumeGrid& volume, const std::string& meta_path,
                 const std::string& dtype = "float64",
                 const nlohmann::ordered_json& extra_metadata = {});

/// Sidecar of the last loaded/saved metadata for callers that need extras.
nlohmann::ordered_json read_volume_metadata(const std::string& meta_path);

}  // namespace bodyct
