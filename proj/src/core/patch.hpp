#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "core/volume.hpp"

namespace bodyct {

struct IntensityPolicy {
    double clip_min = 0.0;
    double clip_max = 0.0;
};

/// HU clip ranges: lungs/pleura (-1000, 800); liver/gallbladder and
/// kidneys/ureters (-200, 500).
IntensityPolicy intensity_policy_for(std::string_view system);

/// Fixed patch sizes in voxels at 2 mm spacing, (Z, Y, X):
/// lungs/pleura (224, 160, 160); both abdominal systems (96, 128, 128).
std::array<std::int64_t, 3> patch_size_for(std::string_view system);

struct PatchSpec {
    std::string system;
    std::array<std::int64_t, 3> size{};    // fixed per system
    std::array<std::int64_t, 3> center{};  // after any kidney offset
    std::array<std::int64_t, 3> start{};   // first voxel of the box (may be negative: padding)
    std::string offset_rule = "none";      // none | kidney_anterior_auto | kidney_anterior_fixed
    std::array<bool, 3> padded{};          // patch exceeds the volume on this axis
    std::int64_t kidney_shift_voxels = 0;  // applied along -y
};

struct PlaceOptions {
    std::string kidney_offset = "auto";  // "auto" | "none" | fixed millimetres
    double kidney_offset_mm = 0.0;       // used when kidney_offset == "fixed"
    double body_threshold_hu = -500.0;   // air/tissue boundary for the body bound
};

/// Centers the system's fixed-size box on the mask centroid. Kidney patches
/// are shifted along -y (anteriorly) until the posterior patch face stays
/// within the body's posterior bound, found by thresholding the volume. The
/// box is then translated (never shrunk) into the volume where possible;
/// axes where it cannot fit are flagged for padding.
PatchSpec place_patch(const VolumeGrid& mask, std::string_view system, const VolumeGrid& volume,
                      const PlaceOptions& options = {});

struct NormalizeInfo {
    bool degenerate = false;  // constant patch: output is all zeros
    double mean = 0.0;        // pre-normalization, post-clip
    double stddev = 0.0;
};

/// Clamps to the policy range then maps to zero mean, unit standard
/// deviation (population). Constant patches become all zeros and are flagged.
NormalizeInfo clip_normalize(std::vector<double>& values, const IntensityPolicy& policy);

struct ExtractedPatch {
    VolumeGrid grid;
    PatchSpec spec;
    IntensityPolicy policy;
    NormalizeInfo normalization;
};

/// Copies the box, padding out-of-volume voxels with clip_min, then applies
/// clip_normalize. Output shape is exactly the system's patch size.
ExtractedPatch extract_patch(const VolumeGrid& volume, const PatchSpec& spec,
                             const IntensityPolicy& policy);

}  // namespace bodyct
