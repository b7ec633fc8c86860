#include "core/patch.hpp"

#include <algorithm>
#include <cmath>

#include "core/dictionary.hpp"
#include "core/error.hpp"

namespace bodyct {

IntensityPolicy intensity_policy_for(std::string_view system) {
    if (system == kLungsPleura) return {-1000.0, 800.0};
    if (system == kLiverGallbladder || system == kKidneysUreters) return {-200.0, 500.0};
    fail(ErrorCode::invalid_argument, "unknown organ system \"" + std::string(system) + "\"");
}

std::array<std::int64_t, 3> patch_size_for(std::string_view system) {
    if (system == kLungsPleura) return {224, 160, 160};
    if (system == kLiverGallbladder || system == kKidneysUreters) return {96, 128, 128};
    fail(ErrorCode::invalid_argument, "unknown organ system \"" + std::string(system) + "\"");
}

namespace {

void check_same_grid(const VolumeGrid& mask, const VolumeGrid& volume) {
    if (mask.size != volume.size)
        fail(ErrorCode::invalid_argument, "mask and volume sizes differ");
    for (int a = 0; a < 3; ++a) {
        if (std::abs(mask.spacing[a] - volume.spacing[a]) > 1e-6 ||
            std::abs(mask.origin[a] - volume.origin[a]) > 1e-6)
            fail(ErrorCode::invalid_argument, "mask and volume geometry differ");
    }
}

}  // namespace

PatchSpec place_patch(const VolumeGrid& mask, std::string_view system, const VolumeGrid& volume,
                      const PlaceOptions& options) {
    mask.validate();
    volume.validate();
    check_same_grid(mask, volume);

    PatchSpec spec;
    spec.system = std::string(system);
    spec.size = patch_size_for(system);

    // voxel centroid of the mask
    double sum[3] = {0.0, 0.0, 0.0};
    std::int64_t count = 0;
    std::size_t flat = 0;
    for (std::int64_t z = 0; z < mask.size[0]; ++z)
        for (std::int64_t y = 0; y < mask.size[1]; ++y)
            for (std::int64_t x = 0; x < mask.size[2]; ++x, ++flat) {
                if (mask.voxels[flat] > 0.0) {
                    sum[0] += static_cast<double>(z);
                    sum[1] += static_cast<double>(y);
                    sum[2] += static_cast<double>(x);
                    ++count;
                }
            }
    if (count == 0) fail(ErrorCode::invalid_argument, "organ mask is empty");
    for (int a = 0; a < 3; ++a)
        spec.center[a] = std::llround(sum[a] / static_cast<double>(count));

    if (system == kKidneysUreters && options.kidney_offset != "none") {
        if (options.kidney_offset == "auto") {
            // posterior bound of the body: highest y with any above-threshold voxel
            std::int64_t body_max_y = -1;
            flat = 0;
            for (std::int64_t z = 0; z < volume.size[0]; ++z)
                for (std::int64_t y = 0; y < volume.size[1]; ++y)
                    for (std::int64_t x = 0; x < volume.size[2]; ++x, ++flat)
                        if (volume.voxels[flat] > options.body_threshold_hu && y > body_max_y)
                            body_max_y = y;
            if (body_max_y >= 0) {
                std::int64_t posterior_face = spec.center[1] - spec.size[1] / 2 + spec.size[1] - 1;
                if (posterior_face > body_max_y) {
                    spec.kidney_shift_voxels = posterior_face - body_max_y;
                    spec.center[1] -= spec.kidney_shift_voxels;
                }
            }
            spec.offset_rule = "kidney_anterior_auto";
        } else {
            spec.kidney_shift_voxels =
                std::llround(options.kidney_offset_mm / volume.spacing[1]);
            spec.center[1] -= spec.kidney_shift_voxels;
            spec.offset_rule = "kidney_anterior_fixed";
        }
    }

    // box from the (possibly shifted) center, translated into the volume
    for (int a = 0; a < 3; ++a) {
        std::int64_t start = spec.center[a] - spec.size[a] / 2;
        const std::int64_t n = volume.size[a];
        if (spec.size[a] <= n) {
            start = std::clamp<std::int64_t>(start, 0, n - spec.size[a]);
        } else {
            // cannot fit: centre over the volume, padding on both sides
            start = -((spec.size[a] - n) / 2);
            spec.padded[a] = true;
        }
        spec.start[a] = start;
    }
    return spec;
}

NormalizeInfo clip_normalize(std::vector<double>& values, const IntensityPolicy& policy) {
    if (values.empty()) fail(ErrorCode::invalid_argument, "cannot normalize an empty patch");
    if (!(policy.clip_min < policy.clip_max))
        fail(ErrorCode::invalid_argument, "intensity policy clip_min must be below clip_max");

    for (double& v : values) v = std::clamp(v, policy.clip_min, policy.clip_max);

    const double n = static_cast<double>(values.size());
    // compensated two-pass moments so the normalized mean lands near machine zero
    double sum = 0.0, comp = 0.0;
    for (double v : values) {
        double y = v - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    double mean = sum / n;

    double dsum = 0.0, dcomp = 0.0, sq = 0.0, sqcomp = 0.0;
    for (double v : values) {
        double d = v - mean;
        double y = d - dcomp;
        double t = dsum + y;
        dcomp = (t - dsum) - y;
        dsum = t;
        double q = d * d - sqcomp;
        double u = sq + q;
        sqcomp = (u - sq) - q;
        sq = u;
    }
    double refined_mean = mean + dsum / n;
    double variance = (sq - dsum * dsum / n) / n;
    if (variance < 0.0) variance = 0.0;

    NormalizeInfo info;
    info.mean = refined_mean;
    info.stddev = std::sqrt(variance);
    if (info.stddev == 0.0) {
        std::fill(values.begin(), values.end(), 0.0);
        info.degenerate = true;
        return info;
    }
    for (double& v : values) v = (v - refined_mean) / info.stddev;
    return info;
}

ExtractedPatch extract_patch(const VolumeGrid& volume, const PatchSpec& spec,
                             const IntensityPolicy& policy) {
    volume.validate();
    if (spec.size != patch_size_for(spec.system))
        fail(ErrorCode::invalid_argument, "patch spec size does not match its system");
    for (int a = 0; a < 3; ++a) {
        bool exceeds = spec.start[a] < 0 || spec.start[a] + spec.size[a] > volume.size[a];
        if (exceeds && !spec.padded[a] && spec.size[a] <= volume.size[a])
            fail(ErrorCode::invalid_argument, "patch spec does not match the volume geometry");
    }

    ExtractedPatch out;
    out.spec = spec;
    out.policy = policy;
    out.grid.size = spec.size;
    out.grid.spacing = volume.spacing;
    for (int a = 0; a < 3; ++a)
        out.grid.origin[a] =
            volume.origin[a] + static_cast<double>(spec.start[a]) * volume.spacing[a];
    out.grid.voxels.assign(static_cast<std::size_t>(out.grid.count()), policy.clip_min);

    for (std::int64_t z = 0; z < spec.size[0]; ++z) {
        std::int64_t vz = spec.start[0] + z;
        if (vz < 0 || vz >= volume.size[0]) continue;
        for (std::int64_t y = 0; y < spec.size[1]; ++y) {
            std::int64_t vy = spec.start[1] + y;
            if (vy < 0 || vy >= volume.size[1]) continue;
            std::int64_t x0 = std::max<std::int64_t>(0, -spec.start[2]);
            std::int64_t x1 = std::min<std::int64_t>(spec.size[2], volume.size[2] - spec.start[2]);
            for (std::int64_t x = x0; x < x1; ++x)
                out.grid.at(z, y, x) = volume.at(vz, vy, spec.start[2] + x);
        }
    }

    out.normalization = clip_normalize(out.grid.voxels, policy);
    return out;
}

}  // namespace bodyct
