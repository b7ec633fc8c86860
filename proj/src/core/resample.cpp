#include "core/resample.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "core/error.hpp"

namespace bodyct {

namespace {

// Unser-style recursive prefilter so the spline interpolates the samples.
// One pole per order: quadratic 2*sqrt(2)-3, cubic sqrt(3)-2.
double pole_for_order(int order) {
    if (order == 2) return 2.0 * std::sqrt(2.0) - 3.0;
    return std::sqrt(3.0) - 2.0;  // order 3
}

double initial_causal(const double* c, std::int64_t n, double z) {
    // mirror boundary; horizon where |z|^h drops below double precision
    std::int64_t horizon = static_cast<std::int64_t>(std::ceil(std::log(1e-17) / std::log(std::abs(z))));
    if (horizon < n) {
        double zn = z;
        double sum = c[0];
        for (std::int64_t k = 1; k < horizon; ++k) {
            sum += zn * c[k];
            zn *= z;
        }
        return sum;
    }
    // full-signal accumulation for short lines
    double zn = z;
    double iz = 1.0 / z;
    double z2n = std::pow(z, static_cast<double>(n - 1));
    double sum = c[0] + z2n * c[n - 1];
    z2n *= z2n * iz;
    for (std::int64_t k = 1; k <= n - 2; ++k) {
        sum += (zn + z2n) * c[k];
        zn *= z;
        z2n *= iz;
    }
    return sum / (1.0 - std::pow(z, static_cast<double>(2 * n - 2)));
}

double initial_anticausal(const double* c, std::int64_t n, double z) {
    return (z / (z * z - 1.0)) * (z * c[n - 2] + c[n - 1]);
}

}  // namespace

void bspline_prefilter_line(double* line, std::int64_t n, int spline_order) {
    if (spline_order < 2 || n < 2) return;
    const double z = pole_for_order(spline_order);
    const double gain = (1.0 - z) * (1.0 - 1.0 / z);
    for (std::int64_t i = 0; i < n; ++i) line[i] *= gain;
    line[0] = initial_causal(line, n, z);
    for (std::int64_t i = 1; i < n; ++i) line[i] += z * line[i - 1];
    line[n - 1] = initial_anticausal(line, n, z);
    for (std::int64_t i = n - 2; i >= 0; --i) line[i] = z * (line[i + 1] - line[i]);
}

namespace {

void prefilter_volume(VolumeGrid& volume, int order) {
    if (order < 2) return;
    const std::int64_t nz = volume.size[0], ny = volume.size[1], nx = volume.size[2];
    std::vector<double> line;

    // x axis: contiguous lines
    for (std::int64_t z = 0; z < nz; ++z)
        for (std::int64_t y = 0; y < ny; ++y)
            bspline_prefilter_line(&volume.voxels[static_cast<std::size_t>(volume.index(z, y, 0))], nx,
                                   order);
    // y axis
    line.resize(static_cast<std::size_t>(ny));
    for (std::int64_t z = 0; z < nz; ++z)
        for (std::int64_t x = 0; x < nx; ++x) {
            for (std::int64_t y = 0; y < ny; ++y) line[static_cast<std::size_t>(y)] = volume.at(z, y, x);
            bspline_prefilter_line(line.data(), ny, order);
            for (std::int64_t y = 0; y < ny; ++y) volume.at(z, y, x) = line[static_cast<std::size_t>(y)];
        }
    // z axis
    line.resize(static_cast<std::size_t>(nz));
    for (std::int64_t y = 0; y < ny; ++y)
        for (std::int64_t x = 0; x < nx; ++x) {
            for (std::int64_t z = 0; z < nz; ++z) line[static_cast<std::size_t>(z)] = volume.at(z, y, x);
            bspline_prefilter_line(line.data(), nz, order);
            for (std::int64_t z = 0; z < nz; ++z) volume.at(z, y, x) = line[static_cast<std::size_t>(z)];
        }
}

std::int64_t mirror_index(std::int64_t i, std::int64_t n) {
    if (n == 1) return 0;
    const std::int64_t period = 2 * (n - 1);
    i %= period;
    if (i < 0) i += period;
    return i < n ? i : period - i;
}

struct AxisTap {
    std::int64_t index[4];
    double weight[4];
    int taps = 0;
};

/// Interpolation tap table for one output axis. Zero weights are dropped so
/// that coincident grids reduce to a bitwise copy at order <= 1.
std::vector<AxisTap> tabulate_axis(std::int64_t n_in, double spacing_in, double origin_in,
                                   std::int64_t n_out, double spacing_out, double origin_out,
                                   int order) {
    std::vector<AxisTap> table(static_cast<std::size_t>(n_out));
    const double delta = origin_out - origin_in;
    for (std::int64_t k = 0; k < n_out; ++k) {
        double u = (delta + static_cast<double>(k) * spacing_out) / spacing_in;
        if (u < 0.0) u = 0.0;
        const double last = static_cast<double>(n_in - 1);
        if (u > last) u = last;

        std::int64_t base;
        double w[4];
        int taps;
        if (order == 0) {
            base = static_cast<std::int64_t>(std::floor(u + 0.5));
            w[0] = 1.0;
            taps = 1;
        } else if (order == 1) {
            base = static_cast<std::int64_t>(std::floor(u));
            double t = u - static_cast<double>(base);
            w[0] = 1.0 - t;
            w[1] = t;
            taps = 2;
        } else if (order == 2) {
            base = static_cast<std::int64_t>(std::floor(u + 0.5)) - 1;
            double t = u - static_cast<double>(base + 1);
            w[0] = 0.5 * (0.5 - t) * (0.5 - t);
            w[1] = 0.75 - t * t;
            w[2] = 0.5 * (0.5 + t) * (0.5 + t);
            taps = 3;
        } else {
            base = static_cast<std::int64_t>(std::floor(u)) - 1;
            double t = u - static_cast<double>(base + 1);
            double t2 = t * t, t3 = t2 * t;
            w[0] = (1.0 - 3.0 * t + 3.0 * t2 - t3) / 6.0;
            w[1] = (4.0 - 6.0 * t2 + 3.0 * t3) / 6.0;
            w[2] = (1.0 + 3.0 * t + 3.0 * t2 - 3.0 * t3) / 6.0;
            w[3] = t3 / 6.0;
            taps = 4;
        }

        AxisTap& tap = table[static_cast<std::size_t>(k)];
        for (int i = 0; i < taps; ++i) {
            if (w[i] == 0.0) continue;
            std::int64_t idx = base + i;
            tap.index[tap.taps] = order >= 2 ? mirror_index(idx, n_in)
                                             : std::clamp<std::int64_t>(idx, 0, n_in - 1);
            tap.weight[tap.taps] = w[i];
            ++tap.taps;
        }
    }
    return table;
}

}  // namespace

VolumeGrid resample(const VolumeGrid& input, std::array<double, 3> target_spacing, int spline_order) {
    input.validate();
    if (spline_order < 0 || spline_order > 3)
        fail(ErrorCode::invalid_argument, "spline order must be in 0..3");
    for (double s : target_spacing)
        if (!(s > 0.0)) fail(ErrorCode::invalid_argument, "target spacing must be positive");

    VolumeGrid out;
    for (int a = 0; a < 3; ++a) {
        double physical = static_cast<double>(input.size[a]) * input.spacing[a];
        std::int64_t n = static_cast<std::int64_t>(std::llround(physical / target_spacing[a]));
        out.size[a] = std::max<std::int64_t>(1, n);
        out.spacing[a] = target_spacing[a];
        // centre the output extent on the input extent
        out.origin[a] = input.origin[a] +
                        (static_cast<double>(input.size[a] - 1) * input.spacing[a] -
                         static_cast<double>(out.size[a] - 1) * out.spacing[a]) /
                            2.0;
    }

    VolumeGrid coefficients = input;
    prefilter_volume(coefficients, spline_order);

    auto tz = tabulate_axis(input.size[0], input.spacing[0], input.origin[0], out.size[0],
                            out.spacing[0], out.origin[0], spline_order);
    auto ty = tabulate_axis(input.size[1], input.spacing[1], input.origin[1], out.size[1],
                            out.spacing[1], out.origin[1], spline_order);
    auto tx = tabulate_axis(input.size[2], input.spacing[2], input.origin[2], out.size[2],
                            out.spacing[2], out.origin[2], spline_order);

    out.voxels.resize(static_cast<std::size_t>(out.count()));
    std::size_t write = 0;
    for (std::int64_t z = 0; z < out.size[0]; ++z) {
        const AxisTap& az = tz[static_cast<std::size_t>(z)];
        for (std::int64_t y = 0; y < out.size[1]; ++y) {
            const AxisTap& ay = ty[static_cast<std::size_t>(y)];
            for (std::int64_t x = 0; x < out.size[2]; ++x) {
                const AxisTap& ax = tx[static_cast<std::size_t>(x)];
                double acc = 0.0;
                for (int iz = 0; iz < az.taps; ++iz) {
                    double acc_y = 0.0;
                    for (int iy = 0; iy < ay.taps; ++iy) {
                        double acc_x = 0.0;
                        const std::int64_t row =
                            (az.index[iz] * input.size[1] + ay.index[iy]) * input.size[2];
                        for (int ix = 0; ix < ax.taps; ++ix)
                            acc_x += ax.weight[ix] *
                                     coefficients.voxels[static_cast<std::size_t>(row + ax.index[ix])];
                        acc_y += ay.weight[iy] * acc_x;
                    }
                    acc += az.weight[iz] * acc_y;
                }
                out.voxels[write++] = acc;
            }
        }
    }
    return out;
}

}  // namespace bodyct
