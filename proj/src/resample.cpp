#include "qtomo/resample.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qtomo {

void DownscaleSpec::validate() const {
    if (d1 < 1 || d2 < 1)
        throw std::invalid_argument("downscale: group sizes must be >= 1");
}

namespace {

double aggregate_patch(const Sinogram& s, int a0, int d0, int da, int dd, Aggregate agg) {
    double acc = agg == Aggregate::mean ? 0.0 : s.at(a0, d0);
    for (int a = a0; a < a0 + da; ++a) {
        for (int d = d0; d < d0 + dd; ++d) {
            const double v = s.at(a, d);
            switch (agg) {
            case Aggregate::mean: acc += v; break;
            case Aggregate::max: acc = std::max(acc, v); break;
            case Aggregate::min: acc = std::min(acc, v); break;
            }
        }
    }
    if (agg == Aggregate::mean)
        acc /= static_cast<double>(da) * dd;
    return acc;
}

void check_detector_grouping(int detectors, int d, bool axis_aligned) {
    if (d == 1)
        return;
    if (detectors % d != 0)
        throw std::invalid_argument("downscale: detector axis (" + std::to_string(detectors) +
                                    ") not divisible by group size " + std::to_string(d));
    if (axis_aligned) {
        // groups must sit symmetrically about the rotation axis so none
        // straddles it; an odd count puts a bin center on the axis
        if (detectors % 2 != 0 || (detectors / 2) % d != 0)
            throw std::invalid_argument(
                "downscale: detector groups of " + std::to_string(d) +
                " cannot align symmetrically about the rotation axis for " +
                std::to_string(detectors) + " detectors");
    }
}

Sinogram downscale_detector_axis(const Sinogram& sino, int d1, int d2, Aggregate agg,
                                 AngleMode angle_mode, bool axis_aligned) {
    sino.validate();
    const int na = sino.n_angles();
    const int nd = sino.n_detectors();
    if (na % d1 != 0)
        throw std::invalid_argument("downscale: angle axis (" + std::to_string(na) +
                                    ") not divisible by group size " + std::to_string(d1));
    check_detector_grouping(nd, d2, axis_aligned);
    if (sino.geometry.image_size % d2 != 0)
        throw std::invalid_argument("downscale: image_size not divisible by detector group size");

    Geometry out_geom;
    out_geom.image_size = sino.geometry.image_size / d2;
    out_geom.detectors = nd / d2;
    out_geom.detector_spacing = sino.geometry.detector_spacing;
    out_geom.angles.reserve(na / d1);
    for (int g = 0; g < na / d1; ++g) {
        if (angle_mode == AngleMode::pick_second) {
            out_geom.angles.push_back(sino.geometry.angles[g * d1 + d1 - 1]);
        } else {
            double m = 0.0;
            for (int a = 0; a < d1; ++a)
                m += sino.geometry.angles[g * d1 + a];
            out_geom.angles.push_back(m / d1);
        }
    }

    Sinogram out(out_geom);
    const double correction = 1.0 / d2;
    for (int a = 0; a < out.n_angles(); ++a)
        for (int d = 0; d < out.n_detectors(); ++d)
            out.at(a, d) = aggregate_patch(sino, a * d1, d * d2, d1, d2, agg) * correction;
    out.path_scale = sino.path_scale / d2;
    return out;
}

} // namespace

Sinogram downscale_full_view(const Sinogram& sino, const DownscaleSpec& spec) {
    spec.validate();
    return downscale_detector_axis(sino, spec.d1, spec.d2, spec.aggregate, spec.angle_mode,
                                   /*axis_aligned=*/true);
}

Sinogram downscale_sparse_view(const Sinogram& sino, int d, Aggregate aggregate) {
    if (d < 1)
        throw std::invalid_argument("downscale: group size must be >= 1");
    return downscale_detector_axis(sino, 1, d, aggregate, AngleMode::pick_second,
                                   /*axis_aligned=*/false);
}

namespace {

// source coordinate for an output sample, centers aligned
double src_coord(int dst, int dst_size, int src_size) {
    return (dst + 0.5) * static_cast<double>(src_size) / dst_size - 0.5;
}

double sample_clamped(const Image& img, int i, int j) {
    i = std::clamp(i, 0, img.height - 1);
    j = std::clamp(j, 0, img.width - 1);
    return img.at(i, j);
}

// Keys cubic convolution kernel, a = -0.5 (Catmull-Rom)
double cubic_kernel(double x) {
    x = std::abs(x);
    if (x < 1.0)
        return 1.5 * x * x * x - 2.5 * x * x + 1.0;
    if (x < 2.0)
        return -0.5 * x * x * x + 2.5 * x * x - 4.0 * x + 2.0;
    return 0.0;
}

} // namespace

Image upscale_image(const Image& image, int target_size, Interp method) {
    if (image.height < 1 || image.width < 1)
        throw std::invalid_argument("upscale: empty image");
    if (target_size < std::max(image.height, image.width))
        throw std::invalid_argument("upscale: target smaller than source");

    Image out(target_size, target_size);
    for (int i = 0; i < target_size; ++i) {
        for (int j = 0; j < target_size; ++j) {
            double v = 0.0;
            switch (method) {
            case Interp::nearest: {
                const int si = static_cast<int>(static_cast<long long>(i) * image.height / target_size);
                const int sj = static_cast<int>(static_cast<long long>(j) * image.width / target_size);
                v = image.at(si, sj);
                break;
            }
            case Interp::bilinear: {
                const double y = src_coord(i, target_size, image.height);
                const double x = src_coord(j, target_size, image.width);
                const int i0 = static_cast<int>(std::floor(y));
                const int j0 = static_cast<int>(std::floor(x));
                const double fy = y - i0;
                const double fx = x - j0;
                v = (1 - fy) * ((1 - fx) * sample_clamped(image, i0, j0) +
                                fx * sample_clamped(image, i0, j0 + 1)) +
                    fy * ((1 - fx) * sample_clamped(image, i0 + 1, j0) +
                          fx * sample_clamped(image, i0 + 1, j0 + 1));
                break;
            }
            case Interp::bicubic: {
                const double y = src_coord(i, target_size, image.height);
                const double x = src_coord(j, target_size, image.width);
                const int i0 = static_cast<int>(std::floor(y));
                const int j0 = static_cast<int>(std::floor(x));
                for (int di = -1; di <= 2; ++di) {
                    const double wy = cubic_kernel(y - (i0 + di));
                    if (wy == 0.0)
                        continue;
                    double row = 0.0;
                    for (int dj = -1; dj <= 2; ++dj)
                        row += cubic_kernel(x - (j0 + dj)) * sample_clamped(image, i0 + di, j0 + dj);
                    v += wy * row;
                }
                v = std::max(v, 0.0); // cubic undershoot
                break;
            }
            }
            out.at(i, j) = v;
        }
    }
    return out;
}

Image gaussian_filter(const Image& image, double sigma) {
    if (!(sigma > 0.0))
        throw std::invalid_argument("gaussian_filter: sigma must be > 0");

    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(2 * radius + 1);
    double norm = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        kernel[k + radius] = std::exp(-0.5 * (k / sigma) * (k / sigma));
        norm += kernel[k + radius];
    }
    for (double& w : kernel)
        w /= norm;

    // reflect boundary: index -1 maps to 0, index n maps to n-1
    auto reflect = [](int idx, int n) {
        while (idx < 0 || idx >= n) {
            if (idx < 0)
                idx = -idx - 1;
            if (idx >= n)
                idx = 2 * n - idx - 1;
        }
        return idx;
    };

    Image tmp(image.height, image.width);
    for (int i = 0; i < image.height; ++i) {
        for (int j = 0; j < image.width; ++j) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k)
                acc += kernel[k + radius] * image.at(i, reflect(j + k, image.width));
            tmp.at(i, j) = acc;
        }
    }
    Image out(image.height, image.width);
    for (int i = 0; i < image.height; ++i) {
        for (int j = 0; j < image.width; ++j) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k)
                acc += kernel[k + radius] * tmp.at(reflect(i + k, image.height), j);
            out.at(i, j) = acc;
        }
    }
    return out;
}

} // namespace qtomo
