#pragma once

#include "qtomo/geometry.hpp"
#include "qtomo/image.hpp"

namespace qtomo {

enum class Aggregate { mean, max, min };

/// How the reduced angle list is labeled when d1 angles collapse to one.
enum class AngleMode {
    pick_second,    // keep the last (highest) angle of each group
    mean_projection // assign the group's mean angle
};

struct DownscaleSpec {
    int d1 = 1; // angular group size
    int d2 = 1; // detector group size
    Aggregate aggregate = Aggregate::mean;
    AngleMode angle_mode = AngleMode::pick_second;

    void validate() const;
};

/// Block-reduce each d1 x d2 patch of a full-view sinogram and apply the
/// 1/d2 path-length correction. Detector groups must tile the axis
/// without straddling the rotation axis (even detector count with
/// detectors/2 divisible by d2 when d2 > 1).
Sinogram downscale_full_view(const Sinogram& sino, const DownscaleSpec& spec);

/// Block-reduce each 1 x d detector patch of a sparse-view sinogram,
/// keeping every projection angle, with the 1/d path correction.
Sinogram downscale_sparse_view(const Sinogram& sino, int d, Aggregate aggregate);

enum class Interp { nearest, bilinear, bicubic };

/// Upscale to target_size x target_size. Level metadata is dropped; the
/// output carries real values (bicubic undershoot is clamped at zero).
Image upscale_image(const Image& image, int target_size, Interp method);

/// Separable Gaussian blur, kernel truncated at radius ceil(3*sigma),
/// reflect boundary handling.
Image gaussian_filter(const Image& image, double sigma);

} // namespace qtomo
