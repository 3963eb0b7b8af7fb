#pragma once

#include "qtomo/image.hpp"

namespace qtomo {

/// How the summed Shepp-Logan ellipse intensities are discretized.
struct PhantomMode {
    enum class Kind { binary, integer_levels };
    Kind kind = Kind::binary;
    int levels = 2; // k for integer mode, values end up in {0,...,k-1}

    static PhantomMode binary() { return {Kind::binary, 2}; }
    static PhantomMode integer_levels(int k) { return {Kind::integer_levels, k}; }
};

/// Deterministic Shepp-Logan test image from the contrast-enhanced
/// ten-ellipse table, sampled at pixel centers on [-1,1]^2.
///
/// binary: 1 wherever the ellipse sum is positive. integer_levels(k):
/// distinct intensity sums are ranked ascending and the rank is clamped
/// to {0,...,k-1}, so the background is always level 0.
Image generate_shepp_logan(int size, const PhantomMode& mode);

} // namespace qtomo
