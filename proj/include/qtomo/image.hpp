#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace qtomo {

/// Rectangular grid of non-negative pixel intensities, row-major.
/// `levels`, when declared, is the sorted set of discrete values the
/// image is allowed to contain (e.g. {0,1} for a binary phantom).
struct Image {
    int height = 0;
    int width = 0;
    std::vector<double> values;
    std::optional<std::vector<double>> levels;

    Image() = default;
    Image(int h, int w, double fill = 0.0)
        : height(h), width(w), values(static_cast<size_t>(h) * static_cast<size_t>(w), fill) {}

    double& at(int i, int j) { return values[static_cast<size_t>(i) * width + j]; }
    double at(int i, int j) const { return values[static_cast<size_t>(i) * width + j]; }

    size_t pixel_count() const { return values.size(); }
    bool same_shape(const Image& other) const {
        return height == other.height && width == other.width;
    }

    /// Throws std::invalid_argument on violated invariants
    /// (size mismatch, negative values, value outside declared levels).
    void validate() const;
};

/// Snap every value to the nearest declared level; exact midpoints
/// resolve toward the lower level. The result declares `levels`.
Image quantize_to_levels(const Image& img, const std::vector<double>& levels);

} // namespace qtomo
