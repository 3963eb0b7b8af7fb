#pragma once

#include <vector>

namespace qtomo {

/// Parallel-beam acquisition geometry. Angle 0 projects along image
/// columns; the detector axis is centered on the rotation axis with a
/// fixed spacing of one pixel width. Angles are degrees in [0, 180),
/// strictly increasing.
struct Geometry {
    int image_size = 0;
    std::vector<double> angles;
    int detectors = 0;
    double detector_spacing = 1.0;

    void validate() const;
    bool operator==(const Geometry&) const = default;
};

/// n angles uniform on [0, 180), endpoint excluded.
std::vector<double> uniform_angles(int n);

/// Line-integral matrix indexed (angle, detector). `path_scale` records
/// the cumulative path-length correction already applied to the values
/// (1 for a sinogram straight out of the projector).
struct Sinogram {
    Geometry geometry;
    std::vector<double> values;
    double path_scale = 1.0;

    Sinogram() = default;
    explicit Sinogram(Geometry g, double fill = 0.0)
        : geometry(std::move(g)),
          values(static_cast<size_t>(geometry.angles.size()) * geometry.detectors, fill) {}

    int n_angles() const { return static_cast<int>(geometry.angles.size()); }
    int n_detectors() const { return geometry.detectors; }
    double& at(int a, int d) { return values[static_cast<size_t>(a) * geometry.detectors + d]; }
    double at(int a, int d) const { return values[static_cast<size_t>(a) * geometry.detectors + d]; }

    void validate() const;
};

/// Isolated contribution of one region to the measurements: D = P - Pz.
/// Only region_contribution() constructs these.
struct DifferenceSinogram {
    Geometry geometry;
    std::vector<double> values;
    double path_scale = 1.0;

    double at(int a, int d) const { return values[static_cast<size_t>(a) * geometry.detectors + d]; }
};

/// Axis-aligned pixel block fully inside the image.
struct Region {
    int row0 = 0;
    int col0 = 0;
    int height = 0;
    int width = 0;

    bool contains(int i, int j) const {
        return i >= row0 && i < row0 + height && j >= col0 && j < col0 + width;
    }
    bool operator==(const Region&) const = default;
};

void validate_region_in(const Region& r, int image_height, int image_width);

} // namespace qtomo
