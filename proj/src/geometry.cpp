#include "qtomo/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qtomo {

void Geometry::validate() const {
    if (image_size < 1)
        throw std::invalid_argument("geometry: image_size must be >= 1");
    if (detectors < 1)
        throw std::invalid_argument("geometry: detectors must be >= 1");
    if (!(detector_spacing > 0.0))
        throw std::invalid_argument("geometry: detector_spacing must be > 0");
    if (angles.empty())
        throw std::invalid_argument("geometry: empty angle list");
    for (size_t k = 0; k < angles.size(); ++k) {
        if (!(angles[k] >= 0.0 && angles[k] < 180.0))
            throw std::invalid_argument("geometry: angle " + std::to_string(angles[k]) +
                                        " outside [0, 180)");
        if (k > 0 && !(angles[k] > angles[k - 1]))
            throw std::invalid_argument("geometry: angles must be strictly increasing");
    }
}

std::vector<double> uniform_angles(int n) {
    if (n < 1)
        throw std::invalid_argument("uniform_angles: n must be >= 1");
    std::vector<double> a(n);
    for (int i = 0; i < n; ++i)
        a[i] = 180.0 * i / n;
    return a;
}

void Sinogram::validate() const {
    geometry.validate();
    if (values.size() != static_cast<size_t>(geometry.angles.size()) * geometry.detectors)
        throw std::invalid_argument("sinogram: values shape mismatch");
    for (double v : values) {
        if (!std::isfinite(v))
            throw std::invalid_argument("sinogram: non-finite value");
    }
    if (!(path_scale > 0.0))
        throw std::invalid_argument("sinogram: path_scale must be > 0");
}

void validate_region_in(const Region& r, int image_height, int image_width) {
    if (r.height < 1 || r.width < 1)
        throw std::invalid_argument("region: empty region");
    if (r.row0 < 0 || r.col0 < 0 || r.row0 + r.height > image_height ||
        r.col0 + r.width > image_width)
        throw std::invalid_argument("region: outside image bounds");
}

} // namespace qtomo
