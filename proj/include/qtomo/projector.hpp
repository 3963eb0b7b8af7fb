#pragma once

#include "qtomo/geometry.hpp"
#include "qtomo/image.hpp"

#include <span>
#include <vector>

namespace qtomo {

/// One pixel crossed by a ray, with the exact intersection length.
struct RayWeight {
    int pixel = 0;   // row-major index into the image
    double weight = 0.0;
};

/// Exact intersection lengths (Siddon traversal) of the ray through the
/// given detector-bin center with each unit pixel of the image grid.
/// Entries are ordered by ascending pixel index; all weights are > 0.
std::vector<RayWeight> ray_weights(const Geometry& geometry, int angle_index,
                                   int detector_index);

/// Precomputed ray weights for every (angle, detector) pair of a geometry.
/// Rays and angles are independent, so construction could be parallel; the
/// flattened layout is assembled by index either way.
class RayTable {
public:
    explicit RayTable(Geometry geometry);

    const Geometry& geometry() const { return geometry_; }
    std::span<const RayWeight> ray(int angle_index, int detector_index) const {
        const size_t r = static_cast<size_t>(angle_index) * geometry_.detectors + detector_index;
        return {weights_.data() + offsets_[r], offsets_[r + 1] - offsets_[r]};
    }

private:
    Geometry geometry_;
    std::vector<size_t> offsets_; // rays + 1 entries
    std::vector<RayWeight> weights_;
};

/// Parallel-beam Radon transform: values(theta, s) = sum_ij c_ij I_ij.
Sinogram radon(const Image& image, const Geometry& geometry);
Sinogram radon(const Image& image, const RayTable& table);

/// Radon transform of the image with the region's pixels set to zero.
Sinogram zero_masked_sinogram(const Image& image, const Region& region,
                              const Geometry& geometry);
Sinogram zero_masked_sinogram(const Image& image, const Region& region,
                              const RayTable& table);

/// D = P - Pz, the region's isolated contribution to the measurements.
DifferenceSinogram region_contribution(const Sinogram& p, const Sinogram& pz);

} // namespace qtomo
