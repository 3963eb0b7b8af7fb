#include "qtomo/projector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qtomo {
namespace {

constexpr double kParallelEps = 1e-12;
constexpr double kSegmentEps = 1e-12;

// Clip the ray parameter interval against one slab. A ray running
// parallel to the slab intersects iff its coordinate lies strictly
// inside (grazing the boundary contributes zero area).
bool clip_slab(double p, double v, double lo, double hi, double& tmin, double& tmax) {
    if (std::abs(v) < kParallelEps)
        return p > lo && p < hi;
    double ta = (lo - p) / v;
    double tb = (hi - p) / v;
    if (ta > tb)
        std::swap(ta, tb);
    tmin = std::max(tmin, ta);
    tmax = std::min(tmax, tb);
    return true;
}

void check_ray_indices(const Geometry& g, int angle_index, int detector_index) {
    if (angle_index < 0 || angle_index >= static_cast<int>(g.angles.size()))
        throw std::out_of_range("ray_weights: angle index out of range");
    if (detector_index < 0 || detector_index >= g.detectors)
        throw std::out_of_range("ray_weights: detector index out of range");
}

} // namespace

std::vector<RayWeight> ray_weights(const Geometry& geometry, int angle_index,
                                   int detector_index) {
    geometry.validate();
    check_ray_indices(geometry, angle_index, detector_index);

    const int n = geometry.image_size;
    const double theta = geometry.angles[angle_index] * M_PI / 180.0;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    // Detector axis u = (cos, sin) through the origin; ray direction
    // v = (-sin, cos), so angle 0 sends rays along image columns.
    const double det = (detector_index - geometry.detectors / 2.0 + 0.5) * geometry.detector_spacing;
    const double px = det * c;
    const double py = det * s;
    const double vx = -s;
    const double vy = c;
    const double half = n / 2.0;

    double tmin = -std::numeric_limits<double>::infinity();
    double tmax = std::numeric_limits<double>::infinity();
    if (!clip_slab(px, vx, -half, half, tmin, tmax))
        return {};
    if (!clip_slab(py, vy, -half, half, tmin, tmax))
        return {};
    if (!(tmin < tmax))
        return {};

    std::vector<double> ts;
    ts.reserve(2 * n + 4);
    ts.push_back(tmin);
    ts.push_back(tmax);
    if (std::abs(vx) >= kParallelEps) {
        for (int k = 0; k <= n; ++k) {
            const double t = (-half + k - px) / vx;
            if (t > tmin && t < tmax)
                ts.push_back(t);
        }
    }
    if (std::abs(vy) >= kParallelEps) {
        for (int k = 0; k <= n; ++k) {
            const double t = (-half + k - py) / vy;
            if (t > tmin && t < tmax)
                ts.push_back(t);
        }
    }
    std::sort(ts.begin(), ts.end());

    std::vector<RayWeight> out;
    out.reserve(2 * n);
    for (size_t k = 0; k + 1 < ts.size(); ++k) {
        const double len = ts[k + 1] - ts[k];
        if (len <= kSegmentEps)
            continue;
        const double tm = 0.5 * (ts[k] + ts[k + 1]);
        const double x = px + tm * vx;
        const double y = py + tm * vy;
        int j = static_cast<int>(std::floor(x + half));
        int i = static_cast<int>(std::floor(half - y));
        j = std::clamp(j, 0, n - 1);
        i = std::clamp(i, 0, n - 1);
        const int pixel = i * n + j;
        if (!out.empty() && out.back().pixel == pixel)
            out.back().weight += len;
        else
            out.push_back({pixel, len});
    }
    std::sort(out.begin(), out.end(),
              [](const RayWeight& a, const RayWeight& b) { return a.pixel < b.pixel; });
    // a ray crosses a convex pixel in a single interval; collapse any
    // split runs left over from near-tangent crossings
    std::vector<RayWeight> merged;
    merged.reserve(out.size());
    for (const RayWeight& w : out) {
        if (!merged.empty() && merged.back().pixel == w.pixel)
            merged.back().weight += w.weight;
        else
            merged.push_back(w);
    }
    return merged;
}

RayTable::RayTable(Geometry geometry) : geometry_(std::move(geometry)) {
    geometry_.validate();
    const size_t rays = geometry_.angles.size() * static_cast<size_t>(geometry_.detectors);
    offsets_.assign(rays + 1, 0);
    for (size_t a = 0; a < geometry_.angles.size(); ++a) {
        for (int d = 0; d < geometry_.detectors; ++d) {
            auto w = ray_weights(geometry_, static_cast<int>(a), d);
            weights_.insert(weights_.end(), w.begin(), w.end());
            offsets_[a * geometry_.detectors + d + 1] = weights_.size();
        }
    }
}

namespace {

void check_image_matches(const Image& image, const Geometry& g) {
    if (image.height != g.image_size || image.width != g.image_size)
        throw std::invalid_argument("radon: image size does not match geometry");
}

} // namespace

Sinogram radon(const Image& image, const RayTable& table) {
    check_image_matches(image, table.geometry());
    Sinogram sino(table.geometry());
    const int nd = sino.n_detectors();
    for (int a = 0; a < sino.n_angles(); ++a) {
        for (int d = 0; d < nd; ++d) {
            double acc = 0.0;
            for (const RayWeight& w : table.ray(a, d))
                acc += w.weight * image.values[w.pixel];
            sino.at(a, d) = acc;
        }
    }
    return sino;
}

Sinogram radon(const Image& image, const Geometry& geometry) {
    check_image_matches(image, geometry);
    Sinogram sino(geometry);
    const int nd = sino.n_detectors();
    for (int a = 0; a < sino.n_angles(); ++a) {
        for (int d = 0; d < nd; ++d) {
            double acc = 0.0;
            for (const RayWeight& w : ray_weights(geometry, a, d))
                acc += w.weight * image.values[w.pixel];
            sino.at(a, d) = acc;
        }
    }
    return sino;
}

namespace {

Image masked_copy(const Image& image, const Region& region) {
    validate_region_in(region, image.height, image.width);
    Image masked = image;
    for (int i = region.row0; i < region.row0 + region.height; ++i)
        for (int j = region.col0; j < region.col0 + region.width; ++j)
            masked.at(i, j) = 0.0;
    masked.levels.reset();
    return masked;
}

} // namespace

Sinogram zero_masked_sinogram(const Image& image, const Region& region,
                              const Geometry& geometry) {
    return radon(masked_copy(image, region), geometry);
}

Sinogram zero_masked_sinogram(const Image& image, const Region& region,
                              const RayTable& table) {
    return radon(masked_copy(image, region), table);
}

DifferenceSinogram region_contribution(const Sinogram& p, const Sinogram& pz) {
    if (!(p.geometry == pz.geometry))
        throw std::invalid_argument("region_contribution: geometry mismatch");
    if (p.path_scale != pz.path_scale)
        throw std::invalid_argument("region_contribution: path_scale mismatch");
    DifferenceSinogram d;
    d.geometry = p.geometry;
    d.path_scale = p.path_scale;
    d.values.resize(p.values.size());
    for (size_t k = 0; k < p.values.size(); ++k)
        d.values[k] = p.values[k] - pz.values[k];
    return d;
}

} // namespace qtomo
