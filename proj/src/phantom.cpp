#include "qtomo/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace qtomo {
namespace {

struct Ellipse {
    double intensity; // additive contribution
    double a, b;      // semi-axes
    double x0, y0;    // center
    double phi_deg;   // rotation, degrees CCW
};

// Contrast-enhanced Shepp-Logan table (Toft's variant). The interior
// reads 0.2, the ventricles cancel to 0 and the skull ring is 1.0,
// which keeps structure visible after thresholding or ranking.
constexpr Ellipse kSheppLogan[10] = {
    { 1.0, 0.6900, 0.9200,  0.00,  0.0000,   0.0},
    {-0.8, 0.6624, 0.8740,  0.00, -0.0184,   0.0},
    {-0.2, 0.1100, 0.3100,  0.22,  0.0000, -18.0},
    {-0.2, 0.1600, 0.4100, -0.22,  0.0000,  18.0},
    { 0.1, 0.2100, 0.2500,  0.00,  0.3500,   0.0},
    { 0.1, 0.0460, 0.0460,  0.00,  0.1000,   0.0},
    { 0.1, 0.0460, 0.0460,  0.00, -0.1000,   0.0},
    { 0.1, 0.0460, 0.0230, -0.08, -0.6050,   0.0},
    { 0.1, 0.0230, 0.0230,  0.00, -0.6060,   0.0},
    { 0.1, 0.0230, 0.0460,  0.06, -0.6050,   0.0},
};

double ellipse_sum(double x, double y) {
    double sum = 0.0;
    for (const Ellipse& e : kSheppLogan) {
        const double phi = e.phi_deg * M_PI / 180.0;
        const double dx = x - e.x0;
        const double dy = y - e.y0;
        const double u = dx * std::cos(phi) + dy * std::sin(phi);
        const double v = -dx * std::sin(phi) + dy * std::cos(phi);
        if ((u * u) / (e.a * e.a) + (v * v) / (e.b * e.b) <= 1.0)
            sum += e.intensity;
    }
    return sum;
}

} // namespace

Image generate_shepp_logan(int size, const PhantomMode& mode) {
    if (size < 4)
        throw std::invalid_argument("generate_shepp_logan: size must be >= 4");
    if (mode.kind == PhantomMode::Kind::integer_levels && mode.levels < 2)
        throw std::invalid_argument("generate_shepp_logan: integer mode needs k >= 2");

    Image img(size, size);
    std::vector<double> sums(img.pixel_count());
    const double scale = 2.0 / size;
    for (int i = 0; i < size; ++i) {
        for (int j = 0; j < size; ++j) {
            // pixel (i,j) centered at (j - size/2 + 0.5, size/2 - i - 0.5)
            const double x = (j - size / 2.0 + 0.5) * scale;
            const double y = (size / 2.0 - i - 0.5) * scale;
            sums[static_cast<size_t>(i) * size + j] = ellipse_sum(x, y);
        }
    }

    if (mode.kind == PhantomMode::Kind::binary) {
        for (size_t k = 0; k < sums.size(); ++k)
            img.values[k] = sums[k] > 1e-9 ? 1.0 : 0.0;
        img.levels = std::vector<double>{0.0, 1.0};
        return img;
    }

    // Rank the distinct intensity sums (merged within 1e-9 to absorb
    // float dust from cancelling table entries), clamp rank to k-1.
    std::vector<double> distinct = sums;
    std::sort(distinct.begin(), distinct.end());
    std::vector<double> reps;
    for (double s : distinct) {
        if (reps.empty() || s - reps.back() > 1e-9)
            reps.push_back(s);
    }
    const int kmax = mode.levels - 1;
    for (size_t k = 0; k < sums.size(); ++k) {
        auto it = std::upper_bound(reps.begin(), reps.end(), sums[k] + 1e-12);
        int rank = static_cast<int>(it - reps.begin()) - 1;
        img.values[k] = static_cast<double>(std::min(rank, kmax));
    }
    std::vector<double> lv;
    for (int l = 0; l < mode.levels; ++l)
        lv.push_back(static_cast<double>(l));
    img.levels = lv;
    return img;
}

} // namespace qtomo
