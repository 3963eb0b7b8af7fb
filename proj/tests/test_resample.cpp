#include "qtomo/resample.hpp"

#include "qtomo/phantom.hpp"
#include "qtomo/projector.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <random>

using namespace qtomo;
using namespace qtomo::testing;

namespace {

Sinogram make_sinogram(int angles, int detectors, double fill = 0.0) {
    Sinogram s{Geometry{detectors, uniform_angles(angles), detectors, 1.0}};
    for (double& v : s.values)
        v = fill;
    return s;
}

} // namespace

TEST_CASE("full-view downscale halves both axes and applies the 1/2 correction") {
    Sinogram s = make_sinogram(8, 8);
    for (size_t k = 0; k < s.values.size(); ++k)
        s.values[k] = static_cast<double>(k);
    DownscaleSpec spec{2, 2, Aggregate::mean, AngleMode::pick_second};
    const Sinogram out = downscale_full_view(s, spec);
    CHECK(out.n_angles() == 4);
    CHECK(out.n_detectors() == 4);
    CHECK(out.path_scale == 0.5);
    CHECK(out.geometry.image_size == 4);
    // angles: second of each pair
    for (int g = 0; g < 4; ++g)
        CHECK(out.geometry.angles[g] == s.geometry.angles[2 * g + 1]);
    // hand-checked patch: rows 0-1, detectors 0-1 -> mean of {0,1,8,9} * 1/2
    CHECK(out.at(0, 0) == doctest::Approx((0.0 + 1.0 + 8.0 + 9.0) / 4.0 * 0.5).epsilon(1e-12));
}

TEST_CASE("identity downscale spec returns the sinogram unchanged") {
    std::mt19937_64 rng(3);
    Sinogram s = make_sinogram(6, 8);
    for (double& v : s.values)
        v = static_cast<double>(rng() % 100);
    const Sinogram out = downscale_full_view(s, DownscaleSpec{});
    CHECK(out.values == s.values);
    CHECK(out.path_scale == s.path_scale);
    CHECK(out.geometry.angles == s.geometry.angles);
}

TEST_CASE("detector-axis reduction by hand on a 4x4 matrix") {
    Sinogram s = make_sinogram(4, 4);
    const double m[4][4] = {{1, 2, 3, 4}, {5, 6, 7, 8}, {9, 10, 11, 12}, {13, 14, 15, 16}};
    for (int a = 0; a < 4; ++a)
        for (int d = 0; d < 4; ++d)
            s.at(a, d) = m[a][d];
    DownscaleSpec spec{1, 2, Aggregate::mean, AngleMode::pick_second};
    const Sinogram out = downscale_full_view(s, spec);
    CHECK(out.n_angles() == 4);
    CHECK(out.n_detectors() == 2);
    for (int a = 0; a < 4; ++a) {
        CHECK(out.at(a, 0) == doctest::Approx((m[a][0] + m[a][1]) / 2.0 * 0.5).epsilon(1e-12));
        CHECK(out.at(a, 1) == doctest::Approx((m[a][2] + m[a][3]) / 2.0 * 0.5).epsilon(1e-12));
    }
}

TEST_CASE("mean_projection assigns group-mean angles") {
    Sinogram s = make_sinogram(8, 4, 1.0);
    DownscaleSpec spec{2, 1, Aggregate::mean, AngleMode::mean_projection};
    const Sinogram out = downscale_full_view(s, spec);
    for (int g = 0; g < 4; ++g)
        CHECK(out.geometry.angles[g] ==
              doctest::Approx((s.geometry.angles[2 * g] + s.geometry.angles[2 * g + 1]) / 2.0));
}

TEST_CASE("non-divisible axes are rejected") {
    Sinogram s = make_sinogram(6, 8);
    CHECK_THROWS_AS(downscale_full_view(s, DownscaleSpec{4, 1, Aggregate::mean,
                                                         AngleMode::pick_second}),
                    std::invalid_argument);
    CHECK_THROWS_AS(downscale_full_view(s, DownscaleSpec{1, 3, Aggregate::mean,
                                                         AngleMode::pick_second}),
                    std::invalid_argument);
}

TEST_CASE("detector groups may not straddle the rotation axis") {
    // 12 detectors, groups of 4: the axis at bin boundary 6 falls inside
    // the middle group
    Sinogram s = make_sinogram(4, 12);
    CHECK_THROWS_AS(downscale_full_view(s, DownscaleSpec{1, 4, Aggregate::mean,
                                                         AngleMode::pick_second}),
                    std::invalid_argument);
    // odd detector counts put a bin center on the axis
    Sinogram odd = make_sinogram(4, 9);
    odd.geometry.image_size = 9;
    CHECK_THROWS_AS(downscale_full_view(odd, DownscaleSpec{1, 3, Aggregate::mean,
                                                           AngleMode::pick_second}),
                    std::invalid_argument);
}

TEST_CASE("sparse-view downscale keeps every angle") {
    Sinogram s = make_sinogram(5, 8, 3.0);
    const Sinogram out = downscale_sparse_view(s, 2, Aggregate::mean);
    CHECK(out.n_angles() == 5);
    CHECK(out.n_detectors() == 4);
    CHECK(out.path_scale == 0.5);
    CHECK(out.geometry.angles == s.geometry.angles);
    for (double v : out.values)
        CHECK(v == doctest::Approx(1.5).epsilon(1e-12)); // mean of equal values, halved

    CHECK(downscale_sparse_view(s, 1, Aggregate::mean).values == s.values);
    CHECK_THROWS_AS(downscale_sparse_view(s, 3, Aggregate::mean), std::invalid_argument);
}

TEST_CASE("aggregation bounds hold for mean pooling") {
    std::mt19937_64 rng(7);
    Sinogram s = make_sinogram(4, 8);
    for (double& v : s.values)
        v = static_cast<double>(rng() % 1000) / 10.0;
    DownscaleSpec spec{2, 2, Aggregate::mean, AngleMode::pick_second};
    const Sinogram out = downscale_full_view(s, spec);
    for (int a = 0; a < out.n_angles(); ++a) {
        for (int d = 0; d < out.n_detectors(); ++d) {
            double lo = 1e300, hi = -1e300;
            for (int da = 0; da < 2; ++da) {
                for (int dd = 0; dd < 2; ++dd) {
                    lo = std::min(lo, s.at(2 * a + da, 2 * d + dd));
                    hi = std::max(hi, s.at(2 * a + da, 2 * d + dd));
                }
            }
            CHECK(out.at(a, d) >= lo * 0.5 - 1e-12);
            CHECK(out.at(a, d) <= hi * 0.5 + 1e-12);
        }
    }
}

TEST_CASE("path_scale compounds across reductions") {
    Sinogram s = make_sinogram(8, 16, 1.0);
    const Sinogram once =
        downscale_full_view(s, DownscaleSpec{2, 2, Aggregate::mean, AngleMode::pick_second});
    CHECK(once.path_scale == 0.5);
    const Sinogram twice = downscale_sparse_view(once, 2, Aggregate::mean);
    CHECK(twice.path_scale == 0.25);
}

TEST_CASE("path-length correction approximates the downscaled projection") {
    // centered disk, well inside the inscribed circle
    const int n = 64;
    Image disk(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double x = j - n / 2.0 + 0.5;
            const double y = n / 2.0 - i - 0.5;
            disk.at(i, j) = (x * x + y * y <= 24.0 * 24.0) ? 1.0 : 0.0;
        }
    }
    const Geometry g{n, uniform_angles(n), n, 1.0};
    const Sinogram reduced =
        downscale_full_view(radon(disk, g), DownscaleSpec{2, 2, Aggregate::mean,
                                                          AngleMode::pick_second});

    Image half(n / 2, n / 2);
    for (int i = 0; i < n / 2; ++i)
        for (int j = 0; j < n / 2; ++j)
            half.at(i, j) = (disk.at(2 * i, 2 * j) + disk.at(2 * i, 2 * j + 1) +
                             disk.at(2 * i + 1, 2 * j) + disk.at(2 * i + 1, 2 * j + 1)) /
                            4.0;
    const Sinogram direct = radon(half, reduced.geometry);

    double num = 0.0, den = 0.0;
    for (size_t k = 0; k < direct.values.size(); ++k) {
        const double d = direct.values[k] - reduced.values[k];
        num += d * d;
        den += direct.values[k] * direct.values[k];
    }
    CHECK(std::sqrt(num / den) < 0.05);
}

TEST_CASE("nearest upscale replicates blocks") {
    Image img(2, 2);
    img.at(0, 0) = 1.0;
    img.at(0, 1) = 2.0;
    img.at(1, 0) = 3.0;
    img.at(1, 1) = 4.0;
    const Image up = upscale_image(img, 4, Interp::nearest);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(up.at(i, j) == img.at(i / 2, j / 2));
}

TEST_CASE("upscaling a constant image is constant for all methods") {
    const Image img(3, 3, 2.5);
    for (Interp m : {Interp::nearest, Interp::bilinear, Interp::bicubic}) {
        const Image up = upscale_image(img, 9, m);
        for (double v : up.values)
            CHECK(v == doctest::Approx(2.5).epsilon(1e-12));
    }
}

TEST_CASE("bilinear upscale matches the separable 1-D oracle") {
    const Image img = generate_shepp_logan(16, PhantomMode::binary());
    const int target = 32;
    const Image up = upscale_image(img, target, Interp::bilinear);

    // oracle: interpolate rows to 16x32, then columns to 32x32
    auto lerp_axis = [](const std::vector<double>& row, int src, int dst, int k) {
        const double x = (k + 0.5) * src / static_cast<double>(dst) - 0.5;
        const int j0 = static_cast<int>(std::floor(x));
        const double f = x - j0;
        const int a = std::clamp(j0, 0, src - 1);
        const int b = std::clamp(j0 + 1, 0, src - 1);
        return (1.0 - f) * row[a] + f * row[b];
    };
    std::vector<std::vector<double>> rows(16, std::vector<double>(target));
    for (int i = 0; i < 16; ++i) {
        std::vector<double> src(16);
        for (int j = 0; j < 16; ++j)
            src[j] = img.at(i, j);
        for (int j = 0; j < target; ++j)
            rows[i][j] = lerp_axis(src, 16, target, j);
    }
    for (int j = 0; j < target; ++j) {
        std::vector<double> col(16);
        for (int i = 0; i < 16; ++i)
            col[i] = rows[i][j];
        for (int i = 0; i < target; ++i)
            CHECK(up.at(i, j) == doctest::Approx(lerp_axis(col, 16, target, i)).epsilon(1e-9));
    }
}

TEST_CASE("upscale rejects shrinking") {
    CHECK_THROWS_AS(upscale_image(Image(8, 8, 0.0), 4, Interp::nearest), std::invalid_argument);
}

TEST_CASE("upscale drops level metadata") {
    Image img(2, 2, 1.0);
    img.levels = std::vector<double>{0.0, 1.0};
    CHECK_FALSE(upscale_image(img, 4, Interp::bilinear).levels.has_value());
}

TEST_CASE("gaussian filter leaves constants unchanged") {
    const Image img(7, 7, 3.25);
    const Image out = gaussian_filter(img, 1.0);
    for (double v : out.values)
        CHECK(v == doctest::Approx(3.25).epsilon(1e-12));
}

TEST_CASE("gaussian impulse response matches the kernel table") {
    Image img(9, 9, 0.0);
    img.at(4, 4) = 1.0;
    const double sigma = 1.0;
    const Image out = gaussian_filter(img, sigma);

    const int radius = 3; // ceil(3 * sigma)
    std::vector<double> k(2 * radius + 1);
    double norm = 0.0;
    for (int t = -radius; t <= radius; ++t) {
        k[t + radius] = std::exp(-0.5 * t * t / (sigma * sigma));
        norm += k[t + radius];
    }
    for (double& w : k)
        w /= norm;
    const double center = k[radius] * k[radius];
    CHECK(out.at(4, 4) == doctest::Approx(center).epsilon(1e-12));
    CHECK(out.at(4, 5) == doctest::Approx(k[radius] * k[radius + 1]).epsilon(1e-12));
}

TEST_CASE("gaussian preserves interior mass") {
    Image img(16, 16, 0.0);
    img.at(8, 8) = 5.0;
    img.at(7, 9) = 2.0;
    const Image out = gaussian_filter(img, 1.0);
    double before = 0.0, after = 0.0;
    for (size_t i = 0; i < img.values.size(); ++i) {
        before += img.values[i];
        after += out.values[i];
    }
    CHECK(after == doctest::Approx(before).epsilon(1e-6));
}

TEST_CASE("gaussian rejects non-positive sigma") {
    CHECK_THROWS_AS(gaussian_filter(Image(4, 4, 0.0), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(gaussian_filter(Image(4, 4, 0.0), -1.0), std::invalid_argument);
}
