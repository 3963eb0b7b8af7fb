#include "qtomo/projector.hpp"

#include "qtomo/phantom.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <numeric>
#include <random>

using namespace qtomo;
using namespace qtomo::testing;

namespace {

Geometry square_geometry(int n, int angles) {
    return Geometry{n, uniform_angles(angles), n, 1.0};
}

} // namespace

TEST_CASE("axis-aligned ray crosses one column with unit weights") {
    const Geometry g = square_geometry(2, 1); // single angle: 0 degrees
    const auto w = ray_weights(g, 0, 0);      // bin centered over column 0
    REQUIRE(w.size() == 2);
    CHECK(w[0].pixel == 0);
    CHECK(w[0].weight == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(w[1].pixel == 2);
    CHECK(w[1].weight == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("diagonal ray through a single pixel has weight sqrt(2)") {
    Geometry g{1, {45.0}, 1, 1.0};
    const auto w = ray_weights(g, 0, 0);
    REQUIRE(w.size() == 1);
    CHECK(w[0].pixel == 0);
    CHECK(w[0].weight == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("ray weights match the clipping oracle at 30 degrees") {
    Geometry g{4, {30.0}, 4, 1.0};
    for (int d = 0; d < 4; ++d) {
        const auto oracle = ray_weights_oracle(g, 0, d);
        std::vector<double> mine(16, 0.0);
        for (const RayWeight& w : ray_weights(g, 0, d))
            mine[w.pixel] = w.weight;
        for (int p = 0; p < 16; ++p)
            CHECK(mine[p] == doctest::Approx(oracle[p]).epsilon(1e-12));
    }
}

TEST_CASE("ray weights are positive and bounded by sqrt(2)") {
    const Geometry g = square_geometry(8, 12);
    for (int a = 0; a < 12; ++a) {
        for (int d = 0; d < 8; ++d) {
            for (const RayWeight& w : ray_weights(g, a, d)) {
                CHECK(w.weight > 0.0);
                CHECK(w.weight <= std::sqrt(2.0) + 1e-9);
            }
        }
    }
}

TEST_CASE("radon of the zero image is zero") {
    const Geometry g = square_geometry(8, 6);
    const Sinogram s = radon(Image(8, 8, 0.0), g);
    for (double v : s.values)
        CHECK(v == 0.0);
}

TEST_CASE("radon of all-ones 2x2 at angle 0 gives column sums") {
    Geometry g{2, {0.0}, 2, 1.0};
    const Sinogram s = radon(Image(2, 2, 1.0), g);
    CHECK(s.at(0, 0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(s.at(0, 1) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("radon agrees with the brute-force clipping oracle") {
    std::mt19937_64 rng(11);
    const Geometry g = square_geometry(8, 10);
    const Image img = random_real_image(rng, 8);
    const Sinogram s = radon(img, g);
    for (int a = 0; a < 10; ++a) {
        for (int d = 0; d < 8; ++d) {
            const auto oracle = ray_weights_oracle(g, a, d);
            double expected = 0.0;
            for (size_t p = 0; p < oracle.size(); ++p)
                expected += oracle[p] * img.values[p];
            CHECK(s.at(a, d) == doctest::Approx(expected).epsilon(1e-9));
        }
    }
}

TEST_CASE("radon is linear") {
    std::mt19937_64 rng(5);
    const Geometry g = square_geometry(8, 9);
    const Image a = random_real_image(rng, 8);
    const Image b = random_real_image(rng, 8);
    Image combo(8, 8);
    for (size_t k = 0; k < combo.values.size(); ++k)
        combo.values[k] = 2.0 * a.values[k] + 3.0 * b.values[k];
    const Sinogram sa = radon(a, g);
    const Sinogram sb = radon(b, g);
    const Sinogram sc = radon(combo, g);
    for (size_t k = 0; k < sc.values.size(); ++k)
        CHECK(sc.values[k] ==
              doctest::Approx(2.0 * sa.values[k] + 3.0 * sb.values[k]).epsilon(1e-9));
}

TEST_CASE("per-angle mass stays within 2% for inscribed images") {
    const Image img = generate_shepp_logan(32, PhantomMode::binary());
    const Geometry g = square_geometry(32, 16);
    const Sinogram s = radon(img, g);
    const double mass = std::accumulate(img.values.begin(), img.values.end(), 0.0);
    for (int a = 0; a < s.n_angles(); ++a) {
        double row = 0.0;
        for (int d = 0; d < s.n_detectors(); ++d)
            row += s.at(a, d);
        CHECK(row == doctest::Approx(mass).epsilon(0.02));
    }
}

TEST_CASE("centrally symmetric images give detector-symmetric sinograms") {
    std::mt19937_64 rng(17);
    const int n = 8;
    Image img = random_real_image(rng, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i * n + j > (n - 1 - i) * n + (n - 1 - j))
                img.at(i, j) = img.at(n - 1 - i, n - 1 - j);
    const Geometry g = square_geometry(n, 7);
    const Sinogram s = radon(img, g);
    for (int a = 0; a < s.n_angles(); ++a)
        for (int d = 0; d < n; ++d)
            CHECK(s.at(a, d) == doctest::Approx(s.at(a, n - 1 - d)).epsilon(1e-9));
}

TEST_CASE("zero-masking the whole image gives a zero sinogram") {
    const Image img = generate_shepp_logan(16, PhantomMode::binary());
    const Geometry g = square_geometry(16, 8);
    const Sinogram s = zero_masked_sinogram(img, Region{0, 0, 16, 16}, g);
    for (double v : s.values)
        CHECK(v == 0.0);
}

TEST_CASE("masking an all-zero region changes nothing") {
    const Image img = generate_shepp_logan(16, PhantomMode::binary());
    const Geometry g = square_geometry(16, 8);
    const Sinogram full = radon(img, g);
    const Sinogram masked = zero_masked_sinogram(img, Region{0, 0, 2, 2}, g); // empty corner
    for (size_t k = 0; k < full.values.size(); ++k)
        CHECK(masked.values[k] == full.values[k]);
}

TEST_CASE("zero-masked sinogram equals radon of the masked copy") {
    std::mt19937_64 rng(23);
    const Image img = random_real_image(rng, 8);
    const Geometry g = square_geometry(8, 6);
    const Region region{0, 0, 4, 4};
    Image masked = img;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            masked.at(i, j) = 0.0;
    const Sinogram a = zero_masked_sinogram(img, region, g);
    const Sinogram b = radon(masked, g);
    for (size_t k = 0; k < a.values.size(); ++k)
        CHECK(a.values[k] == b.values[k]);
}

TEST_CASE("region contribution is P - Pz and matches radon linearity") {
    std::mt19937_64 rng(29);
    const Image img = random_real_image(rng, 8);
    const Geometry g = square_geometry(8, 6);
    const Region region{2, 3, 4, 4};
    const Sinogram p = radon(img, g);
    const Sinogram pz = zero_masked_sinogram(img, region, g);
    const DifferenceSinogram d = region_contribution(p, pz);

    SUBCASE("P == Pz gives zeros") {
        const DifferenceSinogram zero = region_contribution(p, p);
        for (double v : zero.values)
            CHECK(v == 0.0);
    }
    SUBCASE("difference equals radon of the region-only image") {
        Image region_only(8, 8, 0.0);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                region_only.at(2 + i, 3 + j) = img.at(2 + i, 3 + j);
        const Sinogram iso = radon(region_only, g);
        for (size_t k = 0; k < d.values.size(); ++k)
            CHECK(d.values[k] == doctest::Approx(iso.values[k]).epsilon(1e-9));
    }
    SUBCASE("consistency: radon = masked + region-only") {
        Image region_only(8, 8, 0.0);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                region_only.at(2 + i, 3 + j) = img.at(2 + i, 3 + j);
        const Sinogram iso = radon(region_only, g);
        for (size_t k = 0; k < p.values.size(); ++k)
            CHECK(p.values[k] == doctest::Approx(pz.values[k] + iso.values[k]).epsilon(1e-9));
    }
}

TEST_CASE("mismatched inputs are rejected") {
    const Geometry g = square_geometry(8, 4);
    CHECK_THROWS_AS(radon(Image(4, 4, 0.0), g), std::invalid_argument);
    CHECK_THROWS_AS(zero_masked_sinogram(Image(8, 8, 0.0), Region{6, 6, 4, 4}, g),
                    std::invalid_argument);

    Sinogram a{square_geometry(8, 4)};
    Sinogram b{square_geometry(8, 5)};
    CHECK_THROWS_AS(region_contribution(a, b), std::invalid_argument);
    Sinogram c = a;
    c.path_scale = 0.5;
    CHECK_THROWS_AS(region_contribution(a, c), std::invalid_argument);
}

TEST_CASE("geometry validation") {
    CHECK_THROWS_AS(Geometry({8, {10.0, 5.0}, 8, 1.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(Geometry({8, {0.0, 180.0}, 8, 1.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(Geometry({8, {0.0}, 0, 1.0}).validate(), std::invalid_argument);
    CHECK_NOTHROW(Geometry({8, uniform_angles(8), 8, 1.0}).validate());
}

TEST_CASE("ray table matches per-ray computation") {
    const Geometry g = square_geometry(6, 5);
    const RayTable table(g);
    for (int a = 0; a < 5; ++a) {
        for (int d = 0; d < 6; ++d) {
            const auto direct = ray_weights(g, a, d);
            const auto cached = table.ray(a, d);
            REQUIRE(cached.size() == direct.size());
            for (size_t k = 0; k < direct.size(); ++k) {
                CHECK(cached[k].pixel == direct[k].pixel);
                CHECK(cached[k].weight == direct[k].weight);
            }
        }
    }
}
