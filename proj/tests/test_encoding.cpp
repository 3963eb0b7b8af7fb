#include "qtomo/encoding.hpp"

#include <doctest.h>

#include <stdexcept>

#include <set>

using namespace qtomo;

TEST_CASE("radix2 weights are powers of two") {
    const auto w = EncodingSpec::radix2(3).basis_weights();
    CHECK(w == std::vector<double>{1.0, 2.0, 4.0});
    CHECK(EncodingSpec::radix2(3).affine_offset() == 0.0);
}

TEST_CASE("unit-step weights are all ones with zero offset") {
    const EncodingSpec spec = EncodingSpec::unit_step(3);
    CHECK(spec.basis_weights() == std::vector<double>{1.0, 1.0, 1.0});
    CHECK(spec.affine_offset() == 0.0);
    CHECK(spec.bits_per_pixel() == 3);
}

TEST_CASE("cumulative MAC folds alpha1 into an offset") {
    const EncodingSpec spec = EncodingSpec::mac_cumulative({1.0, 2.0, 3.0});
    CHECK(spec.affine_offset() == 1.0);
    CHECK(spec.basis_weights() == std::vector<double>{1.0, 1.0});
    CHECK(spec.bits_per_pixel() == 2);
}

TEST_CASE("direct MAC passes weights through") {
    const EncodingSpec spec = EncodingSpec::mac_direct({0.5});
    CHECK(spec.basis_weights() == std::vector<double>{0.5});
    CHECK(spec.affine_offset() == 0.0);
}

TEST_CASE("decode examples") {
    const uint8_t b11[] = {1, 1};
    CHECK(EncodingSpec::radix2(2).decode(b11) == 3.0);

    const uint8_t b110[] = {1, 1, 0};
    CHECK(EncodingSpec::unit_step(3).decode(b110) == 2.0);

    const uint8_t b1[] = {1};
    CHECK(EncodingSpec::mac_cumulative({0.5, 1.2}).decode(b1) ==
          doctest::Approx(1.2).epsilon(1e-12));
}

TEST_CASE("decode validates bit count") {
    const uint8_t bits[] = {1, 0, 1};
    CHECK_THROWS_AS(EncodingSpec::radix2(2).decode(bits), std::invalid_argument);
}

TEST_CASE("value ranges follow the encoding") {
    SUBCASE("radix2 spans [0, 2^m - 1]") {
        const auto levels = EncodingSpec::radix2(3).representable_levels();
        CHECK(levels.front() == 0.0);
        CHECK(levels.back() == 7.0);
        CHECK(levels.size() == 8);
    }
    SUBCASE("cumulative MAC spans [alpha_1, alpha_m]") {
        const EncodingSpec spec = EncodingSpec::mac_cumulative({0.5, 0.9, 1.7});
        for (uint8_t a : {0, 1}) {
            for (uint8_t b : {0, 1}) {
                const uint8_t bits[] = {a, b};
                const double v = spec.decode(bits);
                CHECK(v >= 0.5);
                CHECK(v <= 1.7);
            }
        }
    }
}

TEST_CASE("radix2 patterns are unique, unit-step patterns are not") {
    std::set<double> radix_values;
    for (uint8_t a : {0, 1})
        for (uint8_t b : {0, 1}) {
            const uint8_t bits[] = {a, b};
            radix_values.insert(EncodingSpec::radix2(2).decode(bits));
        }
    CHECK(radix_values.size() == 4);

    const auto unit_levels = EncodingSpec::unit_step(3).representable_levels();
    CHECK(unit_levels == std::vector<double>{0.0, 1.0, 2.0, 3.0}); // 8 patterns, 4 values
}

TEST_CASE("every representable level has an encoding that decodes back") {
    for (const EncodingSpec& spec :
         {EncodingSpec::radix2(3), EncodingSpec::unit_step(3),
          EncodingSpec::mac_cumulative({0.5, 0.9, 1.7})}) {
        for (double level : spec.representable_levels()) {
            const auto bits = spec.encode_value(level);
            CHECK(spec.decode(bits) == doctest::Approx(level).epsilon(1e-12));
        }
    }
}

TEST_CASE("invalid specs are rejected") {
    CHECK_THROWS_AS(EncodingSpec::mac_direct({}), std::invalid_argument);
    CHECK_THROWS_AS(EncodingSpec::mac_direct({1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(EncodingSpec::mac_cumulative({2.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(EncodingSpec::mac_cumulative({1.0}), std::invalid_argument);
    CHECK_THROWS_AS(EncodingSpec::mac_direct({-1.0}), std::invalid_argument);
    CHECK_THROWS_AS(EncodingSpec::radix2(0), std::invalid_argument);
}
