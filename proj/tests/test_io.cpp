#include "qtomo/io.hpp"

#include "qtomo/errors.hpp"
#include "qtomo/phantom.hpp"
#include "qtomo/projector.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cstdio>
#include <fstream>

using namespace qtomo;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(std::string p) : path(std::move(p)) {}
    ~TempFile() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("text image round trip is exact") {
    TempFile f("/tmp/qtomo_io_zeros.img");
    const Image zeros(3, 3, 0.0);
    save_image(zeros, f.path);
    const Image back = load_image(f.path);
    CHECK(back.height == 3);
    CHECK(back.width == 3);
    CHECK(back.values == zeros.values);
}

TEST_CASE("generated phantom survives text and binary round trips bit-exactly") {
    const Image img = generate_shepp_logan(32, PhantomMode::integer_levels(4));
    SUBCASE("text") {
        TempFile f("/tmp/qtomo_io_phantom.img");
        save_image(img, f.path);
        CHECK(load_image(f.path).values == img.values);
    }
    SUBCASE("binary") {
        TempFile f("/tmp/qtomo_io_phantom.imgb");
        save_image(img, f.path);
        CHECK(load_image(f.path).values == img.values);
    }
}

TEST_CASE("full-precision values round trip through the text format") {
    Image img(2, 2);
    img.values = {0.1, 1.0 / 3.0, 2.0 / 7.0, 1e-17};
    TempFile f("/tmp/qtomo_io_precise.img");
    save_image(img, f.path);
    CHECK(load_image(f.path).values == img.values);
}

TEST_CASE("dimension mismatches are format errors") {
    TempFile f("/tmp/qtomo_io_bad.img");
    {
        std::ofstream out(f.path);
        out << "IMG 4 4\n";
        for (int k = 0; k < 15; ++k)
            out << "0 ";
    }
    CHECK_THROWS_AS(load_image(f.path), FormatError);

    {
        std::ofstream out(f.path);
        out << "IMG 2 2\n0 0 0 0 0\n"; // extra value
    }
    CHECK_THROWS_AS(load_image(f.path), FormatError);

    {
        std::ofstream out(f.path);
        out << "NOTIMG 2 2\n0 0 0 0\n";
    }
    CHECK_THROWS_AS(load_image(f.path), FormatError);
}

TEST_CASE("pgm export and import round trips binary data exactly") {
    const Image img = generate_shepp_logan(16, PhantomMode::binary());
    for (bool binary : {true, false}) {
        TempFile f("/tmp/qtomo_io_vis.pgm");
        export_pgm(img, f.path, binary);
        const Image back = import_pgm(f.path);
        REQUIRE(back.values.size() == img.values.size());
        for (size_t k = 0; k < img.values.size(); ++k)
            CHECK(back.values[k] == img.values[k]); // {0,1} maps to {0,255} and back
    }
}

TEST_CASE("pgm of a zero image round trips") {
    TempFile f("/tmp/qtomo_io_zero.pgm");
    export_pgm(Image(3, 3, 0.0), f.path);
    const Image back = import_pgm(f.path);
    for (double v : back.values)
        CHECK(v == 0.0);
}

TEST_CASE("sinogram text round trip is exact") {
    const Image img = generate_shepp_logan(8, PhantomMode::binary());
    Geometry g{8, uniform_angles(5), 8, 1.0};
    Sinogram s = radon(img, g);
    s.path_scale = 0.5;
    TempFile f("/tmp/qtomo_io_sino.txt");
    save_sinogram(s, f.path);
    const Sinogram back = load_sinogram(f.path);
    CHECK(back.values == s.values);
    CHECK(back.path_scale == s.path_scale);
    CHECK(back.geometry.angles == s.geometry.angles);
    CHECK(back.geometry.detectors == 8);
    CHECK(back.geometry.image_size == 8); // loader assumes detectors == image size
}

TEST_CASE("malformed sinograms are format errors") {
    TempFile f("/tmp/qtomo_io_badsino.txt");
    {
        std::ofstream out(f.path);
        out << "SINO 2 2 1\n0 90\n1 2 3\n"; // one value short
    }
    CHECK_THROWS_AS(load_sinogram(f.path), FormatError);
}
