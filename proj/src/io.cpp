#include "qtomo/io.hpp"

#include "qtomo/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace qtomo {
namespace {

std::string fmt_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

Image load_image_text(const std::string& path) {
    std::ifstream f(path);
    if (!f)
        throw FormatError("load_image: cannot open " + path);
    std::string magic;
    int h = 0, w = 0;
    f >> magic >> h >> w;
    if (!f || magic != "IMG")
        throw FormatError("load_image: bad header in " + path);
    if (h < 0 || w < 0)
        throw FormatError("load_image: negative dimensions in " + path);
    Image img(h, w);
    for (size_t k = 0; k < img.pixel_count(); ++k) {
        if (!(f >> img.values[k]))
            throw FormatError("load_image: header says " + std::to_string(h) + "x" +
                              std::to_string(w) + " but file carries fewer values");
    }
    double extra;
    if (f >> extra)
        throw FormatError("load_image: header says " + std::to_string(h) + "x" +
                          std::to_string(w) + " but file carries extra values");
    img.validate();
    return img;
}

void save_image_text(const Image& image, const std::string& path) {
    std::ofstream f(path);
    if (!f)
        throw FormatError("save_image: cannot open " + path);
    f << "IMG " << image.height << ' ' << image.width << '\n';
    for (int i = 0; i < image.height; ++i) {
        for (int j = 0; j < image.width; ++j) {
            if (j)
                f << ' ';
            f << fmt_double(image.at(i, j));
        }
        f << '\n';
    }
    if (!f)
        throw FormatError("save_image: write failed for " + path);
}

Image load_image_binary(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw FormatError("load_image: cannot open " + path);
    char magic[4];
    f.read(magic, 4);
    if (!f || std::string(magic, 4) != "IMGB")
        throw FormatError("load_image: bad binary magic in " + path);
    int32_t h = 0, w = 0;
    f.read(reinterpret_cast<char*>(&h), sizeof h);
    f.read(reinterpret_cast<char*>(&w), sizeof w);
    if (!f || h < 0 || w < 0)
        throw FormatError("load_image: bad binary dimensions in " + path);
    Image img(h, w);
    f.read(reinterpret_cast<char*>(img.values.data()),
           static_cast<std::streamsize>(img.pixel_count() * sizeof(double)));
    if (!f)
        throw FormatError("load_image: truncated binary data in " + path);
    img.validate();
    return img;
}

void save_image_binary(const Image& image, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw FormatError("save_image: cannot open " + path);
    f.write("IMGB", 4);
    const int32_t h = image.height, w = image.width;
    f.write(reinterpret_cast<const char*>(&h), sizeof h);
    f.write(reinterpret_cast<const char*>(&w), sizeof w);
    f.write(reinterpret_cast<const char*>(image.values.data()),
            static_cast<std::streamsize>(image.pixel_count() * sizeof(double)));
    if (!f)
        throw FormatError("save_image: write failed for " + path);
}

} // namespace

Image load_image(const std::string& path) {
    if (ends_with(path, ".pgm"))
        return import_pgm(path);
    if (ends_with(path, ".imgb"))
        return load_image_binary(path);
    return load_image_text(path);
}

void save_image(const Image& image, const std::string& path) {
    if (ends_with(path, ".pgm")) {
        export_pgm(image, path);
    } else if (ends_with(path, ".imgb")) {
        save_image_binary(image, path);
    } else {
        save_image_text(image, path);
    }
}

Image import_pgm(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw FormatError("import_pgm: cannot open " + path);
    std::string magic;
    f >> magic;
    if (magic != "P2" && magic != "P5")
        throw FormatError("import_pgm: unsupported magic '" + magic + "' in " + path);

    auto next_token = [&f, &path]() {
        // skip whitespace and '#' comment lines
        for (;;) {
            int c = f.peek();
            if (c == '#') {
                std::string line;
                std::getline(f, line);
            } else if (std::isspace(c)) {
                f.get();
            } else {
                break;
            }
            if (!f)
                throw FormatError("import_pgm: truncated header in " + path);
        }
        long v = 0;
        if (!(f >> v))
            throw FormatError("import_pgm: truncated header in " + path);
        return v;
    };

    const long w = next_token();
    const long h = next_token();
    const long maxval = next_token();
    if (w < 1 || h < 1 || maxval < 1 || maxval > 65535)
        throw FormatError("import_pgm: bad dimensions in " + path);

    Image img(static_cast<int>(h), static_cast<int>(w));
    if (magic == "P2") {
        for (size_t k = 0; k < img.pixel_count(); ++k) {
            long v;
            if (!(f >> v) || v < 0 || v > maxval)
                throw FormatError("import_pgm: bad sample in " + path);
            img.values[k] = static_cast<double>(v) / maxval;
        }
    } else {
        f.get(); // the single whitespace after maxval
        const bool two_byte = maxval > 255;
        for (size_t k = 0; k < img.pixel_count(); ++k) {
            long v = f.get();
            if (two_byte)
                v = v * 256 + f.get();
            if (!f || v < 0 || v > maxval)
                throw FormatError("import_pgm: truncated raster in " + path);
            img.values[k] = static_cast<double>(v) / maxval;
        }
    }
    return img;
}

void export_pgm(const Image& image, const std::string& path, bool binary) {
    double vmax = 0.0;
    if (image.levels && !image.levels->empty())
        vmax = image.levels->back();
    for (double v : image.values)
        vmax = std::max(vmax, v);
    const double scale = vmax > 0.0 ? 255.0 / vmax : 0.0;

    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw FormatError("export_pgm: cannot open " + path);
    f << (binary ? "P5" : "P2") << '\n'
      << image.width << ' ' << image.height << '\n'
      << 255 << '\n';
    for (size_t k = 0; k < image.pixel_count(); ++k) {
        const int v = std::clamp(static_cast<int>(std::lround(image.values[k] * scale)), 0, 255);
        if (binary)
            f.put(static_cast<char>(v));
        else
            f << v << ((k + 1) % image.width == 0 ? '\n' : ' ');
    }
    if (!f)
        throw FormatError("export_pgm: write failed for " + path);
}

Sinogram load_sinogram(const std::string& path) {
    std::ifstream f(path);
    if (!f)
        throw FormatError("load_sinogram: cannot open " + path);
    std::string magic;
    int na = 0, nd = 0;
    double path_scale = 1.0;
    f >> magic >> na >> nd >> path_scale;
    if (!f || magic != "SINO")
        throw FormatError("load_sinogram: bad header in " + path);
    if (na < 1 || nd < 1)
        throw FormatError("load_sinogram: bad dimensions in " + path);

    Geometry g;
    g.detectors = nd;
    g.image_size = nd; // detector count defaults to the image size
    g.angles.resize(na);
    for (int a = 0; a < na; ++a) {
        if (!(f >> g.angles[a]))
            throw FormatError("load_sinogram: truncated angle list in " + path);
    }
    Sinogram sino(g);
    sino.path_scale = path_scale;
    for (size_t k = 0; k < sino.values.size(); ++k) {
        if (!(f >> sino.values[k]))
            throw FormatError("load_sinogram: header says " + std::to_string(na) + "x" +
                              std::to_string(nd) + " but file carries fewer values");
    }
    double extra;
    if (f >> extra)
        throw FormatError("load_sinogram: file carries extra values");
    sino.validate();
    return sino;
}

void save_sinogram(const Sinogram& sino, const std::string& path) {
    std::ofstream f(path);
    if (!f)
        throw FormatError("save_sinogram: cannot open " + path);
    f << "SINO " << sino.n_angles() << ' ' << sino.n_detectors() << ' '
      << fmt_double(sino.path_scale) << '\n';
    for (int a = 0; a < sino.n_angles(); ++a) {
        if (a)
            f << ' ';
        f << fmt_double(sino.geometry.angles[a]);
    }
    f << '\n';
    for (int a = 0; a < sino.n_angles(); ++a) {
        for (int d = 0; d < sino.n_detectors(); ++d) {
            if (d)
                f << ' ';
            f << fmt_double(sino.at(a, d));
        }
        f << '\n';
    }
    if (!f)
        throw FormatError("save_sinogram: write failed for " + path);
}

} // namespace qtomo
