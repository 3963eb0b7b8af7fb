#pragma once

#include "qtomo/geometry.hpp"
#include "qtomo/image.hpp"

#include <string>

namespace qtomo {

/// Image files, dispatched by extension:
///   .img/.txt  text, header "IMG <height> <width>" then rows of values
///              (full-precision, exact round trip)
///   .imgb      binary, "IMGB" magic + int32 dims + float64 values
///              (exact round trip)
///   .pgm       portable graymap for visualization, values scaled
///              linearly to 0..255 (lossy; exact only for {0,1} data)
Image load_image(const std::string& path);
void save_image(const Image& image, const std::string& path);

/// P2/P5 graymap import; values come back in [0, 1].
Image import_pgm(const std::string& path);
/// Export scaled by 255 / max(level set or data maximum); P5 when
/// binary, P2 otherwise.
void export_pgm(const Image& image, const std::string& path, bool binary = true);

/// Sinogram text format: "SINO <n_angles> <n_detectors> <path_scale>",
/// one line with the angle list in degrees, then the matrix rows. The
/// image size is not stored; loading assumes image_size = detectors.
Sinogram load_sinogram(const std::string& path);
void save_sinogram(const Sinogram& sino, const std::string& path);

} // namespace qtomo
