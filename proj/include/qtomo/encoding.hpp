#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qtomo {

/// Pixel-to-binary-variable encodings.
///
/// radix2(m):            value = sum 2^k q_k, k = 0..m-1
/// unit_step(m):         value = q_1 + ... + q_m (all-ones weights)
/// mac_direct(a_1..a_m): value = sum a_k q_k
/// mac_cumulative(a_1..a_m):
///                       value = a_1 + sum_{k>=2} (a_k - a_{k-1}) q_k,
///                       so m-1 variables and a per-pixel offset of a_1.
struct EncodingSpec {
    enum class Mode { radix2, unit_step, mac_direct, mac_cumulative };

    Mode mode = Mode::radix2;
    int m = 1;                  // declared bit count (alphas.size() for MAC modes)
    std::vector<double> alphas; // MAC weights, empty otherwise

    static EncodingSpec radix2(int m);
    static EncodingSpec unit_step(int m);
    static EncodingSpec mac_direct(std::vector<double> alphas);
    static EncodingSpec mac_cumulative(std::vector<double> alphas);

    void validate() const;

    /// Binary variables used per pixel (m, except m-1 for cumulative MAC).
    int bits_per_pixel() const;

    /// Weight of each binary variable; excludes the affine offset.
    std::vector<double> basis_weights() const;

    /// Constant per-pixel term (alpha_1 for cumulative MAC, else 0).
    double affine_offset() const;

    /// Weighted sum of the given bits plus the affine offset.
    double decode(std::span<const uint8_t> bits) const;

    /// Canonical bit pattern whose decode is nearest to `value`
    /// (exact for representable levels; used for warm starts and tests).
    std::vector<uint8_t> encode_value(double value) const;

    /// Sorted set of all decodable values. Guarded to bits_per_pixel <= 16.
    std::vector<double> representable_levels() const;

    std::string mode_name() const;
};

} // namespace qtomo
