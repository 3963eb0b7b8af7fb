#include "qtomo/encoding.hpp"

#include "qtomo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qtomo {

EncodingSpec EncodingSpec::radix2(int m) {
    EncodingSpec s;
    s.mode = Mode::radix2;
    s.m = m;
    s.validate();
    return s;
}

EncodingSpec EncodingSpec::unit_step(int m) {
    EncodingSpec s;
    s.mode = Mode::unit_step;
    s.m = m;
    s.validate();
    return s;
}

EncodingSpec EncodingSpec::mac_direct(std::vector<double> alphas) {
    EncodingSpec s;
    s.mode = Mode::mac_direct;
    s.m = static_cast<int>(alphas.size());
    s.alphas = std::move(alphas);
    s.validate();
    return s;
}

EncodingSpec EncodingSpec::mac_cumulative(std::vector<double> alphas) {
    EncodingSpec s;
    s.mode = Mode::mac_cumulative;
    s.m = static_cast<int>(alphas.size());
    s.alphas = std::move(alphas);
    s.validate();
    return s;
}

void EncodingSpec::validate() const {
    if (m < 1)
        throw std::invalid_argument("encoding: m must be >= 1");
    if (mode == Mode::radix2 && m > 24)
        throw std::invalid_argument("encoding: radix2 supports at most 24 bits");
    if (mode == Mode::mac_direct || mode == Mode::mac_cumulative) {
        if (alphas.empty())
            throw std::invalid_argument("encoding: empty MAC weight list");
        if (static_cast<int>(alphas.size()) != m)
            throw std::invalid_argument("encoding: m does not match MAC weight count");
        for (size_t k = 0; k < alphas.size(); ++k) {
            if (!(alphas[k] > 0.0))
                throw std::invalid_argument("encoding: MAC weights must be positive");
            if (k > 0 && !(alphas[k] > alphas[k - 1]))
                throw std::invalid_argument("encoding: MAC weights must be strictly increasing");
        }
    } else if (!alphas.empty()) {
        throw std::invalid_argument("encoding: weight list only valid for MAC modes");
    }
    if (mode == Mode::mac_cumulative && m < 2)
        throw std::invalid_argument("encoding: cumulative MAC needs at least two weights");
}

int EncodingSpec::bits_per_pixel() const {
    return mode == Mode::mac_cumulative ? m - 1 : m;
}

std::vector<double> EncodingSpec::basis_weights() const {
    std::vector<double> w;
    switch (mode) {
    case Mode::radix2:
        w.resize(m);
        for (int k = 0; k < m; ++k)
            w[k] = static_cast<double>(1u << k);
        break;
    case Mode::unit_step:
        w.assign(m, 1.0);
        break;
    case Mode::mac_direct:
        w = alphas;
        break;
    case Mode::mac_cumulative:
        w.resize(m - 1);
        for (int k = 1; k < m; ++k)
            w[k - 1] = alphas[k] - alphas[k - 1];
        break;
    }
    return w;
}

double EncodingSpec::affine_offset() const {
    return mode == Mode::mac_cumulative ? alphas.front() : 0.0;
}

double EncodingSpec::decode(std::span<const uint8_t> bits) const {
    const auto w = basis_weights();
    if (bits.size() != w.size())
        throw std::invalid_argument("encoding: bit count does not match bits_per_pixel");
    double v = affine_offset();
    for (size_t k = 0; k < w.size(); ++k)
        if (bits[k])
            v += w[k];
    return v;
}

std::vector<uint8_t> EncodingSpec::encode_value(double value) const {
    const int n = bits_per_pixel();
    std::vector<uint8_t> bits(n, 0);
    switch (mode) {
    case Mode::radix2: {
        long long v = std::llround(value);
        v = std::clamp<long long>(v, 0, (1ll << m) - 1);
        for (int k = 0; k < m; ++k)
            bits[k] = static_cast<uint8_t>((v >> k) & 1);
        break;
    }
    case Mode::unit_step: {
        long long v = std::llround(value);
        v = std::clamp<long long>(v, 0, m);
        for (int k = 0; k < v; ++k)
            bits[k] = 1;
        break;
    }
    case Mode::mac_cumulative:
    case Mode::mac_direct: {
        // greedy largest-first subset sum over the basis weights;
        // exact for radix-like weight ladders, best-effort otherwise
        const auto w = basis_weights();
        double rest = value - affine_offset();
        for (int k = n - 1; k >= 0; --k) {
            if (w[k] <= rest + 1e-9) {
                bits[k] = 1;
                rest -= w[k];
            }
        }
        break;
    }
    }
    return bits;
}

std::vector<double> EncodingSpec::representable_levels() const {
    const int n = bits_per_pixel();
    if (n > 16)
        throw CapacityError("encoding: level enumeration guarded to 16 bits per pixel");
    const auto w = basis_weights();
    const double offset = affine_offset();
    std::vector<double> levels;
    levels.reserve(1u << n);
    for (uint32_t p = 0; p < (1u << n); ++p) {
        double v = offset;
        for (int k = 0; k < n; ++k)
            if ((p >> k) & 1)
                v += w[k];
        levels.push_back(v);
    }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end(),
                             [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                 levels.end());
    return levels;
}

std::string EncodingSpec::mode_name() const {
    switch (mode) {
    case Mode::radix2: return "radix2";
    case Mode::unit_step: return "unit_step";
    case Mode::mac_direct: return "mac_direct";
    case Mode::mac_cumulative: return "mac_cumulative";
    }
    return "?";
}

} // namespace qtomo
