#include "qtomo/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qtomo {

void Image::validate() const {
    if (height < 0 || width < 0)
        throw std::invalid_argument("image: negative dimensions");
    if (values.size() != static_cast<size_t>(height) * static_cast<size_t>(width))
        throw std::invalid_argument("image: values length " + std::to_string(values.size()) +
                                    " does not match " + std::to_string(height) + "x" +
                                    std::to_string(width));
    for (double v : values) {
        if (!(v >= 0.0))
            throw std::invalid_argument("image: negative or non-finite value");
    }
    if (levels) {
        if (levels->empty())
            throw std::invalid_argument("image: empty level set");
        if (!std::is_sorted(levels->begin(), levels->end()))
            throw std::invalid_argument("image: level set must be sorted");
        for (double v : values) {
            bool member = false;
            for (double l : *levels) {
                if (v == l) { member = true; break; }
            }
            if (!member)
                throw std::invalid_argument("image: value " + std::to_string(v) +
                                            " outside declared levels");
        }
    }
}

Image quantize_to_levels(const Image& img, const std::vector<double>& levels) {
    if (levels.empty())
        throw std::invalid_argument("quantize_to_levels: empty level set");
    std::vector<double> sorted = levels;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    Image out = img;
    out.levels = sorted;
    for (double& v : out.values) {
        auto it = std::lower_bound(sorted.begin(), sorted.end(), v);
        if (it == sorted.end()) {
            v = sorted.back();
        } else if (it == sorted.begin()) {
            v = sorted.front();
        } else {
            double hi = *it;
            double lo = *(it - 1);
            // ties toward the lower level
            v = (v - lo < hi - v) ? lo : (v - lo > hi - v ? hi : lo);
        }
    }
    return out;
}

} // namespace qtomo
