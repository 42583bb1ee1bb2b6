#include <algorithm>
#include <cmath>
#include <numbers>

#include "facet/geomfeat.hpp"

namespace facet {

Hsv rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept {
    const int max = std::max({r, g, b});
    const int min = std::min({r, g, b});
    const int delta = max - min;
    Hsv out;
    out.v = max / 255.0;
    out.s = max == 0 ? 0.0 : static_cast<double>(delta) / max;
    if (delta == 0) return out;
    double h = 0.0;
    if (max == r) {
        h = 60.0 * static_cast<double>(g - b) / delta;
    } else if (max == g) {
        h = 60.0 * (static_cast<double>(b - r) / delta + 2.0);
    } else {
        h = 60.0 * (static_cast<double>(r - g) / delta + 4.0);
    }
    if (h < 0.0) h += 360.0;
    out.h = h;
    return out;
}

Hsv skin_color_hsv(const ImagePatch& patch) {
    constexpr double deg = std::numbers::pi / 180.0;
    double sum_cos = 0.0;
    double sum_sin = 0.0;
    double sum_s = 0.0;
    double sum_v = 0.0;
    const std::size_t n = patch.pixel_count();
    const auto& px = patch.pixels();
    for (std::size_t i = 0; i < n; ++i) {
        const Hsv c = rgb_to_hsv(px[3 * i], px[3 * i + 1], px[3 * i + 2]);
        sum_cos += std::cos(c.h * deg);
        sum_sin += std::sin(c.h * deg);
        sum_s += c.s;
        sum_v += c.v;
    }
    const double count = static_cast<double>(n);
    Hsv out;
    out.s = sum_s / count;
    out.v = sum_v / count;
    // a vanishing resultant has no mean direction
    if (std::hypot(sum_cos, sum_sin) > 1e-9 * count) {
        double h = std::atan2(sum_sin, sum_cos) / deg;
        if (h < 0.0) h += 360.0;
        if (h >= 360.0) h -= 360.0;
        out.h = h;
    }
    return out;
}

}  // namespace facet
