#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "facet/error.hpp"
#include "facet/geomfeat.hpp"

namespace facet {

namespace {

constexpr int kGauss[5][5] = {
    {2, 4, 5, 4, 2},
    {4, 9, 12, 9, 4},
    {5, 12, 15, 12, 5},
    {4, 9, 12, 9, 4},
    {2, 4, 5, 4, 2},
};

// Copy of `src` (w x h) surrounded by `pad` replicated border pixels.
std::vector<std::int64_t> replicate_pad(const std::vector<std::int64_t>& src, int w, int h, int pad) {
    const int pw = w + 2 * pad;
    const int ph = h + 2 * pad;
    std::vector<std::int64_t> out(static_cast<std::size_t>(pw) * ph);
    for (int y = 0; y < ph; ++y) {
        const int sy = std::clamp(y - pad, 0, h - 1);
        const std::int64_t* row = src.data() + static_cast<std::size_t>(sy) * w;
        std::int64_t* dst = out.data() + static_cast<std::size_t>(y) * pw;
        for (int x = 0; x < pad; ++x) dst[x] = row[0];
        std::copy(row, row + w, dst + pad);
        for (int x = pad + w; x < pw; ++x) dst[x] = row[w - 1];
    }
    return out;
}

}  // namespace

std::vector<std::uint8_t> canny_edges(const ImagePatch& patch, double low, double high) {
    if (!(low >= 0.0) || !(low < high)) {
        throw Error(ErrorKind::Bound, "canny thresholds need 0 <= low < high");
    }
    const int w = patch.width();
    const int h = patch.height();
    const std::size_t n = patch.pixel_count();

    std::vector<std::int64_t> luma(n);
    const auto& px = patch.pixels();
    for (std::size_t i = 0; i < n; ++i) {
        luma[i] = 299 * px[3 * i] + 587 * px[3 * i + 1] + 114 * px[3 * i + 2];
    }

    // 5x5 blur on a 2-pixel replicated border
    std::vector<std::int64_t> blurred(n);
    {
        const auto padded = replicate_pad(luma, w, h, 2);
        const int pw = w + 4;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                std::int64_t acc = 0;
                for (int ky = 0; ky < 5; ++ky) {
                    const std::int64_t* row = padded.data() + static_cast<std::size_t>(y + ky) * pw + x;
                    for (int kx = 0; kx < 5; ++kx) acc += kGauss[ky][kx] * row[kx];
                }
                blurred[static_cast<std::size_t>(y) * w + x] = acc;
            }
        }
    }

    // Sobel, squared magnitude and a 2-bit direction sector per pixel
    std::vector<std::int64_t> mag2(n);
    std::vector<std::uint8_t> sector(n);
    std::int64_t max2 = 0;
    {
        const double tan22 = std::sqrt(2.0) - 1.0;
        const double tan67 = std::sqrt(2.0) + 1.0;
        const auto padded = replicate_pad(blurred, w, h, 1);
        const int pw = w + 2;
        for (int y = 0; y < h; ++y) {
            const std::int64_t* up = padded.data() + static_cast<std::size_t>(y) * pw;
            const std::int64_t* mid = up + pw;
            const std::int64_t* down = mid + pw;
            for (int x = 0; x < w; ++x) {
                const std::int64_t gx = (up[x + 2] + 2 * mid[x + 2] + down[x + 2]) - (up[x] + 2 * mid[x] + down[x]);
                const std::int64_t gy = (down[x] + 2 * down[x + 1] + down[x + 2]) - (up[x] + 2 * up[x + 1] + up[x + 2]);
                const std::size_t i = static_cast<std::size_t>(y) * w + x;
                mag2[i] = gx * gx + gy * gy;
                max2 = std::max(max2, mag2[i]);
                const double ax = static_cast<double>(gx < 0 ? -gx : gx);
                const double ay = static_cast<double>(gy < 0 ? -gy : gy);
                if (ay <= tan22 * ax) {
                    sector[i] = 0;  // horizontal gradient
                } else if (ay >= tan67 * ax) {
                    sector[i] = 2;  // vertical gradient
                } else {
                    sector[i] = (gx > 0) == (gy > 0) ? 1 : 3;
                }
            }
        }
    }

    std::vector<std::uint8_t> edges(n, 0);
    if (max2 == 0) return edges;

    const double strong_cut = high * high * static_cast<double>(max2);
    const double weak_cut = low * low * static_cast<double>(max2);
    // neighbour offsets for sectors 0..3: (1,0), (1,1), (0,1), (1,-1)
    constexpr int kDx[4] = {1, 1, 0, 1};
    constexpr int kDy[4] = {0, 1, 1, -1};
    const auto mag_at = [&](int x, int y) -> std::int64_t {
        if (x < 0 || y < 0 || x >= w || y >= h) return 0;
        return mag2[static_cast<std::size_t>(y) * w + x];
    };

    // 0 = suppressed, 1 = weak, 2 = strong
    std::vector<std::uint8_t> level(n, 0);
    std::vector<std::size_t> stack;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            const std::int64_t m = mag2[i];
            if (m == 0) continue;
            const int s = sector[i];
            if (m < mag_at(x + kDx[s], y + kDy[s]) || m < mag_at(x - kDx[s], y - kDy[s])) continue;
            const double md = static_cast<double>(m);
            if (md >= strong_cut) {
                level[i] = 2;
                edges[i] = 1;
                stack.push_back(i);
            } else if (md >= weak_cut) {
                level[i] = 1;
            }
        }
    }

    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        const int x = static_cast<int>(i % static_cast<std::size_t>(w));
        const int y = static_cast<int>(i / static_cast<std::size_t>(w));
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                const int nx = x + dx;
                const int ny = y + dy;
                if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                const std::size_t j = static_cast<std::size_t>(ny) * w + nx;
                if (level[j] == 1 && edges[j] == 0) {
                    edges[j] = 1;
                    stack.push_back(j);
                }
            }
        }
    }
    return edges;
}

double canny_edge_density(const ImagePatch& patch, double low, double high) {
    const auto edges = canny_edges(patch, low, high);
    const auto count = std::count(edges.begin(), edges.end(), std::uint8_t{1});
    return static_cast<double>(count) / static_cast<double>(edges.size());
}

}  // namespace facet
