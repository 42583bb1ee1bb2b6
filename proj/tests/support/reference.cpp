#include "reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

namespace facet::test {

std::vector<std::uint8_t> naive_canny(const ImagePatch& patch, double low, double high) {
    const int w = patch.width();
    const int h = patch.height();
    const auto idx = [w](int x, int y) { return static_cast<std::size_t>(y) * w + x; };
    const auto cx = [w](int x) { return std::clamp(x, 0, w - 1); };
    const auto cy = [h](int y) { return std::clamp(y, 0, h - 1); };

    std::vector<long long> luma(patch.pixel_count());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const auto* p = patch.at(x, y);
            luma[idx(x, y)] = 299LL * p[0] + 587LL * p[1] + 114LL * p[2];
        }
    }
    const int gauss[5][5] = {{2, 4, 5, 4, 2}, {4, 9, 12, 9, 4}, {5, 12, 15, 12, 5}, {4, 9, 12, 9, 4}, {2, 4, 5, 4, 2}};
    std::vector<long long> blur(luma.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            long long acc = 0;
            for (int dy = -2; dy <= 2; ++dy) {
                for (int dx = -2; dx <= 2; ++dx) acc += gauss[dy + 2][dx + 2] * luma[idx(cx(x + dx), cy(y + dy))];
            }
            blur[idx(x, y)] = acc;
        }
    }
    const int sx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
    const int sy[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
    std::vector<double> mag(luma.size());
    std::vector<double> angle(luma.size());
    double max_mag = 0.0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            long long gx = 0;
            long long gy = 0;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const long long v = blur[idx(cx(x + dx), cy(y + dy))];
                    gx += sx[dy + 1][dx + 1] * v;
                    gy += sy[dy + 1][dx + 1] * v;
                }
            }
            mag[idx(x, y)] = std::sqrt(static_cast<double>(gx * gx + gy * gy));
            double deg = std::atan2(static_cast<double>(gy), static_cast<double>(gx)) * 180.0 / std::numbers::pi;
            if (deg < 0) deg += 180.0;
            if (deg >= 180.0) deg -= 180.0;
            angle[idx(x, y)] = deg;
            max_mag = std::max(max_mag, mag[idx(x, y)]);
        }
    }
    std::vector<std::uint8_t> out(luma.size(), 0);
    if (max_mag == 0.0) return out;

    const auto m_at = [&](int x, int y) { return x < 0 || y < 0 || x >= w || y >= h ? 0.0 : mag[idx(x, y)]; };
    std::vector<int> state(luma.size(), 0);  // 2 strong, 1 weak
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double m = mag[idx(x, y)];
            if (m == 0.0) continue;
            const double a = angle[idx(x, y)];
            int dx = 1;
            int dy = 0;
            if (a >= 22.5 && a < 67.5) {
                dy = 1;
            } else if (a >= 67.5 && a < 112.5) {
                dx = 0;
                dy = 1;
            } else if (a >= 112.5 && a < 157.5) {
                dy = -1;
            }
            if (m < m_at(x + dx, y + dy) || m < m_at(x - dx, y - dy)) continue;
            if (m >= high * max_mag) {
                state[idx(x, y)] = 2;
            } else if (m >= low * max_mag) {
                state[idx(x, y)] = 1;
            }
        }
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                if (state[idx(x, y)] != 1) continue;
                for (int dy = -1; dy <= 1 && state[idx(x, y)] == 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = x + dx;
                        const int ny = y + dy;
                        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                        if (state[idx(nx, ny)] == 2) {
                            state[idx(x, y)] = 2;
                            changed = true;
                            break;
                        }
                    }
                }
            }
        }
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = state[i] == 2 ? 1 : 0;
    return out;
}

double spearman_brown_split_half(double signal_var, double noise_var, double m1, double m2) {
    return signal_var / std::sqrt((signal_var + noise_var / m1) * (signal_var + noise_var / m2));
}

DirectRidge direct_ridge(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double lambda) {
    const Eigen::RowVectorXd mx = x.colwise().mean();
    const double my = y.mean();
    const Eigen::MatrixXd xc = x.rowwise() - mx;
    const Eigen::VectorXd yc = y.array() - my;
    const Eigen::MatrixXd a = xc.transpose() * xc + lambda * Eigen::MatrixXd::Identity(x.cols(), x.cols());
    DirectRidge r;
    r.w = a.ldlt().solve(xc.transpose() * yc);
    r.b = my - mx.dot(r.w);
    return r;
}

}  // namespace facet::test
