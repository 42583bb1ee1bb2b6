#ifndef FACET_TESTS_REFERENCE_HPP
#define FACET_TESTS_REFERENCE_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "facet/image.hpp"

namespace facet::test {

/// Straightforward Canny written for clarity: clamped-access 2D convolution,
/// atan2 direction buckets, sqrt magnitudes and hysteresis by repeated sweeps.
std::vector<std::uint8_t> naive_canny(const ImagePatch& patch, double low, double high);

/// Expected split-half correlation when every face has true score s with
/// variance `signal_var`, each rating adds independent noise of variance
/// `noise_var`, and the two halves hold m1 and m2 raters.
double spearman_brown_split_half(double signal_var, double noise_var, double m1, double m2);

/// Ridge with intercept fitted directly on (x, y) by solving the normal
/// equations of the centred data.
struct DirectRidge {
    Eigen::VectorXd w;
    double b = 0.0;
};
DirectRidge direct_ridge(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double lambda);

}  // namespace facet::test

#endif
