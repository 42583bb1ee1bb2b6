#ifndef FACET_REDUCE_HPP
#define FACET_REDUCE_HPP

#include <cstddef>
#include <optional>

#include <Eigen/Core>

namespace facet {

/// Principal components of a training matrix.
///
/// `basis` is k x d with orthonormal rows sorted by decreasing explained
/// variance. Each row is sign-normalised so its largest-magnitude entry is
/// positive (the first such entry on ties), which keeps persisted models
/// byte-stable. When `scale` is non-empty the features were standardised
/// and inputs are divided by it after centering.
struct PcaModel {
    Eigen::VectorXd mean;
    Eigen::VectorXd scale;
    Eigen::MatrixXd basis;
    Eigen::VectorXd explained_variance;
    Eigen::VectorXd explained_variance_ratio;
    /// Fewer components than requested because the data has lower rank.
    bool rank_deficient = false;

    std::size_t input_dim() const noexcept { return static_cast<std::size_t>(mean.size()); }
    std::size_t components() const noexcept { return static_cast<std::size_t>(basis.rows()); }
    bool standardized() const noexcept { return scale.size() > 0; }
};

struct PcaOptions {
    /// Divide each feature by its training standard deviation after centering.
    bool standardize = false;
};

/// Thin SVD of the centred data. Requires n >= 2 and
/// 1 <= max_components <= min(n - 1, d); throws Shape otherwise. Components
/// whose singular value is numerically zero are dropped rather than
/// returned, and `rank_deficient` is set.
PcaModel pca_fit(const Eigen::MatrixXd& x, std::size_t max_components, const PcaOptions& options = {});

/// Row i = basis * (x_i - mean). Throws Shape on a column mismatch.
Eigen::MatrixXd pca_transform(const PcaModel& model, const Eigen::MatrixXd& x);

/// Row i = mean + z_i * basis. Throws Shape on a column mismatch.
Eigen::MatrixXd pca_inverse(const PcaModel& model, const Eigen::MatrixXd& z);

/// Copy keeping only the first k components.
PcaModel pca_truncate(const PcaModel& model, std::size_t k);

/// Smallest number of leading components whose cumulative explained
/// variance ratio reaches `fraction`; nullopt if the model never gets there.
std::optional<std::size_t> components_for_variance(const PcaModel& model, double fraction);

}  // namespace facet

#endif
