#include "facet/reduce.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/SVD>

#include "facet/error.hpp"

namespace facet {

namespace {

Eigen::MatrixXd centred(const PcaModel& model, const Eigen::MatrixXd& x) {
    Eigen::MatrixXd c = x.rowwise() - model.mean.transpose();
    if (model.standardized()) c = c.array().rowwise() / model.scale.transpose().array();
    return c;
}

}  // namespace

PcaModel pca_fit(const Eigen::MatrixXd& x, std::size_t max_components, const PcaOptions& options) {
    const auto n = static_cast<std::size_t>(x.rows());
    const auto d = static_cast<std::size_t>(x.cols());
    if (n < 2 || d < 1) throw Error(ErrorKind::Shape, "PCA needs at least 2 rows and 1 column");
    if (max_components < 1 || max_components > std::min(n - 1, d)) {
        throw Error(ErrorKind::Shape, "PCA max_components " + std::to_string(max_components) +
                                          " outside [1, min(n-1, d)] = [1, " + std::to_string(std::min(n - 1, d)) +
                                          "]");
    }
    if (!x.allFinite()) throw Error(ErrorKind::Data, "PCA input has non-finite entries");

    PcaModel model;
    model.mean = x.colwise().mean().transpose();
    if (options.standardize) {
        model.scale = ((x.rowwise() - model.mean.transpose()).colwise().squaredNorm() / static_cast<double>(n - 1))
                          .cwiseSqrt()
                          .transpose();
        for (auto& s : model.scale) {
            if (!(s > 0.0)) s = 1.0;  // constant column
        }
    }
    const Eigen::MatrixXd c = centred(model, x);
    const double total = c.squaredNorm();
    if (!(total > 0.0)) throw Error(ErrorKind::Degeneracy, "PCA input has zero variance");

    Eigen::BDCSVD<Eigen::MatrixXd> svd(c, Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    const double tol = sigma(0) * static_cast<double>(std::max(n, d)) * std::numeric_limits<double>::epsilon();
    std::size_t k = 0;
    while (k < max_components && k < static_cast<std::size_t>(sigma.size()) && sigma(static_cast<Eigen::Index>(k)) > tol) {
        ++k;
    }
    model.rank_deficient = k < max_components;

    const auto kk = static_cast<Eigen::Index>(k);
    model.basis = svd.matrixV().leftCols(kk).transpose();
    for (Eigen::Index r = 0; r < kk; ++r) {
        Eigen::Index arg = 0;
        model.basis.row(r).cwiseAbs().maxCoeff(&arg);
        if (model.basis(r, arg) < 0.0) model.basis.row(r) *= -1.0;
    }
    const Eigen::VectorXd sq = sigma.head(kk).array().square();
    model.explained_variance = sq / static_cast<double>(n - 1);
    model.explained_variance_ratio = sq / total;
    return model;
}

Eigen::MatrixXd pca_transform(const PcaModel& model, const Eigen::MatrixXd& x) {
    if (static_cast<std::size_t>(x.cols()) != model.input_dim()) {
        throw Error(ErrorKind::Shape, "PCA transform expects " + std::to_string(model.input_dim()) +
                                          " columns, got " + std::to_string(x.cols()));
    }
    return centred(model, x) * model.basis.transpose();
}

Eigen::MatrixXd pca_inverse(const PcaModel& model, const Eigen::MatrixXd& z) {
    if (static_cast<std::size_t>(z.cols()) != model.components()) {
        throw Error(ErrorKind::Shape, "PCA inverse expects " + std::to_string(model.components()) +
                                          " columns, got " + std::to_string(z.cols()));
    }
    Eigen::MatrixXd x = z * model.basis;
    if (model.standardized()) x = x.array().rowwise() * model.scale.transpose().array();
    return x.rowwise() + model.mean.transpose();
}

PcaModel pca_truncate(const PcaModel& model, std::size_t k) {
    if (k < 1 || k > model.components()) {
        throw Error(ErrorKind::Shape, "cannot truncate " + std::to_string(model.components()) + " components to " +
                                          std::to_string(k));
    }
    const auto kk = static_cast<Eigen::Index>(k);
    PcaModel out;
    out.mean = model.mean;
    out.scale = model.scale;
    out.basis = model.basis.topRows(kk);
    out.explained_variance = model.explained_variance.head(kk);
    out.explained_variance_ratio = model.explained_variance_ratio.head(kk);
    out.rank_deficient = model.rank_deficient;
    return out;
}

std::optional<std::size_t> components_for_variance(const PcaModel& model, double fraction) {
    double cumulative = 0.0;
    for (Eigen::Index i = 0; i < model.explained_variance_ratio.size(); ++i) {
        cumulative += model.explained_variance_ratio(i);
        if (cumulative >= fraction) return static_cast<std::size_t>(i + 1);
    }
    return std::nullopt;
}

}  // namespace facet
