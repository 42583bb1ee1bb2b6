#include "facet/ridge.hpp"

#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "facet/error.hpp"

namespace facet {

LambdaGrid LambdaGrid::log_spaced(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0) || !(hi > lo) || count < 2) {
        throw Error(ErrorKind::Config, "log-spaced grid needs 0 < lo < hi and at least 2 points");
    }
    LambdaGrid grid;
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(count - 1);
        grid.values.push_back(std::pow(10.0, a + (b - a) * t));
    }
    return grid;
}

LambdaGrid LambdaGrid::standard() { return log_spaced(1e-4, 1e4, 25); }

void LambdaGrid::validate() const {
    if (values.empty()) throw Error(ErrorKind::Config, "lambda grid is empty");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
            throw Error(ErrorKind::Config, "lambda grid values must be positive and finite");
        }
        if (i > 0 && !(values[i] > values[i - 1])) {
            throw Error(ErrorKind::Config, "lambda grid must be strictly ascending");
        }
    }
}

RidgeSystem::RidgeSystem(const Eigen::MatrixXd& z, const Eigen::VectorXd& y) {
    if (z.rows() != y.size()) {
        throw Error(ErrorKind::Shape, "ridge: " + std::to_string(z.rows()) + " rows but " +
                                          std::to_string(y.size()) + " targets");
    }
    if (z.rows() < 2 || z.cols() < 1) throw Error(ErrorKind::Shape, "ridge needs n >= 2 and k >= 1");
    if (!z.allFinite() || !y.allFinite()) throw Error(ErrorKind::Data, "ridge inputs contain non-finite values");

    z_mean_ = z.colwise().mean().transpose();
    y_mean_ = y.mean();
    y_centred_ = y.array() - y_mean_;
    const Eigen::MatrixXd zc = z.rowwise() - z_mean_.transpose();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(zc, Eigen::ComputeThinU | Eigen::ComputeThinV);
    u_ = svd.matrixU();
    s_ = svd.singularValues();
    v_ = svd.matrixV();
    uty_ = u_.transpose() * y_centred_;
}

RidgeModel RidgeSystem::fit(double lambda) const {
    if (!(lambda > 0.0)) throw Error(ErrorKind::Data, "ridge lambda must be positive");
    const Eigen::VectorXd shrink = s_.array() / (s_.array().square() + lambda);
    RidgeModel model;
    model.weights = v_ * (shrink.asDiagonal() * uty_);
    model.intercept = y_mean_ - z_mean_.dot(model.weights);
    model.lambda = lambda;
    model.training_target_mean = y_mean_;
    return model;
}

Eigen::VectorXd RidgeSystem::loo_residuals(double lambda) const {
    if (!(lambda > 0.0)) throw Error(ErrorKind::Data, "ridge lambda must be positive");
    const auto n = u_.rows();
    if (n < 3) throw Error(ErrorKind::Shape, "leave-one-out needs at least 3 rows");
    const Eigen::VectorXd filter = s_.array().square() / (s_.array().square() + lambda);
    const Eigen::VectorXd fitted_centred = u_ * (filter.asDiagonal() * uty_);
    const Eigen::VectorXd leverage =
        (u_.array().square().matrix() * filter).array() + 1.0 / static_cast<double>(n);
    Eigen::VectorXd residuals(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (leverage(i) >= 1.0 - 1e-12) {
            throw Error(ErrorKind::Degeneracy, "leave-one-out leverage of row " + std::to_string(i) + " is 1");
        }
        residuals(i) = (y_centred_(i) - fitted_centred(i)) / (1.0 - leverage(i));
    }
    return residuals;
}

double RidgeSystem::loo_mse(double lambda) const { return loo_residuals(lambda).squaredNorm() / static_cast<double>(rows()); }

RidgeModel ridge_fit(const Eigen::MatrixXd& z, const Eigen::VectorXd& y, double lambda) {
    return RidgeSystem(z, y).fit(lambda);
}

Eigen::VectorXd ridge_predict(const RidgeModel& model, const Eigen::MatrixXd& z) {
    if (static_cast<std::size_t>(z.cols()) != model.input_dim()) {
        throw Error(ErrorKind::Shape, "ridge predict expects " + std::to_string(model.input_dim()) + " columns, got " +
                                          std::to_string(z.cols()));
    }
    return (z * model.weights).array() + model.intercept;
}

LooCurve loo_curve(const Eigen::MatrixXd& z, const Eigen::VectorXd& y, const LambdaGrid& grid) {
    grid.validate();
    const RidgeSystem system(z, y);
    LooCurve curve;
    curve.lambdas = grid.values;
    curve.mse.reserve(grid.values.size());
    for (const double lambda : grid.values) curve.mse.push_back(system.loo_mse(lambda));
    return curve;
}

double select_lambda(const LooCurve& curve) {
    if (curve.lambdas.empty() || curve.lambdas.size() != curve.mse.size()) {
        throw Error(ErrorKind::Shape, "select_lambda needs a nonempty curve");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < curve.mse.size(); ++i) {
        const bool better = curve.mse[i] < curve.mse[best] ||
                            (curve.mse[i] == curve.mse[best] && curve.lambdas[i] > curve.lambdas[best]);
        if (better) best = i;
    }
    return curve.lambdas[best];
}

}  // namespace facet
