#ifndef FACET_RIDGE_HPP
#define FACET_RIDGE_HPP

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace facet {

/// Candidate regularisation strengths, strictly ascending and positive.
struct LambdaGrid {
    std::vector<double> values;

    /// `count` points log-spaced over [lo, hi], endpoints included.
    static LambdaGrid log_spaced(double lo, double hi, std::size_t count);
    /// 25 points over [1e-4, 1e4].
    static LambdaGrid standard();

    /// Throws Config if empty, non-positive or not strictly ascending.
    void validate() const;
};

struct RidgeModel {
    Eigen::VectorXd weights;
    double intercept = 0.0;
    double lambda = 0.0;
    double training_target_mean = 0.0;

    std::size_t input_dim() const noexcept { return static_cast<std::size_t>(weights.size()); }
};

/// Centred ridge system factorised once (thin SVD of the centred design),
/// so fits and leave-one-out residuals for many lambdas share the work.
class RidgeSystem {
public:
    /// Throws Data on non-finite input, Shape on mismatched sizes or n < 2.
    RidgeSystem(const Eigen::MatrixXd& z, const Eigen::VectorXd& y);

    /// w solves (Zc'Zc + lambda I) w = Zc'yc; intercept = mean(y) - mean(Z).w.
    RidgeModel fit(double lambda) const;

    /// Exact leave-one-out residuals e_i = (y_i - yhat_i) / (1 - h_ii), where
    /// h_ii includes the 1/n leverage of the unpenalised intercept. Throws
    /// Degeneracy naming the row when h_ii >= 1 - 1e-12.
    Eigen::VectorXd loo_residuals(double lambda) const;

    double loo_mse(double lambda) const;

    std::size_t rows() const noexcept { return static_cast<std::size_t>(u_.rows()); }

private:
    Eigen::VectorXd z_mean_;
    double y_mean_ = 0.0;
    Eigen::VectorXd y_centred_;
    Eigen::MatrixXd u_;
    Eigen::VectorXd s_;
    Eigen::MatrixXd v_;
    Eigen::VectorXd uty_;
};

RidgeModel ridge_fit(const Eigen::MatrixXd& z, const Eigen::VectorXd& y, double lambda);

/// Z * w + intercept. Throws Shape on a column mismatch.
Eigen::VectorXd ridge_predict(const RidgeModel& model, const Eigen::MatrixXd& z);

struct LooCurve {
    std::vector<double> lambdas;
    std::vector<double> mse;
};

/// Leave-one-out mean squared error for every grid value. Requires n >= 3.
LooCurve loo_curve(const Eigen::MatrixXd& z, const Eigen::VectorXd& y, const LambdaGrid& grid);

/// Lambda with the smallest LOO error; ties go to the larger lambda.
double select_lambda(const LooCurve& curve);

}  // namespace facet

#endif
