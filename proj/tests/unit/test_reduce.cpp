#include <cmath>

#include <Eigen/Dense>

#include "check.hpp"
#include "doctest.h"
#include "facet/reduce.hpp"
#include "synth.hpp"

using namespace facet;

namespace {

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

// Eigenvalues of the sample covariance, descending.
Eigen::VectorXd covariance_eigenvalues(const Eigen::MatrixXd& x) {
    const Eigen::MatrixXd c = x.rowwise() - x.colwise().mean();
    const Eigen::MatrixXd cov = c.transpose() * c / static_cast<double>(x.rows() - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    return es.eigenvalues().reverse();
}

}  // namespace

TEST_CASE("rank-1 data gives one component with ratio 1") {
    test::Gauss g(1);
    Eigen::MatrixXd x(10, 3);
    for (int i = 0; i < 10; ++i) {
        const double t = g();
        x.row(i) << 1 + t, 2 + 2 * t, -1 + 3 * t;
    }
    const auto m = pca_fit(x, 2);
    CHECK(m.components() == 1);
    CHECK(m.rank_deficient);
    CHECK(m.explained_variance_ratio(0) == doctest::Approx(1.0).epsilon(1e-12));
    const Eigen::Vector3d dir = Eigen::Vector3d(1, 2, 3).normalized();
    CHECK(max_abs(m.basis.row(0).transpose() - dir) < 1e-12);
}

TEST_CASE("isotropic 2-D sample matches the eigenvalue oracle") {
    test::Gauss g(2);
    const Eigen::MatrixXd x = test::gaussian_matrix(g, 2000, 2);
    const auto m = pca_fit(x, 2);
    const Eigen::VectorXd ev = covariance_eigenvalues(x);
    for (int j = 0; j < 2; ++j) {
        CHECK(m.explained_variance(j) == doctest::Approx(ev(j)).epsilon(1e-10));
        CHECK(std::abs(m.explained_variance_ratio(j) - 0.5) < 0.05);
    }
}

TEST_CASE("orthogonal columns of norms 3, 2, 1") {
    Eigen::MatrixXd x(4, 3);
    x.col(0) << 1.5, 1.5, -1.5, -1.5;
    x.col(1) << 1, -1, 1, -1;
    x.col(2) << 0.5, -0.5, -0.5, 0.5;
    const auto m = pca_fit(x, 3);
    CHECK(m.components() == 3);
    CHECK(max_abs(m.basis - Eigen::MatrixXd::Identity(3, 3)) < 1e-12);
    CHECK(m.explained_variance_ratio(0) == doctest::Approx(9.0 / 14).epsilon(1e-12));
    CHECK(m.explained_variance_ratio(1) == doctest::Approx(4.0 / 14).epsilon(1e-12));
    CHECK(m.explained_variance_ratio(2) == doctest::Approx(1.0 / 14).epsilon(1e-12));
}

TEST_CASE("transform and inverse") {
    test::Gauss g(3);
    const Eigen::MatrixXd x = test::gaussian_matrix(g, 30, 6);
    const auto m = pca_fit(x, 6);
    CHECK(max_abs(pca_transform(m, m.mean.transpose())) < 1e-12);
    CHECK(max_abs(pca_inverse(m, pca_transform(m, x)) - x) < 1e-8);

    const Eigen::MatrixXd held = test::gaussian_matrix(g, 4, 6);
    const Eigen::MatrixXd oracle = (held.rowwise() - m.mean.transpose()) * m.basis.transpose();
    CHECK(max_abs(pca_transform(m, held) - oracle) < 1e-10);

    CHECK(max_abs(pca_inverse(m, Eigen::RowVectorXd::Zero(6)) - m.mean.transpose()) == 0.0);
    Eigen::RowVectorXd e = Eigen::RowVectorXd::Zero(6);
    e(2) = 1.0;
    CHECK(max_abs(pca_inverse(m, e) - (m.mean.transpose() + m.basis.row(2))) < 1e-15);

    CHECK_THROWS_KIND(pca_transform(m, Eigen::MatrixXd::Zero(2, 5)), ErrorKind::Shape);
    CHECK_THROWS_KIND(pca_inverse(m, Eigen::MatrixXd::Zero(2, 7)), ErrorKind::Shape);
}

TEST_CASE("random 50 x 20 matrices: oracle, orthonormality, ordering") {
    test::Gauss g(4);
    for (int trial = 0; trial < 10; ++trial) {
        const Eigen::MatrixXd x = test::gaussian_matrix(g, 50, 20) * test::gaussian_matrix(g, 20, 20);
        const auto m = pca_fit(x, 20);
        const Eigen::VectorXd ev = covariance_eigenvalues(x);
        for (int j = 0; j < 20; ++j) CHECK(std::abs(m.explained_variance(j) - ev(j)) / ev(j) < 1e-8);
        CHECK(max_abs(m.basis * m.basis.transpose() - Eigen::MatrixXd::Identity(20, 20)) < 1e-8);
        double cumulative = 0.0;
        for (int j = 0; j < 20; ++j) {
            if (j > 0) CHECK(m.explained_variance_ratio(j) <= m.explained_variance_ratio(j - 1));
            CHECK(m.explained_variance_ratio(j) >= 0.0);
            cumulative += m.explained_variance_ratio(j);
        }
        CHECK(cumulative <= 1.0 + 1e-8);
        // largest-magnitude entry of each component is positive
        for (int j = 0; j < 20; ++j) {
            Eigen::Index at = 0;
            m.basis.row(j).cwiseAbs().maxCoeff(&at);
            CHECK(m.basis(j, at) > 0.0);
        }
    }
}

TEST_CASE("components_for_variance and truncation") {
    Eigen::MatrixXd x(4, 3);
    x.col(0) << 1.5, 1.5, -1.5, -1.5;
    x.col(1) << 1, -1, 1, -1;
    x.col(2) << 0.5, -0.5, -0.5, 0.5;
    const auto m = pca_fit(x, 3);
    CHECK(components_for_variance(m, 0.5).value() == 1);
    CHECK(components_for_variance(m, 0.9).value() == 2);
    CHECK(components_for_variance(m, 1.0).value() == 3);
    const auto t = pca_fit(x, 1);
    CHECK_FALSE(components_for_variance(t, 0.95).has_value());
    const auto cut = pca_truncate(m, 2);
    CHECK(cut.components() == 2);
    CHECK(max_abs(cut.basis - m.basis.topRows(2)) == 0.0);
}

TEST_CASE("standardisation divides by the training deviation") {
    test::Gauss g(6);
    Eigen::MatrixXd x = test::gaussian_matrix(g, 40, 3);
    x.col(1) *= 1000.0;
    const auto plain = pca_fit(x, 1);
    const auto std_model = pca_fit(x, 1, {.standardize = true});
    CHECK(std_model.standardized());
    CHECK(std::abs(plain.basis(0, 1)) > 0.99);
    CHECK(std::abs(std_model.basis(0, 1)) < 0.99);
    const Eigen::MatrixXd z = pca_transform(std_model, x);
    const Eigen::MatrixXd xs = (x.rowwise() - std_model.mean.transpose()).array().rowwise() /
                               std_model.scale.transpose().array();
    CHECK(max_abs(z - xs * std_model.basis.transpose()) < 1e-10);
}

TEST_CASE("errors") {
    const Eigen::MatrixXd x = Eigen::MatrixXd::Random(5, 3);
    CHECK_THROWS_KIND(pca_fit(x, 0), ErrorKind::Shape);
    CHECK_THROWS_KIND(pca_fit(x, 4), ErrorKind::Shape);
    CHECK_THROWS_KIND(pca_fit(Eigen::MatrixXd::Random(1, 3), 1), ErrorKind::Shape);
    CHECK_THROWS_KIND(pca_fit(Eigen::MatrixXd::Ones(5, 3), 1), ErrorKind::Degeneracy);
}
