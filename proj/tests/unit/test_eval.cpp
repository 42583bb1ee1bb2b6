#include <cmath>

#include "check.hpp"
#include "doctest.h"
#include "facet/eval.hpp"
#include "reference.hpp"
#include "synth.hpp"

using namespace facet;

namespace {

using Vec = std::vector<double>;

// 500 faces, `raters` each: rating = round(5 + signal_sd * s + noise_sd * e), clamped to [1, 9].
RatingsTable rater_table(std::size_t faces, std::size_t raters, double signal_sd, double noise_sd, std::uint64_t seed,
                         bool reverse = false) {
    test::Gauss g(seed);
    std::vector<std::vector<int>> rows(faces);
    for (auto& row : rows) {
        const double s = signal_sd * g();
        for (std::size_t r = 0; r < raters; ++r) {
            row.push_back(std::clamp(static_cast<int>(std::lround(5 + s + noise_sd * g())), 1, 9));
        }
    }
    RatingsTable t;
    for (std::size_t k = 0; k < faces; ++k) {
        const std::size_t i = reverse ? faces - 1 - k : k;
        for (std::size_t r = 0; r < raters; ++r) t.add(test::face_name(i), "x", "r" + std::to_string(r), rows[i][r]);
    }
    return t;
}

}  // namespace

TEST_SUITE("correlation") {
    TEST_CASE("pearson") {
        CHECK(pearson(Vec{1, 2, 3, 5}, Vec{1, 2, 3, 5}).value == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(pearson(Vec{1, 2, 3, 5}, Vec{-1, -2, -3, -5}).value == doctest::Approx(-1.0).epsilon(1e-15));
        // Sxy = 3, Sxx = 2, Syy = 42/9
        CHECK(pearson(Vec{1, 2, 3}, Vec{1, 2, 4}).value == doctest::Approx(9.0 / std::sqrt(84.0)).epsilon(1e-15));
    }

    TEST_CASE("pearson degenerate inputs") {
        const auto c = pearson(Vec{1, 2, 3}, Vec{4, 4, 4});
        CHECK(c.value == 0.0);
        CHECK(c.degenerate);
        CHECK_THROWS_KIND(pearson(Vec{1, 1}, Vec{2, 2}), ErrorKind::Degeneracy);
        CHECK_THROWS_KIND(pearson(Vec{1, 2}, Vec{1, 2, 3}), ErrorKind::Shape);
        CHECK_THROWS_KIND(pearson(Vec{1}, Vec{1}), ErrorKind::Shape);
    }

    TEST_CASE("spearman") {
        const Vec x{0.3, 1.7, 2.2, 9.0};
        Vec y;
        for (const double v : x) y.push_back(std::exp(v) - 4);
        CHECK(spearman(x, y).value == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(spearman(Vec{1, 2, 3}, Vec{3, 1, 2}).value == doctest::Approx(-0.5).epsilon(1e-15));
        // ranks (1.5, 1.5, 3) vs (1, 2, 3): 1.5 / sqrt(1.5 * 2)
        CHECK(spearman(Vec{1, 1, 2}, Vec{1, 2, 3}).value == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-15));
        CHECK(average_ranks(Vec{5, 1, 5, 3}) == Vec{3.5, 1, 3.5, 2});
    }

    TEST_CASE("affine and monotone invariance, bounds") {
        test::Gauss g(1);
        for (int t = 0; t < 20; ++t) {
            Vec x;
            Vec y;
            for (int i = 0; i < 30; ++i) {
                x.push_back(g());
                y.push_back(x.back() + g());
            }
            const double r = pearson(x, y).value;
            CHECK(std::abs(r) <= 1.0);
            Vec ya;
            Vec ym;
            for (const double v : y) {
                ya.push_back(3 * v + 7);
                ym.push_back(std::cbrt(v));
            }
            CHECK(pearson(x, ya).value == doctest::Approx(r).epsilon(1e-12));
            CHECK(spearman(x, ym).value == doctest::Approx(spearman(x, y).value).epsilon(1e-12));
        }
    }

    TEST_CASE("summarize") {
        const auto s = summarize(Vec{1, 2, 3, 4});
        CHECK(s.mean == 2.5);
        CHECK(s.stddev == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-15));
        CHECK(s.count == 4);
        CHECK(summarize(Vec{2}).stddev == 0.0);
    }
}

TEST_SUITE("split-half") {
    TEST_CASE("identical raters give 1") {
        RatingsTable t;
        for (int f = 0; f < 10; ++f) {
            for (int r = 0; r < 6; ++r) t.add("f" + std::to_string(f), "x", "r" + std::to_string(r), 1 + f % 9);
        }
        const auto c = split_half_consistency(t, "x", 10, 3);
        REQUIRE(c.per_repeat.size() == 10);
        for (const double v : c.per_repeat) CHECK(v == doctest::Approx(1.0).epsilon(1e-15));
    }

    TEST_CASE("pure noise gives about 0") {
        const auto t = rater_table(500, 15, 0.0, 2.0, 11);
        CHECK(std::abs(split_half_consistency(t, "x", 50, 5).mean_correlation) < 0.1);
    }

    TEST_CASE("matches the Spearman-Brown expectation") {
        // Rounding to integers adds variance 1/12 to the rater noise.
        const double expected = test::spearman_brown_split_half(1.0, 1.0 + 1.0 / 12.0, 8, 7);
        CHECK(expected == doctest::Approx(0.8733).epsilon(1e-3));
        const auto t = rater_table(500, 15, 1.0, 1.0, 12);
        const auto c = split_half_consistency(t, "x", 50, 9);
        CHECK(std::abs(c.mean_correlation - expected) < 0.05);
    }

    TEST_CASE("deterministic, mean of repeats, independent of face order") {
        const auto a = split_half_consistency(rater_table(60, 5, 1.0, 1.0, 13), "x", 20, 4);
        const auto b = split_half_consistency(rater_table(60, 5, 1.0, 1.0, 13, true), "x", 20, 4);
        CHECK(a.per_repeat == b.per_repeat);
        double sum = 0.0;
        for (const double v : a.per_repeat) sum += v;
        CHECK(std::abs(a.mean_correlation - sum / 20) < 1e-12);
        CHECK(a.seed == 4);
        CHECK(a.faces == 60);
        const auto c = split_half_consistency(rater_table(60, 5, 1.0, 1.0, 13), "x", 20, 5);
        CHECK(c.per_repeat != a.per_repeat);
    }

    TEST_CASE("coverage errors list faces") {
        RatingsTable t;
        t.add("a", "x", "r1", 3);
        t.add("a", "x", "r2", 4);
        t.add("b", "x", "r1", 3);
        t.add("c", "x", "r1", 5);
        t.add("c", "x", "r2", 5);
        CHECK_THROWS_KIND_WITH(split_half_consistency(t, "x", 5, 1), ErrorKind::Coverage, "b");
        CHECK_THROWS_KIND(split_half_consistency(t, "y", 5, 1), ErrorKind::NotFound);
    }
}

TEST_SUITE("heatmap") {
    TEST_CASE("negation and self") {
        const AttributeScores s{{"a", {1, 2, 3, 4}}, {"b", {-1, -2, -3, -4}}};
        const auto h = attribute_heatmap(s);
        CHECK(h.matrix(0, 1) == doctest::Approx(-1.0).epsilon(1e-15));
        CHECK(h.matrix(0, 0) == 1.0);
        CHECK(h.matrix(1, 1) == 1.0);
    }

    TEST_CASE("three hand vectors") {
        const AttributeScores s{{"a", {1, 2, 3, 4}}, {"b", {2, 1, 4, 3}}, {"c", {4, 3, 2, 1}}};
        const auto h = attribute_heatmap(s);
        CHECK(h.matrix(0, 1) == doctest::Approx(0.6).epsilon(1e-15));
        CHECK(h.matrix(0, 2) == doctest::Approx(-1.0).epsilon(1e-15));
        CHECK(h.matrix(1, 2) == doctest::Approx(-0.6).epsilon(1e-15));
        CHECK((h.matrix - h.matrix.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }

    TEST_CASE("constant attribute is flagged") {
        const AttributeScores s{{"a", {1, 2, 3}}, {"k", {5, 5, 5}}};
        const auto h = attribute_heatmap(s);
        CHECK(h.degenerate == std::vector<AttributeName>{"k"});
        CHECK(h.matrix(0, 1) == 0.0);
        CHECK(h.matrix(1, 1) == 1.0);
    }

    TEST_CASE("common face permutation leaves the heatmap unchanged") {
        test::Gauss g(2);
        AttributeScores s;
        AttributeScores p;
        for (const char* name : {"a", "b", "c", "d"}) {
            Vec v;
            for (int i = 0; i < 12; ++i) v.push_back(g());
            Vec w(v.rbegin(), v.rend());
            s.emplace_back(name, v);
            p.emplace_back(name, w);
        }
        CHECK((attribute_heatmap(s).matrix - attribute_heatmap(p).matrix).cwiseAbs().maxCoeff() < 1e-12);
    }

    TEST_CASE("too few faces") {
        CHECK_THROWS_KIND(attribute_heatmap({{"a", {1, 2}}, {"b", {2, 1}}}), ErrorKind::Shape);
    }

    TEST_CASE("similarity") {
        AttributeHeatmap h1{{"a", "b", "c"}, Eigen::MatrixXd::Identity(3, 3), {}};
        h1.matrix(0, 1) = h1.matrix(1, 0) = 0.6;
        h1.matrix(0, 2) = h1.matrix(2, 0) = -1.0;
        h1.matrix(1, 2) = h1.matrix(2, 1) = -0.6;
        CHECK(heatmap_similarity(h1, h1) == doctest::Approx(1.0).epsilon(1e-15));
        AttributeHeatmap affine = h1;
        affine.matrix = (2.0 * h1.matrix.array() - 0.3).matrix();
        CHECK(heatmap_similarity(h1, affine) == doctest::Approx(1.0).epsilon(1e-14));
        AttributeHeatmap h2 = h1;
        h2.matrix(0, 1) = h2.matrix(1, 0) = 0.5;
        h2.matrix(0, 2) = h2.matrix(2, 0) = -0.5;
        h2.matrix(1, 2) = h2.matrix(2, 1) = 0.0;
        // upper triangles (0.6, -1, -0.6) and (0.5, -0.5, 0): Sxy = 4/5, Sxx = 312/225, Syy = 1/2
        CHECK(heatmap_similarity(h1, h2) == doctest::Approx(12.0 / std::sqrt(156.0)).epsilon(1e-14));
        AttributeHeatmap other = h1;
        other.attributes = {"a", "c", "b"};
        CHECK_THROWS_KIND(heatmap_similarity(h1, other), ErrorKind::Alignment);
    }
}

TEST_SUITE("attribution") {
    TEST_CASE("all-ones activations follow the weights") {
        const auto r = attribution_top_k(Eigen::MatrixXd::Ones(4, 4), Eigen::Vector4d(0.2, -1, 3, 0.5), 4);
        std::vector<std::size_t> order;
        for (const auto& u : r.unit_scores) order.push_back(u.unit);
        CHECK(order == std::vector<std::size_t>{2, 3, 0, 1});
    }

    TEST_CASE("hand-built 3 units, 2 faces") {
        Eigen::MatrixXd a(2, 3);
        a << 1, 2, 3, 3, 0, 1;
        // means (2, 1, 2) times weights (0.5, -1, 2) = (1, -1, 4)
        const auto r = attribution_top_k(a, Eigen::Vector3d(0.5, -1, 2), 2);
        REQUIRE(r.top().size() == 2);
        CHECK(r.top()[0].unit == 2);
        CHECK(r.top()[0].score == 4.0);
        CHECK(r.top()[1].unit == 0);
        CHECK(r.top()[1].score == 1.0);
        CHECK(r.unit_scores[2].unit == 1);
        CHECK(r.unit_scores[2].score == -1.0);
    }

    TEST_CASE("zero weights give zero scores in unit order") {
        Eigen::MatrixXd a(2, 3);
        a << 5, -2, 3, 1, 9, 1;
        const auto r = attribution_top_k(a, Eigen::Vector3d(0, 0, 0), 3);
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(r.unit_scores[j].unit == j);
            CHECK(r.unit_scores[j].score == 0.0);
        }
        const auto one = attribution_top_k(a, Eigen::Vector3d(1, 0, 1), 3);
        CHECK(one.unit_scores[2].unit == 1);
        CHECK(one.unit_scores[2].score == 0.0);
    }

    TEST_CASE("global rescaling keeps the ranking") {
        test::Gauss g(3);
        const Eigen::MatrixXd a = test::gaussian_matrix(g, 5, 8);
        const Eigen::VectorXd w = test::gaussian_matrix(g, 8, 1);
        const auto r1 = attribution_top_k(a, w, 8);
        const auto r2 = attribution_top_k(a * 3.5, w, 8);
        for (std::size_t j = 0; j < 8; ++j) CHECK(r1.unit_scores[j].unit == r2.unit_scores[j].unit);
    }

    TEST_CASE("bounds and shapes") {
        CHECK_THROWS_KIND(attribution_top_k(Eigen::MatrixXd::Ones(2, 3), Eigen::Vector3d(1, 2, 3), 4), ErrorKind::Bound);
        CHECK_THROWS_KIND(attribution_top_k(Eigen::MatrixXd::Ones(2, 2), Eigen::Vector3d(1, 2, 3), 1), ErrorKind::Shape);
    }

    TEST_CASE("spatial average of channel-major maps") {
        Eigen::MatrixXd flat(1, 6);
        flat << 1, 2, 3, 10, 20, 30;
        const Eigen::MatrixXd avg = spatial_average(flat, 2);
        CHECK(avg(0, 0) == 2.0);
        CHECK(avg(0, 1) == 20.0);
        CHECK_THROWS_KIND(spatial_average(flat, 4), ErrorKind::Shape);
    }
}
