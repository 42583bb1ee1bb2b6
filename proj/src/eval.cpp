#include "facet/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "facet/error.hpp"
#include "facet/rng.hpp"

namespace facet {

namespace {

bool is_constant(std::span<const double> v) noexcept {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

}  // namespace

Correlation pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw Error(ErrorKind::Shape, "correlation inputs have lengths " + std::to_string(x.size()) + " and " +
                                          std::to_string(y.size()));
    }
    if (x.size() < 2) throw Error(ErrorKind::Shape, "correlation needs at least 2 values");
    const bool cx = is_constant(x);
    const bool cy = is_constant(y);
    if (cx && cy) throw Error(ErrorKind::Degeneracy, "correlation undefined: both inputs are constant");
    if (cx || cy) return {0.0, true};

    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) return {0.0, true};
    return {std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0), false};
}

std::vector<double> average_ranks(std::span<const double> x) {
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(x.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
        const double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
        i = j + 1;
    }
    return ranks;
}

Correlation spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw Error(ErrorKind::Shape, "correlation inputs have lengths " + std::to_string(x.size()) + " and " +
                                          std::to_string(y.size()));
    }
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    return pearson(rx, ry);
}

Summary summarize(std::span<const double> values) {
    Summary s;
    s.count = values.size();
    if (values.empty()) return s;
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (const double v : values) ss += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return s;
}

// ---------------------------------------------------------------------------

ConsistencyResult split_half_consistency(const RatingsTable& table, const AttributeName& attribute,
                                         std::size_t repeats, std::uint64_t seed) {
    if (repeats == 0) throw Error(ErrorKind::Config, "split-half consistency needs at least one repeat");
    struct FaceRatings {
        const FaceId* id;
        std::vector<Rating> ratings;
    };
    std::vector<FaceRatings> faces;
    std::string thin;
    for (const auto& [key, ratings] : table.cells()) {
        if (key.second != attribute || ratings.empty()) continue;
        if (ratings.size() < 2) {
            thin += (thin.empty() ? "" : ", ") + key.first;
            continue;
        }
        FaceRatings f{&key.first, ratings};
        std::sort(f.ratings.begin(), f.ratings.end(),
                  [](const Rating& a, const Rating& b) { return a.rater_id < b.rater_id; });
        faces.push_back(std::move(f));
    }
    if (!thin.empty()) {
        throw Error(ErrorKind::Coverage, "attribute '" + attribute + "' has fewer than 2 raters for faces: " + thin);
    }
    if (faces.empty()) throw Error(ErrorKind::NotFound, "attribute '" + attribute + "' not present in ratings");
    if (faces.size() < 2) throw Error(ErrorKind::Size, "split-half consistency needs at least 2 faces");

    ConsistencyResult result;
    result.attribute = attribute;
    result.seed = seed;
    result.faces = faces.size();
    result.per_repeat.reserve(repeats);
    std::vector<double> first(faces.size());
    std::vector<double> second(faces.size());
    std::vector<int> values;
    for (std::size_t rep = 0; rep < repeats; ++rep) {
        const std::uint64_t repeat_seed = combine_seed(seed, static_cast<std::uint64_t>(rep));
        for (std::size_t f = 0; f < faces.size(); ++f) {
            values.clear();
            for (const auto& r : faces[f].ratings) values.push_back(r.value);
            SplitMix64 rng(combine_seed(repeat_seed, *faces[f].id));
            shuffle(std::span<int>(values), rng);
            const std::size_t half = (values.size() + 1) / 2;
            const double a = std::accumulate(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(half), 0.0);
            const double b = std::accumulate(values.begin() + static_cast<std::ptrdiff_t>(half), values.end(), 0.0);
            first[f] = a / static_cast<double>(half);
            second[f] = b / static_cast<double>(values.size() - half);
        }
        result.per_repeat.push_back(pearson(first, second).value);
    }
    result.mean_correlation = summarize(result.per_repeat).mean;
    return result;
}

// ---------------------------------------------------------------------------

AttributeHeatmap attribute_heatmap(const AttributeScores& scores) {
    if (scores.empty()) throw Error(ErrorKind::Shape, "heatmap needs at least one attribute");
    const std::size_t n = scores.front().second.size();
    for (const auto& [name, v] : scores) {
        if (v.size() != n) throw Error(ErrorKind::Shape, "heatmap scores for '" + name + "' have a different length");
    }
    if (n < 3) throw Error(ErrorKind::Shape, "heatmap needs at least 3 faces");

    const auto m = static_cast<Eigen::Index>(scores.size());
    AttributeHeatmap out;
    out.matrix = Eigen::MatrixXd::Identity(m, m);
    std::vector<std::vector<double>> ranks;
    std::vector<bool> constant;
    for (const auto& [name, v] : scores) {
        out.attributes.push_back(name);
        ranks.push_back(average_ranks(v));
        constant.push_back(is_constant(v));
        if (constant.back()) out.degenerate.push_back(name);
    }
    for (Eigen::Index a = 0; a < m; ++a) {
        for (Eigen::Index b = a + 1; b < m; ++b) {
            double r = 0.0;
            if (!constant[static_cast<std::size_t>(a)] && !constant[static_cast<std::size_t>(b)]) {
                r = pearson(ranks[static_cast<std::size_t>(a)], ranks[static_cast<std::size_t>(b)]).value;
            }
            out.matrix(a, b) = r;
            out.matrix(b, a) = r;
        }
    }
    return out;
}

double heatmap_similarity(const AttributeHeatmap& a, const AttributeHeatmap& b) {
    if (a.attributes != b.attributes) throw Error(ErrorKind::Alignment, "heatmaps cover different attribute lists");
    std::vector<double> ua;
    std::vector<double> ub;
    const auto m = a.matrix.rows();
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = i + 1; j < m; ++j) {
            ua.push_back(a.matrix(i, j));
            ub.push_back(b.matrix(i, j));
        }
    }
    return pearson(ua, ub).value;
}

// ---------------------------------------------------------------------------

AttributionRanking attribution_top_k(const Eigen::MatrixXd& activations, const Eigen::VectorXd& effective_weights,
                                     std::size_t k) {
    if (activations.cols() != effective_weights.size()) {
        throw Error(ErrorKind::Shape, "attribution: " + std::to_string(activations.cols()) + " units but " +
                                          std::to_string(effective_weights.size()) + " weights");
    }
    if (activations.rows() < 1) throw Error(ErrorKind::Shape, "attribution needs at least one face");
    if (!activations.allFinite() || !effective_weights.allFinite()) {
        throw Error(ErrorKind::Data, "attribution inputs contain non-finite values");
    }
    const auto units = static_cast<std::size_t>(effective_weights.size());
    if (k > units) {
        throw Error(ErrorKind::Bound, "k = " + std::to_string(k) + " exceeds the " + std::to_string(units) + " units");
    }
    const Eigen::VectorXd mean_activation = activations.colwise().mean().transpose();
    AttributionRanking ranking;
    ranking.k_top = k;
    ranking.unit_scores.reserve(units);
    for (std::size_t j = 0; j < units; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        ranking.unit_scores.push_back({j, mean_activation(jj) * effective_weights(jj)});
    }
    std::stable_sort(ranking.unit_scores.begin(), ranking.unit_scores.end(),
                     [](const UnitScore& a, const UnitScore& b) { return a.score > b.score; });
    return ranking;
}

Eigen::MatrixXd spatial_average(const Eigen::MatrixXd& flat, std::size_t channels) {
    if (channels == 0 || flat.cols() % static_cast<Eigen::Index>(channels) != 0) {
        throw Error(ErrorKind::Shape, "width " + std::to_string(flat.cols()) + " is not a multiple of " +
                                          std::to_string(channels) + " channels");
    }
    const auto c = static_cast<Eigen::Index>(channels);
    const Eigen::Index positions = flat.cols() / c;
    Eigen::MatrixXd out(flat.rows(), c);
    for (Eigen::Index ch = 0; ch < c; ++ch) {
        out.col(ch) = flat.middleCols(ch * positions, positions).rowwise().mean();
    }
    return out;
}

}  // namespace facet
