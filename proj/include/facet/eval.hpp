#ifndef FACET_EVAL_HPP
#define FACET_EVAL_HPP

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "facet/data_model.hpp"

namespace facet {

/// A correlation value; `degenerate` is set when exactly one input was
/// constant, in which case `value` is 0.
struct Correlation {
    double value = 0.0;
    bool degenerate = false;
};

/// Sample Pearson r clamped to [-1, 1]. Throws Shape on length mismatch or
/// n < 2 and Degeneracy when both inputs are constant.
Correlation pearson(std::span<const double> x, std::span<const double> y);

/// 1-based ranks, ties sharing their average rank.
std::vector<double> average_ranks(std::span<const double> x);

/// Pearson correlation of the average ranks.
Correlation spearman(std::span<const double> x, std::span<const double> y);

struct Summary {
    double mean = 0.0;
    /// Sample standard deviation (n - 1); 0 for a single value.
    double stddev = 0.0;
    std::size_t count = 0;
};

Summary summarize(std::span<const double> values);

// ---------------------------------------------------------------------------

struct ConsistencyResult {
    AttributeName attribute;
    double mean_correlation = 0.0;
    std::vector<double> per_repeat;
    std::uint64_t seed = 0;
    std::size_t faces = 0;
};

/// Split-half rater agreement. Each repeat, every face's raters (sorted by
/// rater id) are shuffled with SplitMix64 seeded by
/// combine_seed(combine_seed(seed, repeat), face_id); the first ceil(r/2)
/// form one group and the rest the other. The two per-face group-mean
/// vectors are correlated with pearson. Throws Coverage listing every face
/// with fewer than two raters, NotFound if the attribute is absent.
ConsistencyResult split_half_consistency(const RatingsTable& table, const AttributeName& attribute,
                                         std::size_t repeats, std::uint64_t seed);

// ---------------------------------------------------------------------------

/// Ordered (attribute, per-face scores) pairs; every vector uses the same
/// face order.
using AttributeScores = std::vector<std::pair<AttributeName, std::vector<double>>>;

struct AttributeHeatmap {
    std::vector<AttributeName> attributes;
    Eigen::MatrixXd matrix;
    /// Attributes whose scores were constant; their off-diagonal entries are 0.
    std::vector<AttributeName> degenerate;
};

/// Spearman correlation between every pair of attributes.
AttributeHeatmap attribute_heatmap(const AttributeScores& scores);

/// Pearson correlation of the strictly-upper triangles (row-major). Throws
/// Alignment when the attribute lists differ.
double heatmap_similarity(const AttributeHeatmap& a, const AttributeHeatmap& b);

// ---------------------------------------------------------------------------

struct UnitScore {
    std::size_t unit = 0;
    double score = 0.0;
};

struct AttributionRanking {
    /// Every unit, by descending score; equal scores keep unit order.
    std::vector<UnitScore> unit_scores;
    std::size_t k_top = 0;

    std::span<const UnitScore> top() const noexcept { return {unit_scores.data(), k_top}; }
};

/// score(j) = mean_i activations(i, j) * effective_weights(j), where the
/// effective weight folds the PCA projection and the output weight into one
/// number per unit. Throws Bound when k exceeds the unit count.
AttributionRanking attribution_top_k(const Eigen::MatrixXd& activations, const Eigen::VectorXd& effective_weights,
                                     std::size_t k);

/// Channel means of channel-major flattened maps: n x (channels * positions)
/// becomes n x channels. Throws Shape if the width is not a multiple.
Eigen::MatrixXd spatial_average(const Eigen::MatrixXd& flat, std::size_t channels);

}  // namespace facet

#endif
