#ifndef FACET_PIPELINE_HPP
#define FACET_PIPELINE_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "facet/data_model.hpp"
#include "facet/eval.hpp"
#include "facet/geomfeat.hpp"
#include "facet/reduce.hpp"
#include "facet/ridge.hpp"

namespace facet {

inline constexpr const char* kToolVersion = "0.1.0";

/// How the PCA dimension and ridge lambda were chosen for one predictor.
struct SelectionRecord {
    std::size_t pca_dim = 0;
    double lambda = 0.0;
    /// Candidates actually tried, after capping at min(n_train - 1, d, rank).
    std::vector<std::size_t> dim_candidates;
    /// Validation Pearson per candidate, parallel to dim_candidates.
    std::vector<double> validation_scores;
    std::vector<double> lambda_grid;
    std::uint64_t split_seed = 0;
    std::uint64_t repeat_index = 0;
    std::size_t train_faces = 0;
    std::size_t validation_faces = 0;
};

struct TrainedPredictor {
    AttributeName attribute;
    std::string feature_source;
    PcaModel pca;
    RidgeModel ridge;
    SelectionRecord selection;

    /// Gradient of the prediction with respect to the raw input features:
    /// basis' * w, divided by the standardisation scale when present.
    Eigen::VectorXd effective_weights() const;
};

struct ModelSelection {
    std::vector<std::size_t> pca_dims{8, 16, 32, 64, 128, 256};
    LambdaGrid lambdas = LambdaGrid::standard();
    bool standardize = false;
};

/// Fits PCA on the training faces for every candidate dimension, picks lambda
/// by leave-one-out on the training faces, scores validation Pearson, keeps
/// the best dimension (ties to the smaller) and refits on the training faces.
/// Test faces are never read. Throws Size with fewer than 3 training faces,
/// Degeneracy when the training targets are constant, NotFound when a split
/// face lacks features or a target.
TrainedPredictor train_one(const EmbeddingMatrix& features, const std::map<FaceId, double>& targets,
                           const AttributeName& attribute, const ModelSelection& selection, const Split& split,
                           const SplitSpec& origin = {});

/// Applies the predictor to `faces` (all rows when omitted). Throws Source
/// when the features come from a different layer.
std::map<FaceId, double> predict_scores(const TrainedPredictor& predictor, const EmbeddingMatrix& features);
std::map<FaceId, double> predict_scores(const TrainedPredictor& predictor, const EmbeddingMatrix& features,
                                        std::span<const FaceId> faces);

/// Fraction of values outside the rating scale [1, 9].
double out_of_range_fraction(std::span<const double> predictions);

inline constexpr std::array<char, 4> kPredictorMagic{'F', 'P', 'R', 'D'};
inline constexpr std::uint32_t kPredictorVersion = 1;

void write_predictor(const TrainedPredictor& predictor, std::ostream& out);
TrainedPredictor read_predictor(std::istream& in);
void save_predictor(const TrainedPredictor& predictor, const std::filesystem::path& path);
TrainedPredictor load_predictor(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Experiment configuration

struct ExperimentConfig {
    std::filesystem::path ratings;
    std::optional<std::filesystem::path> landmarks;
    std::optional<std::filesystem::path> images_dir;
    std::optional<std::filesystem::path> geom_config;
    std::vector<std::filesystem::path> embeddings;
    std::vector<AttributeName> attributes = default_attributes();
    ModelSelection selection;
    std::size_t repeats = 50;
    SplitFractions fractions;
    std::uint64_t seed = 0;

    /// FNV-1a of the config file bytes; 0 when built in code.
    std::uint64_t config_hash = 0;
    /// "config" or "FACET_SEED".
    std::string seed_source = "config";
};

/// Keys accepted in an experiment config file.
const std::vector<std::string>& experiment_config_keys();

/// Relative paths resolve against `base_dir`. Unknown keys, missing required
/// keys (ratings, seed, and one of embeddings / landmarks) and bad values are
/// Config errors naming the key.
ExperimentConfig parse_experiment_config(const KvConfig& kv, const std::filesystem::path& base_dir);
/// Parses, hashes and checks that every referenced file exists.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
/// Replaces the seed with the value of FACET_SEED when `env_value` is set.
void apply_seed_override(ExperimentConfig& config, const char* env_value);

// ---------------------------------------------------------------------------
// Data loading

struct GeomExtraction {
    EmbeddingMatrix features;
    /// Faces left out, with the reason.
    std::vector<std::pair<FaceId, std::string>> excluded;
    /// "face:feature" for every degenerate-convention value.
    std::vector<std::string> flags;
    bool windows_used = false;
};

/// Geometric features for every face, exported as a "geom-v1" layer. With an
/// images directory, windows use `<images_dir>/<face_id>.ppm`; faces without
/// an image or with degenerate geometry are excluded. Without one, windows
/// are skipped for all faces. Throws Data if every face is excluded.
GeomExtraction extract_geom_embeddings(const LandmarkMap& landmarks,
                                       const std::optional<std::filesystem::path>& images_dir,
                                       const GeomConfig& config);

struct ExperimentData {
    RatingsTable ratings;
    /// Feature sources in config order; geometric features computed from
    /// landmarks come first.
    std::vector<EmbeddingMatrix> sources;
    GeomConfig geom;
    std::vector<std::pair<FaceId, std::string>> geom_excluded;
};

ExperimentData load_experiment_data(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// Evaluation

struct CellResult {
    AttributeName attribute;
    std::string source;
    std::vector<double> test_pearson;
    std::vector<double> out_of_range;
    Summary summary;
    bool failed = false;
    std::string error;
};

struct HumanResult {
    AttributeName attribute;
    ConsistencyResult consistency;
    Summary summary;
    bool failed = false;
    std::string error;
};

struct HeatmapComparison {
    AttributeHeatmap human;
    AttributeHeatmap model;
    std::optional<double> similarity;
    std::size_t faces = 0;
};

struct EvalReport {
    std::vector<AttributeName> attributes;
    std::vector<std::string> sources;
    /// Source used for the Baseline II column ("geom-v1"), if any.
    std::optional<std::string> baseline_source;
    /// Source used for the model column: the first non-geometric source.
    std::optional<std::string> model_source;
    std::vector<HumanResult> human;
    /// Attribute-major, then source in `sources` order.
    std::vector<CellResult> cells;
    std::optional<HeatmapComparison> heatmaps;
    std::string heatmap_note;
    std::size_t repeats = 0;

    const CellResult* cell(const AttributeName& attribute, const std::string& source) const;
    const HumanResult* human_for(const AttributeName& attribute) const;
};

/// Seeds derived from the master seed: per-attribute face splits,
/// Baseline I rater splits and the shared heatmap split.
std::uint64_t split_seed(std::uint64_t master, const AttributeName& attribute);
std::uint64_t consistency_seed(std::uint64_t master, const AttributeName& attribute);
std::uint64_t heatmap_seed(std::uint64_t master);

/// Faces carrying a target for `attribute` and a row in every source, sorted.
std::vector<FaceId> common_faces(const std::map<FaceId, double>& targets, std::span<const EmbeddingMatrix> sources);

/// Runs every repeat for every attribute and source. Results do not depend
/// on `jobs`.
EvalReport evaluate_repeats(const ExperimentConfig& config, const ExperimentData& data, std::size_t jobs = 1);
EvalReport evaluate_repeats(const ExperimentConfig& config, std::size_t jobs = 1);

/// Trains one predictor per attribute and source on the shared heatmap split.
std::vector<TrainedPredictor> train_final(const ExperimentConfig& config, const ExperimentData& data,
                                          std::vector<std::string>& failures, std::size_t jobs = 1);

}  // namespace facet

#endif
