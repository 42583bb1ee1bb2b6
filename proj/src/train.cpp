#include <algorithm>
#include <limits>

#include "facet/error.hpp"
#include "facet/pipeline.hpp"

namespace facet {

namespace {

Eigen::VectorXd gather_targets(const std::map<FaceId, double>& targets, std::span<const FaceId> faces) {
    Eigen::VectorXd y(static_cast<Eigen::Index>(faces.size()));
    for (std::size_t i = 0; i < faces.size(); ++i) {
        const auto it = targets.find(faces[i]);
        if (it == targets.end()) throw Error(ErrorKind::NotFound, "no target for face '" + faces[i] + "'");
        y(static_cast<Eigen::Index>(i)) = it->second;
    }
    return y;
}

double validation_score(const Eigen::VectorXd& predicted, const Eigen::VectorXd& actual) {
    try {
        return pearson(std::span<const double>(predicted.data(), static_cast<std::size_t>(predicted.size())),
                       std::span<const double>(actual.data(), static_cast<std::size_t>(actual.size())))
            .value;
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Degeneracy) return 0.0;
        throw;
    }
}

}  // namespace

Eigen::VectorXd TrainedPredictor::effective_weights() const {
    Eigen::VectorXd w = pca.basis.transpose() * ridge.weights;
    if (pca.standardized()) w = w.array() / pca.scale.array();
    return w;
}

TrainedPredictor train_one(const EmbeddingMatrix& features, const std::map<FaceId, double>& targets,
                           const AttributeName& attribute, const ModelSelection& selection, const Split& split,
                           const SplitSpec& origin) {
    if (selection.pca_dims.empty()) throw Error(ErrorKind::Config, "no PCA dimension candidates");
    selection.lambdas.validate();
    const std::size_t n_train = split.train.size();
    if (n_train < 3) {
        throw Error(ErrorKind::Size, "need at least 3 training faces, got " + std::to_string(n_train));
    }
    if (split.validation.size() < 2) throw Error(ErrorKind::Size, "need at least 2 validation faces");

    const Eigen::MatrixXd x_train = features.gather(split.train);
    const Eigen::MatrixXd x_val = features.gather(split.validation);
    const Eigen::VectorXd y_train = gather_targets(targets, split.train);
    const Eigen::VectorXd y_val = gather_targets(targets, split.validation);
    if ((y_train.array() == y_train(0)).all()) {
        throw Error(ErrorKind::Degeneracy, "training targets for '" + attribute + "' are constant");
    }

    std::vector<std::size_t> dims = selection.pca_dims;
    std::sort(dims.begin(), dims.end());
    const std::size_t cap = std::min(n_train - 1, features.cols());
    for (auto& dim : dims) dim = std::min(dim, cap);
    dims.erase(std::unique(dims.begin(), dims.end()), dims.end());
    if (dims.front() == 0) throw Error(ErrorKind::Config, "PCA dimension candidates must be positive");

    PcaOptions options;
    options.standardize = selection.standardize;
    const PcaModel full = pca_fit(x_train, dims.back(), options);
    for (auto& dim : dims) dim = std::min(dim, full.components());
    dims.erase(std::unique(dims.begin(), dims.end()), dims.end());

    const Eigen::MatrixXd z_train_all = pca_transform(full, x_train);
    const Eigen::MatrixXd z_val_all = pca_transform(full, x_val);

    SelectionRecord record;
    record.dim_candidates = dims;
    record.lambda_grid = selection.lambdas.values;
    record.split_seed = origin.seed;
    record.repeat_index = origin.repeat_index;
    record.train_faces = n_train;
    record.validation_faces = split.validation.size();

    double best_score = -std::numeric_limits<double>::infinity();
    std::size_t best_dim = dims.front();
    double best_lambda = selection.lambdas.values.front();
    for (const std::size_t dim : dims) {
        const auto k = static_cast<Eigen::Index>(dim);
        const Eigen::MatrixXd z_train = z_train_all.leftCols(k);
        const RidgeSystem system(z_train, y_train);
        LooCurve curve;
        curve.lambdas = selection.lambdas.values;
        for (const double lambda : curve.lambdas) curve.mse.push_back(system.loo_mse(lambda));
        const double lambda = select_lambda(curve);
        const RidgeModel model = system.fit(lambda);
        const double score = validation_score(ridge_predict(model, z_val_all.leftCols(k)), y_val);
        record.validation_scores.push_back(score);
        if (score > best_score) {
            best_score = score;
            best_dim = dim;
            best_lambda = lambda;
        }
    }

    TrainedPredictor predictor;
    predictor.attribute = attribute;
    predictor.feature_source = features.layer_name();
    predictor.pca = pca_truncate(full, best_dim);
    predictor.ridge = ridge_fit(z_train_all.leftCols(static_cast<Eigen::Index>(best_dim)), y_train, best_lambda);
    record.pca_dim = best_dim;
    record.lambda = best_lambda;
    predictor.selection = std::move(record);
    return predictor;
}

std::map<FaceId, double> predict_scores(const TrainedPredictor& predictor, const EmbeddingMatrix& features) {
    return predict_scores(predictor, features, features.face_ids());
}

std::map<FaceId, double> predict_scores(const TrainedPredictor& predictor, const EmbeddingMatrix& features,
                                        std::span<const FaceId> faces) {
    if (features.layer_name() != predictor.feature_source) {
        throw Error(ErrorKind::Source, "predictor was trained on '" + predictor.feature_source +
                                           "' but features come from '" + features.layer_name() + "'");
    }
    if (features.cols() != predictor.pca.input_dim()) {
        throw Error(ErrorKind::Shape, "predictor expects " + std::to_string(predictor.pca.input_dim()) +
                                          " features, got " + std::to_string(features.cols()));
    }
    std::map<FaceId, double> out;
    if (faces.empty()) return out;
    const Eigen::VectorXd scores = ridge_predict(predictor.ridge, pca_transform(predictor.pca, features.gather(faces)));
    for (std::size_t i = 0; i < faces.size(); ++i) out[faces[i]] = scores(static_cast<Eigen::Index>(i));
    return out;
}

double out_of_range_fraction(std::span<const double> predictions) {
    if (predictions.empty()) return 0.0;
    const auto outside = std::count_if(predictions.begin(), predictions.end(), [](double v) {
        return v < static_cast<double>(kMinRating) || v > static_cast<double>(kMaxRating);
    });
    return static_cast<double>(outside) / static_cast<double>(predictions.size());
}

}  // namespace facet
