#include <cstring>
#include <fstream>

#include "binary_io.hpp"
#include "facet/error.hpp"
#include "facet/pipeline.hpp"

namespace facet {

using detail::LeReader;
using detail::LeWriter;

namespace {

void put_vector(LeWriter& w, const Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) w.scalar<double>(v(i));
}

Eigen::VectorXd get_vector(LeReader& r, std::uint64_t n) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = r.scalar<double>();
    return v;
}

}  // namespace

// Layout (little-endian), version 1:
//   "FPRD" u32:version
//   str:attribute str:feature_source u64:d u64:k
//   f64[d]:mean u8:standardized [f64[d]:scale]
//   f64[k*d]:basis (row-major) f64[k]:explained_variance
//   f64[k]:explained_variance_ratio u8:rank_deficient
//   f64[k]:weights f64:intercept f64:lambda f64:training_target_mean
//   u64:pca_dim f64:lambda u64:m u64[m]:dim_candidates f64[m]:validation_scores
//   u64:g f64[g]:lambda_grid u64:split_seed u64:repeat_index
//   u64:train_faces u64:validation_faces
// where str is u32 length + UTF-8 bytes.
void write_predictor(const TrainedPredictor& p, std::ostream& out) {
    const auto d = static_cast<std::uint64_t>(p.pca.input_dim());
    const auto k = static_cast<std::uint64_t>(p.pca.components());
    if (p.ridge.input_dim() != k) {
        throw Error(ErrorKind::Shape, "predictor PCA output dim " + std::to_string(k) + " != ridge input dim " +
                                          std::to_string(p.ridge.input_dim()));
    }
    LeWriter w(out);
    w.raw(kPredictorMagic.data(), 4);
    w.scalar<std::uint32_t>(kPredictorVersion);
    w.string(p.attribute);
    w.string(p.feature_source);
    w.scalar<std::uint64_t>(d);
    w.scalar<std::uint64_t>(k);
    put_vector(w, p.pca.mean);
    w.scalar<std::uint8_t>(p.pca.standardized() ? 1 : 0);
    if (p.pca.standardized()) put_vector(w, p.pca.scale);
    for (Eigen::Index r = 0; r < p.pca.basis.rows(); ++r) {
        for (Eigen::Index c = 0; c < p.pca.basis.cols(); ++c) w.scalar<double>(p.pca.basis(r, c));
    }
    put_vector(w, p.pca.explained_variance);
    put_vector(w, p.pca.explained_variance_ratio);
    w.scalar<std::uint8_t>(p.pca.rank_deficient ? 1 : 0);
    put_vector(w, p.ridge.weights);
    w.scalar<double>(p.ridge.intercept);
    w.scalar<double>(p.ridge.lambda);
    w.scalar<double>(p.ridge.training_target_mean);

    const SelectionRecord& s = p.selection;
    w.scalar<std::uint64_t>(s.pca_dim);
    w.scalar<double>(s.lambda);
    w.scalar<std::uint64_t>(s.dim_candidates.size());
    for (const auto dim : s.dim_candidates) w.scalar<std::uint64_t>(dim);
    for (std::size_t i = 0; i < s.dim_candidates.size(); ++i) {
        w.scalar<double>(i < s.validation_scores.size() ? s.validation_scores[i] : 0.0);
    }
    w.scalar<std::uint64_t>(s.lambda_grid.size());
    for (const double l : s.lambda_grid) w.scalar<double>(l);
    w.scalar<std::uint64_t>(s.split_seed);
    w.scalar<std::uint64_t>(s.repeat_index);
    w.scalar<std::uint64_t>(s.train_faces);
    w.scalar<std::uint64_t>(s.validation_faces);
}

TrainedPredictor read_predictor(std::istream& in) {
    LeReader r(in, "predictor file");
    char magic[4];
    r.bytes(magic, 4);
    if (std::memcmp(magic, kPredictorMagic.data(), 4) != 0) r.fail("bad magic (expected FPRD)");
    const auto version = r.scalar<std::uint32_t>();
    if (version != kPredictorVersion) {
        r.fail("file version " + std::to_string(version) + " is not supported (reader version " +
               std::to_string(kPredictorVersion) + ")");
    }
    TrainedPredictor p;
    p.attribute = r.string();
    p.feature_source = r.string();
    const auto d = r.count(8);
    const auto k = r.count(0);
    if (d == 0 || k == 0 || k > d) r.fail("bad dimensions d=" + std::to_string(d) + " k=" + std::to_string(k));
    std::uint64_t basis_cells = 0;
    if (__builtin_mul_overflow(k, d, &basis_cells) || (r.remaining() && basis_cells > *r.remaining() / 8)) {
        r.fail("truncated payload");
    }
    p.pca.mean = get_vector(r, d);
    const auto standardized = r.scalar<std::uint8_t>();
    if (standardized > 1) r.fail("bad standardisation flag");
    if (standardized == 1) p.pca.scale = get_vector(r, d);
    p.pca.basis.resize(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d));
    for (Eigen::Index row = 0; row < p.pca.basis.rows(); ++row) {
        for (Eigen::Index c = 0; c < p.pca.basis.cols(); ++c) p.pca.basis(row, c) = r.scalar<double>();
    }
    p.pca.explained_variance = get_vector(r, k);
    p.pca.explained_variance_ratio = get_vector(r, k);
    p.pca.rank_deficient = r.scalar<std::uint8_t>() != 0;
    p.ridge.weights = get_vector(r, k);
    p.ridge.intercept = r.scalar<double>();
    p.ridge.lambda = r.scalar<double>();
    p.ridge.training_target_mean = r.scalar<double>();

    SelectionRecord& s = p.selection;
    s.pca_dim = r.scalar<std::uint64_t>();
    s.lambda = r.scalar<double>();
    const auto m = r.count(16);
    for (std::uint64_t i = 0; i < m; ++i) s.dim_candidates.push_back(r.scalar<std::uint64_t>());
    for (std::uint64_t i = 0; i < m; ++i) s.validation_scores.push_back(r.scalar<double>());
    const auto g = r.count(8);
    for (std::uint64_t i = 0; i < g; ++i) s.lambda_grid.push_back(r.scalar<double>());
    s.split_seed = r.scalar<std::uint64_t>();
    s.repeat_index = r.scalar<std::uint64_t>();
    s.train_faces = r.scalar<std::uint64_t>();
    s.validation_faces = r.scalar<std::uint64_t>();
    if (!r.at_end()) r.fail("trailing bytes after predictor record");
    if (s.dim_candidates.empty() || s.lambda_grid.empty()) r.fail("empty selection grids");
    return p;
}

void save_predictor(const TrainedPredictor& predictor, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    write_predictor(predictor, out);
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

TrainedPredictor load_predictor(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open predictor file " + path.string());
    return read_predictor(in);
}

}  // namespace facet
