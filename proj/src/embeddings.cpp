#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "facet/data_model.hpp"
#include "facet/error.hpp"
#include "binary_io.hpp"

namespace facet {

using detail::LeReader;
using detail::LeWriter;

EmbeddingMatrix::EmbeddingMatrix(std::string layer_name, std::vector<FaceId> face_ids, FloatMatrix data)
    : layer_name_(std::move(layer_name)), face_ids_(std::move(face_ids)), data_(std::move(data)) {
    if (face_ids_.empty() || data_.cols() == 0) {
        throw Error(ErrorKind::Data, "embedding matrix must have n >= 1 and d >= 1");
    }
    if (static_cast<std::size_t>(data_.rows()) != face_ids_.size()) {
        throw Error(ErrorKind::Data, "embedding matrix has " + std::to_string(data_.rows()) + " rows but " +
                                         std::to_string(face_ids_.size()) + " face ids");
    }
    if (!data_.allFinite()) throw Error(ErrorKind::Data, "embedding matrix has non-finite entries");
    index_.reserve(face_ids_.size());
    for (std::size_t i = 0; i < face_ids_.size(); ++i) {
        validate_face_id(face_ids_[i]);
        if (!index_.emplace(face_ids_[i], i).second) {
            throw Error(ErrorKind::Duplicate, "duplicate face id '" + face_ids_[i] + "' in embedding matrix");
        }
    }
}

std::optional<std::size_t> EmbeddingMatrix::row_of(const FaceId& face) const {
    const auto it = index_.find(face);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Eigen::MatrixXd EmbeddingMatrix::gather(std::span<const FaceId> faces) const {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(faces.size()), data_.cols());
    for (std::size_t i = 0; i < faces.size(); ++i) {
        const auto row = row_of(faces[i]);
        if (!row) throw Error(ErrorKind::NotFound, "face '" + faces[i] + "' not in layer " + layer_name_);
        out.row(static_cast<Eigen::Index>(i)) = data_.row(static_cast<Eigen::Index>(*row)).cast<double>();
    }
    return out;
}

EmbeddingMatrix read_embeddings(std::istream& in) {
    LeReader reader(in, "embedding file");
    char magic[4];
    reader.bytes(magic, 4);
    if (std::memcmp(magic, kEmbeddingMagic.data(), 4) != 0) reader.fail("bad magic (expected FEMB)");
    const auto version = reader.scalar<std::uint32_t>();
    if (version != kEmbeddingVersion) {
        reader.fail("unsupported version " + std::to_string(version) + " (reader supports " +
                     std::to_string(kEmbeddingVersion) + ")");
    }
    const auto n = reader.scalar<std::uint64_t>();
    const auto d = reader.scalar<std::uint64_t>();
    if (n == 0 || d == 0) reader.fail("n and d must be positive");
    std::uint64_t cells = 0;
    std::uint64_t payload = 0;
    if (__builtin_mul_overflow(n, d, &cells) || __builtin_mul_overflow(cells, std::uint64_t{4}, &payload) ||
        cells > static_cast<std::uint64_t>(std::numeric_limits<Eigen::Index>::max())) {
        reader.fail("n*d overflows");
    }
    std::string layer = reader.string();
    // Each id record takes at least 4 bytes, so n is bounded by the remaining size.
    if (const auto rem = reader.remaining(); rem && (n > *rem / 4 || payload > *rem)) {
        reader.fail("truncated payload");
    }
    std::vector<FaceId> ids;
    ids.reserve(static_cast<std::size_t>(n));
    for (std::uint64_t i = 0; i < n; ++i) ids.push_back(reader.string());

    FloatMatrix data(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);
    reader.bytes(data.data(), static_cast<std::size_t>(payload));
    if constexpr (std::endian::native == std::endian::big) {
        auto* words = reinterpret_cast<std::uint32_t*>(data.data());
        for (std::uint64_t i = 0; i < cells; ++i) words[i] = __builtin_bswap32(words[i]);
    }
    try {
        return EmbeddingMatrix(std::move(layer), std::move(ids), std::move(data));
    } catch (const Error& e) {
        reader.fail(e.what());
    }
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open embedding file " + path.string());
    return read_embeddings(in);
}

void write_embeddings(const EmbeddingMatrix& matrix, std::ostream& out) {
    LeWriter writer(out);
    writer.raw(kEmbeddingMagic.data(), 4);
    writer.scalar<std::uint32_t>(kEmbeddingVersion);
    writer.scalar<std::uint64_t>(matrix.rows());
    writer.scalar<std::uint64_t>(matrix.cols());
    writer.string(matrix.layer_name());
    for (const auto& id : matrix.face_ids()) writer.string(id);
    const FloatMatrix& data = matrix.data();
    for (Eigen::Index i = 0; i < data.size(); ++i) writer.scalar<float>(data.data()[i]);
}

void save_embeddings(const EmbeddingMatrix& matrix, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    write_embeddings(matrix, out);
    if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace facet
