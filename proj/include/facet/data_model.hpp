#ifndef FACET_DATA_MODEL_HPP
#define FACET_DATA_MODEL_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace facet {

/// Face identifiers are the source dataset's file stems: nonempty UTF-8,
/// no commas, no control characters.
using FaceId = std::string;
using AttributeName = std::string;

bool is_valid_face_id(std::string_view id) noexcept;

/// Throws a Data error when `id` is not a valid FaceId.
void validate_face_id(std::string_view id);

/// The forty social attributes (twenty opposed pairs) rated in the source
/// dataset, in pair order.
const std::vector<AttributeName>& default_attributes();

// ---------------------------------------------------------------------------
// Ratings

constexpr int kMinRating = 1;
constexpr int kMaxRating = 9;

struct Rating {
    std::string rater_id;
    int value = 0;

    friend bool operator==(const Rating&, const Rating&) = default;
};

/// Long-format rating store: (face, attribute) -> ratings in insertion order.
class RatingsTable {
public:
    using CellKey = std::pair<FaceId, AttributeName>;
    using Cells = std::map<CellKey, std::vector<Rating>>;

    /// Throws Data on an invalid id or out-of-range rating, Duplicate when the
    /// (face, attribute, rater) triple already exists.
    void add(const FaceId& face, const AttributeName& attribute, const std::string& rater_id, int rating);

    const std::vector<Rating>* cell(const FaceId& face, const AttributeName& attribute) const;
    const Cells& cells() const noexcept { return cells_; }
    std::size_t row_count() const noexcept { return rows_; }
    bool has_attribute(const AttributeName& attribute) const;

    std::vector<AttributeName> attributes() const;
    std::vector<FaceId> faces() const;
    /// Faces with at least one rating for `attribute`, sorted.
    std::vector<FaceId> faces_with(const AttributeName& attribute) const;

private:
    Cells cells_;
    std::size_t rows_ = 0;
};

RatingsTable read_ratings(std::istream& in);
RatingsTable load_ratings(const std::filesystem::path& path);
void write_ratings(const RatingsTable& table, std::ostream& out);
void save_ratings(const RatingsTable& table, const std::filesystem::path& path);

/// Per-face arithmetic mean of the ratings for one attribute.
/// Throws NotFound when no face carries the attribute.
std::map<FaceId, double> average_ratings(const RatingsTable& table, const AttributeName& attribute);

// ---------------------------------------------------------------------------
// Landmarks

constexpr std::size_t kLandmarkCount = 68;

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

/// The 68-point annotation (jaw 0-16, brows 17-26, nose 27-35, eyes 36-47,
/// mouth 48-67) in image pixel coordinates, y growing downward.
class LandmarkSet {
public:
    using Points = std::array<Point2, kLandmarkCount>;

    LandmarkSet() = default;
    /// Throws Data if any coordinate is non-finite.
    explicit LandmarkSet(const Points& points);
    /// Throws Data unless `points` has exactly 68 finite entries.
    static LandmarkSet from(std::span<const Point2> points);

    const Point2& operator[](std::size_t i) const noexcept { return points_[i]; }
    const Points& points() const noexcept { return points_; }
    static constexpr std::size_t size() noexcept { return kLandmarkCount; }

    friend bool operator==(const LandmarkSet&, const LandmarkSet&) = default;

private:
    Points points_{};
};

/// Index of the bilateral counterpart of each landmark (self for midline points).
const std::array<std::size_t, kLandmarkCount>& landmark_mirror_map();

using LandmarkMap = std::map<FaceId, LandmarkSet>;

LandmarkMap read_landmarks(std::istream& in);
LandmarkMap load_landmarks(const std::filesystem::path& path);
void write_landmarks(const LandmarkMap& landmarks, std::ostream& out);
void save_landmarks(const LandmarkMap& landmarks, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Embeddings

using FloatMatrix = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// n x d feature matrix with one row per face, labelled with the layer it
/// was exported from.
class EmbeddingMatrix {
public:
    EmbeddingMatrix() = default;
    /// Throws Data when shapes disagree, n or d is zero, ids repeat, or any
    /// entry is non-finite.
    EmbeddingMatrix(std::string layer_name, std::vector<FaceId> face_ids, FloatMatrix data);

    const std::string& layer_name() const noexcept { return layer_name_; }
    const std::vector<FaceId>& face_ids() const noexcept { return face_ids_; }
    const FloatMatrix& data() const noexcept { return data_; }
    std::size_t rows() const noexcept { return face_ids_.size(); }
    std::size_t cols() const noexcept { return static_cast<std::size_t>(data_.cols()); }

    std::optional<std::size_t> row_of(const FaceId& face) const;

    /// Rows for `faces` in the given order, widened to double. Throws
    /// NotFound for an unknown face.
    Eigen::MatrixXd gather(std::span<const FaceId> faces) const;

private:
    std::string layer_name_;
    std::vector<FaceId> face_ids_;
    FloatMatrix data_;
    std::unordered_map<FaceId, std::size_t> index_;
};

inline constexpr std::array<char, 4> kEmbeddingMagic{'F', 'E', 'M', 'B'};
inline constexpr std::uint32_t kEmbeddingVersion = 1;

EmbeddingMatrix read_embeddings(std::istream& in);
EmbeddingMatrix load_embeddings(const std::filesystem::path& path);
void write_embeddings(const EmbeddingMatrix& matrix, std::ostream& out);
void save_embeddings(const EmbeddingMatrix& matrix, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Splits

struct SplitFractions {
    double train = 0.64;
    double validation = 0.16;
    double test = 0.20;
};

/// Throws Config unless all fractions are positive and sum to 1 within 1e-12.
void validate_fractions(const SplitFractions& fractions);

struct SplitSpec {
    std::uint64_t seed = 0;
    SplitFractions fractions{};
    std::uint64_t repeat_index = 0;
};

struct Split {
    std::vector<FaceId> train;
    std::vector<FaceId> validation;
    std::vector<FaceId> test;
};

struct SplitSizes {
    std::size_t train = 0;
    std::size_t validation = 0;
    std::size_t test = 0;
};

/// validation = round(n * f_val), test = round(n * f_test), train takes the
/// rest. Throws Size if any part would be empty or n < 5.
SplitSizes split_sizes(std::size_t n, const SplitFractions& fractions);

/// Shuffles a copy of `faces` with SplitMix64 seeded by
/// combine_seed(seed, repeat_index) and cuts it into train | validation | test.
Split make_split(std::span<const FaceId> faces, const SplitSpec& spec);

}  // namespace facet

#endif
