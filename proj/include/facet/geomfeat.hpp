#ifndef FACET_GEOMFEAT_HPP
#define FACET_GEOMFEAT_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "facet/data_model.hpp"
#include "facet/image.hpp"
#include "facet/kvconfig.hpp"

namespace facet {

/// Number of unordered landmark pairs, 68 choose 2.
constexpr std::size_t kPairCount = kLandmarkCount * (kLandmarkCount - 1) / 2;
/// Size of the named-measurement block.
constexpr std::size_t kNamedFeatureCount = 29;
/// Layer name used when geometric features are exported as embeddings.
inline constexpr const char* kGeomLayerName = "geom-v1";

/// Position of pair (i, j), i < j, in lexicographic order.
std::size_t pair_index(std::size_t i, std::size_t j) noexcept;
std::pair<std::size_t, std::size_t> pair_at(std::size_t index) noexcept;

std::vector<double> pairwise_distances(const LandmarkSet& landmarks);

struct Orientations {
    /// Line orientation of every pair folded into [0, pi).
    std::vector<double> values;
    /// Pair indices whose two points coincide; their orientation is 0.
    std::vector<std::size_t> coincident;
};

Orientations pairwise_orientations(const LandmarkSet& landmarks);

// ---------------------------------------------------------------------------
// Geometric feature configuration

/// A point given as the centroid of one or more landmarks.
struct PointRef {
    std::vector<std::size_t> landmarks;

    Point2 resolve(const LandmarkSet& set) const;
    std::string to_string() const;
};

enum class MeasureKind {
    /// dist(a, b) / dist(c, d)
    Ratio,
    /// (dist(a, b) - dist(c, d)) / (dist(a, b) + dist(c, d)), left minus right
    Asymmetry,
};

struct NamedMeasure {
    std::string name;
    MeasureKind kind = MeasureKind::Ratio;
    PointRef a, b, c, d;
};

/// Square skin window centred at centroid(anchors) + offset * IOD with side
/// size * IOD, where IOD is the distance between the two eye centroids.
struct WindowSpec {
    std::string name;
    std::vector<std::size_t> anchors;
    double offset_x = 0.0;
    double offset_y = 0.0;
    double size = 0.4;
};

struct CannyThresholds {
    double low = 0.1;
    double high = 0.3;
};

struct GeomConfig {
    std::string version;
    std::vector<NamedMeasure> measures;
    std::vector<WindowSpec> windows;
    CannyThresholds canny;
};

GeomConfig parse_geom_config(const KvConfig& kv);
GeomConfig load_geom_config(const std::filesystem::path& path);
/// Text of the built-in "geom-v1" configuration (also shipped as config/geom-v1.cfg).
const std::string& default_geom_config_text();
const GeomConfig& default_geom_config();

double interocular_distance(const LandmarkSet& landmarks);

/// The configured scale-invariant measurements, in config order. Throws
/// Degeneracy naming the feature when a denominator is zero.
std::vector<double> named_ratios(const LandmarkSet& landmarks, const GeomConfig& config = default_geom_config());

// ---------------------------------------------------------------------------
// Skin windows

/// Edge map (1 = edge) from the Canny pipeline: integer ITU-R 601 luma
/// (299R + 587G + 114B), the 5x5 sigma=1.4 Gaussian (integer weights /159),
/// Sobel gradients, 4-direction non-maximum suppression and 8-connected
/// hysteresis. `low` and `high` are fractions of the maximum gradient
/// magnitude. Borders replicate. Throws Bound unless 0 <= low < high.
std::vector<std::uint8_t> canny_edges(const ImagePatch& patch, double low, double high);

/// Fraction of edge pixels; smoothness is 1 minus this.
double canny_edge_density(const ImagePatch& patch, double low, double high);

struct Hsv {
    double h = 0.0;  ///< degrees in [0, 360), 0 when saturation is 0
    double s = 0.0;
    double v = 0.0;
};

Hsv rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept;

/// Circular mean of hue, arithmetic means of saturation and value.
Hsv skin_color_hsv(const ImagePatch& patch);

struct PixelRect {
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;
};

/// Window clipped to the image; throws Bound if nothing remains.
PixelRect resolve_window(const WindowSpec& window, const LandmarkSet& landmarks, int image_width, int image_height);

// ---------------------------------------------------------------------------
// Assembly

struct GeomFeatureVector {
    std::vector<double> values;
    std::vector<std::string> names;
    /// Names of features that hit a degenerate convention (coincident points).
    std::vector<std::string> flags;
};

/// Feature names in assembly order for `config`, with or without windows.
std::vector<std::string> geom_feature_names(const GeomConfig& config, bool with_windows);

/// named ratios | distances | orientations | per window (smoothness, h, s, v).
/// `image` may be null only when `config.windows` is empty or
/// `with_windows` is false.
GeomFeatureVector assemble_geom_features(const LandmarkSet& landmarks, const ImagePatch* image,
                                         const GeomConfig& config = default_geom_config(), bool with_windows = true);

}  // namespace facet

#endif
