#include "facet/geomfeat.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "facet/error.hpp"
#include "facet/text.hpp"

namespace facet {

namespace detail {
const std::string& geom_v1_config_text();
}

std::size_t pair_index(std::size_t i, std::size_t j) noexcept {
    // pairs (0,1)..(0,67) come first, then (1,2).., so row i starts at
    // i*(2n - i - 1)/2
    return i * (2 * kLandmarkCount - i - 1) / 2 + (j - i - 1);
}

std::pair<std::size_t, std::size_t> pair_at(std::size_t index) noexcept {
    std::size_t i = 0;
    std::size_t row = kLandmarkCount - 1;
    while (index >= row) {
        index -= row;
        ++i;
        --row;
    }
    return {i, i + 1 + index};
}

std::vector<double> pairwise_distances(const LandmarkSet& landmarks) {
    std::vector<double> out;
    out.reserve(kPairCount);
    for (std::size_t i = 0; i < kLandmarkCount; ++i) {
        for (std::size_t j = i + 1; j < kLandmarkCount; ++j) {
            out.push_back(std::hypot(landmarks[j].x - landmarks[i].x, landmarks[j].y - landmarks[i].y));
        }
    }
    return out;
}

Orientations pairwise_orientations(const LandmarkSet& landmarks) {
    constexpr double pi = std::numbers::pi;
    Orientations out;
    out.values.reserve(kPairCount);
    for (std::size_t i = 0; i < kLandmarkCount; ++i) {
        for (std::size_t j = i + 1; j < kLandmarkCount; ++j) {
            const double dx = landmarks[j].x - landmarks[i].x;
            const double dy = landmarks[j].y - landmarks[i].y;
            double angle = 0.0;
            if (dx == 0.0 && dy == 0.0) {
                out.coincident.push_back(out.values.size());
            } else if (dx == 0.0) {
                angle = pi / 2;
            } else {
                angle = std::atan2(dy, dx);
                if (angle < 0.0) angle += pi;
                if (angle >= pi) angle -= pi;
            }
            out.values.push_back(angle);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

Point2 PointRef::resolve(const LandmarkSet& set) const {
    double x = 0.0;
    double y = 0.0;
    for (const auto idx : landmarks) {
        x += set[idx].x;
        y += set[idx].y;
    }
    const auto n = static_cast<double>(landmarks.size());
    return {x / n, y / n};
}

std::string PointRef::to_string() const {
    std::string s;
    for (std::size_t i = 0; i < landmarks.size(); ++i) {
        if (i > 0) s += '+';
        s += std::to_string(landmarks[i]);
    }
    return s;
}

namespace {

double distance(const Point2& a, const Point2& b) noexcept { return std::hypot(b.x - a.x, b.y - a.y); }

[[noreturn]] void config_error(const KvConfig::Entry& e, const std::string& what) {
    throw Error(ErrorKind::Config, "geometry config line " + std::to_string(e.line) + " ('" + e.key + "'): " + what);
}

std::vector<std::size_t> parse_index_list(const KvConfig::Entry& e, std::string_view token, char sep) {
    std::vector<std::size_t> out;
    for (const auto part : text::split(token, sep)) {
        const auto v = text::parse_uint(part);
        if (!v || *v >= kLandmarkCount) config_error(e, "bad landmark index '" + std::string(part) + "'");
        out.push_back(static_cast<std::size_t>(*v));
    }
    return out;
}

std::vector<std::string_view> tokens(std::string_view s) {
    std::vector<std::string_view> out;
    for (const auto t : text::split(s, ' ')) {
        if (!text::trim(t).empty()) out.push_back(text::trim(t));
    }
    return out;
}

NamedMeasure parse_measure(const KvConfig::Entry& e, MeasureKind kind, std::string name) {
    const auto tok = tokens(e.value);
    const std::string_view sep = kind == MeasureKind::Ratio ? "/" : "|";
    if (tok.size() != 5 || tok[2] != sep) {
        config_error(e, "expected 'a b " + std::string(sep) + " c d'");
    }
    NamedMeasure m;
    m.name = std::move(name);
    m.kind = kind;
    m.a.landmarks = parse_index_list(e, tok[0], '+');
    m.b.landmarks = parse_index_list(e, tok[1], '+');
    m.c.landmarks = parse_index_list(e, tok[3], '+');
    m.d.landmarks = parse_index_list(e, tok[4], '+');
    return m;
}

std::pair<double, double> parse_pair(const KvConfig::Entry& e, std::string_view v) {
    const auto parts = text::split(v, ',');
    if (parts.size() != 2) config_error(e, "expected two comma-separated numbers");
    const auto x = text::parse_double(parts[0]);
    const auto y = text::parse_double(parts[1]);
    if (!x || !y || !std::isfinite(*x) || !std::isfinite(*y)) config_error(e, "bad number pair");
    return {*x, *y};
}

WindowSpec parse_window(const KvConfig::Entry& e, std::string name) {
    WindowSpec w;
    w.name = std::move(name);
    bool have_anchors = false;
    for (const auto tok : tokens(e.value)) {
        const auto eq = tok.find('=');
        if (eq == std::string_view::npos) config_error(e, "expected key=value, got '" + std::string(tok) + "'");
        const auto key = tok.substr(0, eq);
        const auto val = tok.substr(eq + 1);
        if (key == "anchors") {
            w.anchors = parse_index_list(e, val, ',');
            have_anchors = true;
        } else if (key == "offset") {
            std::tie(w.offset_x, w.offset_y) = parse_pair(e, val);
        } else if (key == "size") {
            const auto s = text::parse_double(val);
            if (!s || !(*s > 0.0) || !std::isfinite(*s)) config_error(e, "window size must be positive");
            w.size = *s;
        } else {
            config_error(e, "unknown window field '" + std::string(key) + "'");
        }
    }
    if (!have_anchors || w.anchors.empty()) config_error(e, "window needs anchors");
    return w;
}

double parse_threshold(const KvConfig::Entry& e) {
    const auto v = text::parse_double(e.value);
    if (!v || !std::isfinite(*v) || *v < 0.0) config_error(e, "threshold must be a non-negative number");
    return *v;
}

}  // namespace

GeomConfig parse_geom_config(const KvConfig& kv) {
    GeomConfig config;
    std::set<std::string> names;
    for (const auto& e : kv.entries()) {
        const auto dot = e.key.find('.');
        const std::string prefix = e.key.substr(0, dot);
        const std::string name = dot == std::string::npos ? std::string() : e.key.substr(dot + 1);
        if (e.key == "version") {
            config.version = e.value;
        } else if (e.key == "canny.low") {
            config.canny.low = parse_threshold(e);
        } else if (e.key == "canny.high") {
            config.canny.high = parse_threshold(e);
        } else if ((prefix == "ratio" || prefix == "asym" || prefix == "window") && !name.empty()) {
            if (!names.insert(name).second) config_error(e, "duplicate feature name '" + name + "'");
            if (prefix == "ratio") {
                config.measures.push_back(parse_measure(e, MeasureKind::Ratio, name));
            } else if (prefix == "asym") {
                config.measures.push_back(parse_measure(e, MeasureKind::Asymmetry, name));
            } else {
                config.windows.push_back(parse_window(e, name));
            }
        } else {
            config_error(e, "unknown key");
        }
    }
    if (config.version.empty()) throw Error(ErrorKind::Config, "geometry config: missing 'version'");
    if (config.measures.size() != kNamedFeatureCount) {
        throw Error(ErrorKind::Config, "geometry config: expected 29 named measures, found " +
                                           std::to_string(config.measures.size()));
    }
    if (!(config.canny.low < config.canny.high)) {
        throw Error(ErrorKind::Config, "geometry config: canny.low must be below canny.high");
    }
    return config;
}

GeomConfig load_geom_config(const std::filesystem::path& path) { return parse_geom_config(KvConfig::load(path)); }

const std::string& default_geom_config_text() { return detail::geom_v1_config_text(); }

const GeomConfig& default_geom_config() {
    static const GeomConfig config = parse_geom_config(KvConfig::parse_string(default_geom_config_text()));
    return config;
}

double interocular_distance(const LandmarkSet& landmarks) {
    static const PointRef right{{36, 37, 38, 39, 40, 41}};
    static const PointRef left{{42, 43, 44, 45, 46, 47}};
    return distance(right.resolve(landmarks), left.resolve(landmarks));
}

std::vector<double> named_ratios(const LandmarkSet& landmarks, const GeomConfig& config) {
    std::vector<double> out;
    out.reserve(config.measures.size());
    for (const auto& m : config.measures) {
        const double first = distance(m.a.resolve(landmarks), m.b.resolve(landmarks));
        const double second = distance(m.c.resolve(landmarks), m.d.resolve(landmarks));
        double value = 0.0;
        if (m.kind == MeasureKind::Ratio) {
            if (second == 0.0) throw Error(ErrorKind::Degeneracy, "degenerate geometry in feature '" + m.name + "'");
            value = first / second;
        } else {
            const double sum = first + second;
            if (sum == 0.0) throw Error(ErrorKind::Degeneracy, "degenerate geometry in feature '" + m.name + "'");
            value = (first - second) / sum;
        }
        out.push_back(value);
    }
    return out;
}

PixelRect resolve_window(const WindowSpec& window, const LandmarkSet& landmarks, int image_width,
                         int image_height) {
    const double iod = interocular_distance(landmarks);
    if (!(iod > 0.0)) throw Error(ErrorKind::Degeneracy, "window '" + window.name + "': inter-ocular distance is 0");
    const Point2 anchor = PointRef{window.anchors}.resolve(landmarks);
    const double cx = anchor.x + window.offset_x * iod;
    const double cy = anchor.y + window.offset_y * iod;
    const long side = std::max(1L, std::lround(window.size * iod));
    const long x0 = std::lround(cx - static_cast<double>(side) / 2.0);
    const long y0 = std::lround(cy - static_cast<double>(side) / 2.0);
    const long left = std::clamp(x0, 0L, static_cast<long>(image_width));
    const long top = std::clamp(y0, 0L, static_cast<long>(image_height));
    const long right = std::clamp(x0 + side, 0L, static_cast<long>(image_width));
    const long bottom = std::clamp(y0 + side, 0L, static_cast<long>(image_height));
    if (right <= left || bottom <= top) {
        throw Error(ErrorKind::Bound, "window '" + window.name + "' falls outside the image");
    }
    return {static_cast<int>(left), static_cast<int>(top), static_cast<int>(right - left),
            static_cast<int>(bottom - top)};
}

std::vector<std::string> geom_feature_names(const GeomConfig& config, bool with_windows) {
    std::vector<std::string> names;
    names.reserve(kNamedFeatureCount + 2 * kPairCount + 4 * config.windows.size());
    for (const auto& m : config.measures) {
        names.push_back((m.kind == MeasureKind::Ratio ? "ratio:" : "asym:") + m.name);
    }
    for (const char* block : {"dist:", "orient:"}) {
        for (std::size_t i = 0; i < kLandmarkCount; ++i) {
            for (std::size_t j = i + 1; j < kLandmarkCount; ++j) {
                names.push_back(block + std::to_string(i) + "-" + std::to_string(j));
            }
        }
    }
    if (with_windows) {
        for (const auto& w : config.windows) {
            for (const char* part : {"smoothness", "h", "s", "v"}) {
                names.push_back("window:" + w.name + ":" + part);
            }
        }
    }
    return names;
}

GeomFeatureVector assemble_geom_features(const LandmarkSet& landmarks, const ImagePatch* image,
                                         const GeomConfig& config, bool with_windows) {
    const bool windows = with_windows && !config.windows.empty();
    if (windows && image == nullptr) {
        throw Error(ErrorKind::Data, "skin windows are configured but no image was supplied");
    }
    GeomFeatureVector out;
    out.names = geom_feature_names(config, windows);
    out.values = named_ratios(landmarks, config);
    const auto distances = pairwise_distances(landmarks);
    out.values.insert(out.values.end(), distances.begin(), distances.end());
    const auto orientation_offset = out.values.size();
    const auto orientations = pairwise_orientations(landmarks);
    out.values.insert(out.values.end(), orientations.values.begin(), orientations.values.end());
    for (const auto idx : orientations.coincident) out.flags.push_back(out.names[orientation_offset + idx]);

    if (windows) {
        for (const auto& w : config.windows) {
            const PixelRect r = resolve_window(w, landmarks, image->width(), image->height());
            const ImagePatch patch = image->crop(r.x, r.y, r.width, r.height);
            const Hsv color = skin_color_hsv(patch);
            out.values.push_back(1.0 - canny_edge_density(patch, config.canny.low, config.canny.high));
            out.values.push_back(color.h);
            out.values.push_back(color.s);
            out.values.push_back(color.v);
        }
    }
    return out;
}

}  // namespace facet
