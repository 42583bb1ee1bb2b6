#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "check.hpp"
#include "doctest.h"
#include "facet/geomfeat.hpp"
#include "facet/image.hpp"
#include "reference.hpp"
#include "synth.hpp"

using namespace facet;

namespace {

// Mirror-symmetric face on integer coordinates about x = 100, with a square jaw.
LandmarkSet square_jaw_face() {
    LandmarkSet::Points p = test::template_landmarks().points();
    for (auto& q : p) {
        q.x = std::round(q.x);
        q.y = std::round(q.y);
    }
    const Point2 jaw[17] = {{20, 100},  {20, 115},  {20, 130},  {20, 145},  {20, 160},  {20, 175},
                            {40, 190},  {70, 190},  {100, 190}, {130, 190}, {160, 190}, {180, 175},
                            {180, 160}, {180, 145}, {180, 130}, {180, 115}, {180, 100}};
    for (int i = 0; i < 17; ++i) p[i] = jaw[i];
    const auto& mirror = landmark_mirror_map();
    for (std::size_t i = 0; i < 68; ++i) {
        if (mirror[i] == i) {
            p[i].x = 100;
        } else if (i < mirror[i]) {
            p[mirror[i]] = {200 - p[i].x, p[i].y};
        }
    }
    return LandmarkSet(p);
}

std::size_t measure_index(const std::string& name) {
    const auto& ms = default_geom_config().measures;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        if (ms[i].name == name) return i;
    }
    FAIL("no measure " << name);
    return 0;
}

LandmarkSet transform(const LandmarkSet& s, double scale, double angle, double tx, double ty) {
    LandmarkSet::Points p = s.points();
    const double c = std::cos(angle);
    const double si = std::sin(angle);
    for (auto& q : p) q = {scale * (c * q.x - si * q.y) + tx, scale * (si * q.x + c * q.y) + ty};
    return LandmarkSet(p);
}

double fold_pi(double a) {
    a = std::fmod(a, std::numbers::pi);
    return a < 0 ? a + std::numbers::pi : a;
}

// Circular distance on [0, pi).
double orientation_gap(double a, double b) {
    const double d = std::abs(a - b);
    return std::min(d, std::numbers::pi - d);
}

ImagePatch step_patch() {
    std::vector<std::uint8_t> px(32 * 32 * 3, 0);
    for (int y = 0; y < 32; ++y) {
        for (int x = 16; x < 32; ++x) {
            for (int c = 0; c < 3; ++c) px[3 * (y * 32 + x) + c] = 255;
        }
    }
    return ImagePatch(32, 32, px);
}

}  // namespace

TEST_SUITE("pairwise") {
    TEST_CASE("pair indexing") {
        CHECK(kPairCount == 2278);
        CHECK(pair_index(0, 1) == 0);
        CHECK(pair_index(0, 67) == 66);
        CHECK(pair_index(1, 2) == 67);
        CHECK(pair_index(66, 67) == 2277);
        for (std::size_t k = 0; k < kPairCount; k += 97) {
            const auto [i, j] = pair_at(k);
            CHECK(pair_index(i, j) == k);
        }
    }

    TEST_CASE("identical points give zero distances and flagged orientations") {
        LandmarkSet::Points p{};
        for (auto& q : p) q = {3, 4};
        const LandmarkSet s(p);
        const auto d = pairwise_distances(s);
        CHECK(d.size() == 2278);
        for (const double v : d) CHECK(v == 0.0);
        const auto o = pairwise_orientations(s);
        CHECK(o.coincident.size() == 2278);
        for (const double v : o.values) CHECK(v == 0.0);
    }

    TEST_CASE("scaling by 2 doubles every distance") {
        test::Gauss g(5);
        const auto s = test::jittered_landmarks(g, 2.0);
        const auto d1 = pairwise_distances(s);
        const auto d2 = pairwise_distances(transform(s, 2.0, 0.0, 0.0, 0.0));
        for (std::size_t k = 0; k < d1.size(); ++k) CHECK(d2[k] == doctest::Approx(2 * d1[k]).epsilon(1e-14));
    }

    TEST_CASE("horizontal, vertical and diagonal orientations") {
        LandmarkSet::Points p = test::template_landmarks().points();
        p[0] = {0, 0};
        p[1] = {5, 0};
        p[2] = {0, 7};
        p[3] = {3, 3};
        p[4] = {-2, 2};
        const auto o = pairwise_orientations(LandmarkSet(p));
        CHECK(o.values[pair_index(0, 1)] == 0.0);
        CHECK(o.values[pair_index(0, 2)] == std::numbers::pi / 2);
        CHECK(o.values[pair_index(0, 3)] == doctest::Approx(std::numbers::pi / 4).epsilon(1e-15));
        CHECK(o.values[pair_index(0, 4)] == doctest::Approx(3 * std::numbers::pi / 4).epsilon(1e-15));
        // reversed direction folds to the same orientation
        p[1] = {-5, 0};
        p[2] = {0, -7};
        const auto r = pairwise_orientations(LandmarkSet(p));
        CHECK(r.values[pair_index(0, 1)] == 0.0);
        CHECK(r.values[pair_index(0, 2)] == std::numbers::pi / 2);
        for (const double v : r.values) {
            CHECK(v >= 0.0);
            CHECK(v < std::numbers::pi);
        }
    }
}

TEST_SUITE("named ratios") {
    TEST_CASE("config has 29 measures and two windows") {
        const auto& c = default_geom_config();
        CHECK(c.version == "geom-v1");
        CHECK(c.measures.size() == kNamedFeatureCount);
        CHECK(c.windows.size() == 2);
        CHECK(c.canny.low == 0.1);
        CHECK(c.canny.high == 0.3);
        const auto from_file = load_geom_config(FACET_SOURCE_DIR "/config/geom-v1.cfg");
        CHECK(from_file.measures.size() == c.measures.size());
    }

    TEST_CASE("square-jaw face matches hand measurements") {
        const auto s = square_jaw_face();
        // eye centroids (65, 538/6) and (135, 538/6): IOD = 70
        CHECK(interocular_distance(s) == doctest::Approx(70.0).epsilon(1e-15));
        const auto r = named_ratios(s);
        const auto at = [&](const char* name) { return r[measure_index(name)]; };
        CHECK(std::abs(at("face_width_height") - 160.0 / 110.0) < 1e-12);
        CHECK(std::abs(at("jaw_width") - 1.0) < 1e-12);
        CHECK(std::abs(at("chin_width") - 0.75) < 1e-12);
        CHECK(std::abs(at("face_roundness") - 160.0 / 110.0) < 1e-12);
        CHECK(std::abs(at("eye_width_right") - 30.0 / 70.0) < 1e-12);
        CHECK(std::abs(at("eye_spacing") - 0.25) < 1e-12);
        CHECK(std::abs(at("nose_width") - 30.0 / 70.0) < 1e-12);
        CHECK(std::abs(at("mouth_width") - 50.0 / 70.0) < 1e-12);
        CHECK(std::abs(at("lip_fullness") - 19.0 / 50.0) < 1e-12);
    }

    TEST_CASE("mirror-symmetric face has zero asymmetry") {
        const auto r = named_ratios(square_jaw_face());
        for (const char* name : {"eye_width", "eyebrow_height", "jaw", "mouth_corner"}) {
            CHECK(r[measure_index(name)] == 0.0);
        }
    }

    TEST_CASE("uniform scaling leaves ratios unchanged") {
        test::Gauss g(8);
        const auto s = test::jittered_landmarks(g, 1.5);
        const auto a = named_ratios(s);
        const auto b = named_ratios(transform(s, 3.7, 0.0, 0.0, 0.0));
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-12);
    }

    TEST_CASE("zero denominator names the feature") {
        LandmarkSet::Points p = test::template_landmarks().points();
        p[27] = p[8];
        CHECK_THROWS_KIND_WITH(named_ratios(LandmarkSet(p)), ErrorKind::Degeneracy, "face_width_height");
    }

    TEST_CASE("config errors") {
        CHECK_THROWS_KIND(parse_geom_config(KvConfig::parse_string("version = x\nratio.a = 0 1 / 2 3\n")),
                          ErrorKind::Config);
        auto text = default_geom_config_text();
        text += "ratio.extra = 0 1 / 2 3\n";
        CHECK_THROWS_KIND(parse_geom_config(KvConfig::parse_string(text)), ErrorKind::Config);
        auto bad_index = default_geom_config_text();
        bad_index.replace(bad_index.find("0 16 / 27 8"), 11, "0 68 / 27 8");
        CHECK_THROWS_KIND(parse_geom_config(KvConfig::parse_string(bad_index)), ErrorKind::Config);
    }
}

TEST_SUITE("invariances") {
    TEST_CASE("translation, scale and rotation on random landmark sets") {
        test::Gauss g(2024);
        for (int trial = 0; trial < 25; ++trial) {
            const auto s = test::jittered_landmarks(g, 3.0);
            const double angle = g() * 0.7;
            const double scale = 0.5 + std::abs(g());
            const auto moved = transform(s, 1.0, 0.0, 40 * g(), 40 * g());
            const auto similar = transform(s, scale, angle, 10 * g(), 10 * g());

            const auto d = pairwise_distances(s);
            const auto d_moved = pairwise_distances(moved);
            const auto d_sim = pairwise_distances(similar);
            const auto o = pairwise_orientations(s).values;
            const auto o_sim = pairwise_orientations(similar).values;
            double worst = 0.0;
            for (std::size_t k = 0; k < d.size(); ++k) {
                worst = std::max(worst, std::abs(d_moved[k] - d[k]) / d[k]);
                worst = std::max(worst, std::abs(d_sim[k] / scale - d[k]) / d[k]);
                worst = std::max(worst, orientation_gap(o_sim[k], fold_pi(o[k] + angle)));
            }
            CHECK(worst < 1e-12);
            const auto r = named_ratios(s);
            const auto r_sim = named_ratios(similar);
            for (std::size_t i = 0; i < r.size(); ++i) CHECK(std::abs(r[i] - r_sim[i]) < 1e-12);
        }
    }
}

TEST_SUITE("canny") {
    TEST_CASE("uniform patch has no edges") {
        CHECK(canny_edge_density(ImagePatch::filled(16, 16, 90, 90, 90), 0.1, 0.3) == 0.0);
    }

    TEST_CASE("vertical step matches the reference count") {
        const auto patch = step_patch();
        const auto edges = canny_edges(patch, 0.1, 0.3);
        const auto ref = test::naive_canny(patch, 0.1, 0.3);
        CHECK(edges == ref);
        const auto count = std::count(ref.begin(), ref.end(), 1);
        CHECK(count == 64);  // the two columns either side of the step
        CHECK(canny_edge_density(patch, 0.1, 0.3) == static_cast<double>(count) / 1024.0);
    }

    TEST_CASE("random patches match the naive reference and stay in [0, 1]") {
        SplitMix64 rng(31);
        for (int i = 0; i < 20; ++i) {
            const auto patch = test::random_patch(rng, 17 + static_cast<int>(rng.bounded(20)), 9 + static_cast<int>(rng.bounded(20)));
            CHECK(canny_edges(patch, 0.1, 0.3) == test::naive_canny(patch, 0.1, 0.3));
            CHECK(canny_edges(patch, 0.05, 0.5) == test::naive_canny(patch, 0.05, 0.5));
            const double d = canny_edge_density(patch, 0.1, 0.3);
            CHECK(d >= 0.0);
            CHECK(d <= 1.0);
        }
    }

    TEST_CASE("threshold validation") {
        const auto p = ImagePatch::filled(4, 4, 0, 0, 0);
        CHECK_THROWS_KIND(canny_edges(p, 0.3, 0.3), ErrorKind::Bound);
        CHECK_THROWS_KIND(canny_edges(p, -0.1, 0.3), ErrorKind::Bound);
    }
}

TEST_SUITE("colour") {
    TEST_CASE("pure red") {
        const auto h = skin_color_hsv(ImagePatch::filled(3, 2, 255, 0, 0));
        CHECK(h.h == 0.0);
        CHECK(h.s == 1.0);
        CHECK(h.v == 1.0);
    }

    TEST_CASE("gray has hue 0 by convention") {
        const auto h = skin_color_hsv(ImagePatch::filled(2, 2, 128, 128, 128));
        CHECK(h.h == 0.0);
        CHECK(h.s == 0.0);
        CHECK(h.v == doctest::Approx(128.0 / 255.0).epsilon(1e-15));
    }

    TEST_CASE("red and green average to hue 60") {
        const ImagePatch p(2, 1, {255, 0, 0, 0, 255, 0});
        CHECK(skin_color_hsv(p).h == doctest::Approx(60.0).epsilon(1e-12));
    }

    TEST_CASE("hue wraps around 0") {
        // 350 and 10 degrees average to 0, not 180
        const auto a = rgb_to_hsv(255, 0, 43);
        CHECK(a.h == doctest::Approx(360.0 - 60.0 * 43 / 255).epsilon(1e-12));
        const ImagePatch p(2, 1, {255, 0, 43, 255, 43, 0});
        const double h = skin_color_hsv(p).h;
        CHECK(std::min(h, 360.0 - h) < 1e-9);
    }
}

TEST_SUITE("assembly") {
    GeomConfig with_windows(std::size_t n) {
        GeomConfig c = default_geom_config();
        c.windows.resize(n);
        return c;
    }

    TEST_CASE("lengths follow the component counts") {
        const auto s = test::template_landmarks();
        const auto image = ImagePatch::filled(200, 210, 200, 150, 120);
        CHECK(assemble_geom_features(s, &image, with_windows(1)).values.size() == 29 + 2278 + 2278 + 4);
        CHECK(assemble_geom_features(s, nullptr, with_windows(0)).values.size() == 4585);
        CHECK(assemble_geom_features(s, &image).values.size() == 4593);
        CHECK(assemble_geom_features(s, nullptr, default_geom_config(), false).values.size() == 4585);
    }

    TEST_CASE("names are unique, stable and parallel to values") {
        const auto s = test::template_landmarks();
        const auto image = ImagePatch::filled(200, 210, 200, 150, 120);
        const auto a = assemble_geom_features(s, &image);
        const auto b = assemble_geom_features(s, &image);
        CHECK(a.names == b.names);
        CHECK(a.names == geom_feature_names(default_geom_config(), true));
        CHECK(std::set<std::string>(a.names.begin(), a.names.end()).size() == a.names.size());
        CHECK(a.names[0] == "ratio:face_width_height");
        CHECK(a.names[29] == "dist:0-1");
        CHECK(a.names[29 + 2278] == "orient:0-1");
        CHECK(a.names[4589] == "window:forehead:smoothness");
        // flat image: smooth, hue of (200,150,120)
        CHECK(a.values[4585] == 1.0);
        CHECK(a.values[4586] == doctest::Approx(22.5).epsilon(1e-12));
    }

    TEST_CASE("window placement") {
        const auto s = square_jaw_face();
        const WindowSpec cheek{"c", {2, 31}, 0.0, 0.0, 0.4};
        // centroid of (20,130) and (85,128) is (52.5, 129); side lround(0.4 * 70) = 28
        const auto r = resolve_window(cheek, s, 200, 210);
        CHECK(r.width == 28);
        CHECK(r.height == 28);
        CHECK(r.x == 39);
        CHECK(r.y == 115);
        const auto clipped = resolve_window(cheek, s, 50, 210);
        CHECK(clipped.x + clipped.width == 50);
        CHECK_THROWS_KIND(resolve_window(cheek, s, 20, 20), ErrorKind::Bound);
    }
}

TEST_SUITE("ppm") {
    TEST_CASE("round trip and header errors") {
        SplitMix64 rng(3);
        const auto p = test::random_patch(rng, 7, 5);
        std::stringstream buf;
        write_ppm(p, buf);
        CHECK(read_ppm(buf) == p);
        std::istringstream bad("P3\n1 1\n255\n0 0 0\n");
        CHECK_THROWS_KIND(read_ppm(bad), ErrorKind::Format);
    }
}
