#include <cmath>
#include <fstream>

#include "facet/data_model.hpp"
#include "facet/error.hpp"
#include "facet/text.hpp"

namespace facet {

namespace {

std::string landmarks_header() {
    std::string header = "face_id";
    for (std::size_t i = 0; i < kLandmarkCount; ++i) {
        header += ",x" + std::to_string(i) + ",y" + std::to_string(i);
    }
    return header;
}

}  // namespace

LandmarkSet::LandmarkSet(const Points& points) : points_(points) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!std::isfinite(points_[i].x) || !std::isfinite(points_[i].y)) {
            throw Error(ErrorKind::Data, "landmark " + std::to_string(i) + " has a non-finite coordinate");
        }
    }
}

LandmarkSet LandmarkSet::from(std::span<const Point2> points) {
    if (points.size() != kLandmarkCount) {
        throw Error(ErrorKind::Data, "expected 68 landmarks, got " + std::to_string(points.size()));
    }
    Points copy{};
    std::copy(points.begin(), points.end(), copy.begin());
    return LandmarkSet(copy);
}

const std::array<std::size_t, kLandmarkCount>& landmark_mirror_map() {
    static const auto map = [] {
        std::array<std::size_t, kLandmarkCount> m{};
        for (std::size_t i = 0; i < kLandmarkCount; ++i) m[i] = i;
        const auto pair = [&m](std::size_t a, std::size_t b) {
            m[a] = b;
            m[b] = a;
        };
        for (std::size_t i = 0; i < 8; ++i) pair(i, 16 - i);  // jaw
        for (std::size_t i = 0; i < 5; ++i) pair(17 + i, 26 - i);  // brows
        pair(31, 35);
        pair(32, 34);
        pair(36, 45);
        pair(37, 44);
        pair(38, 43);
        pair(39, 42);
        pair(40, 47);
        pair(41, 46);
        pair(48, 54);
        pair(49, 53);
        pair(50, 52);
        pair(55, 59);
        pair(56, 58);
        pair(60, 64);
        pair(61, 63);
        pair(65, 67);
        return m;
    }();
    return map;
}

LandmarkMap read_landmarks(std::istream& in) {
    LandmarkMap landmarks;
    std::string line;
    if (!text::read_line(in, line) || line != landmarks_header()) {
        throw ParseError(1, "expected header 'face_id,x0,y0,...,x67,y67'");
    }
    std::size_t line_no = 1;
    while (text::read_line(in, line)) {
        ++line_no;
        if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
        const auto fields = text::split(line);
        if (fields.size() != 1 + 2 * kLandmarkCount) {
            throw ParseError(line_no, "expected 136 coordinates, found " + std::to_string(fields.size() - 1));
        }
        const std::string id(fields[0]);
        if (!is_valid_face_id(id)) throw ParseError(line_no, "invalid face id '" + id + "'");
        LandmarkSet::Points points{};
        for (std::size_t i = 0; i < kLandmarkCount; ++i) {
            const auto x = text::parse_double(fields[1 + 2 * i]);
            const auto y = text::parse_double(fields[2 + 2 * i]);
            if (!x || !y || !std::isfinite(*x) || !std::isfinite(*y)) {
                throw ParseError(line_no, "landmark " + std::to_string(i) + " is not a finite number pair");
            }
            points[i] = {*x, *y};
        }
        if (!landmarks.emplace(id, LandmarkSet(points)).second) {
            throw Error(ErrorKind::Duplicate,
                        "line " + std::to_string(line_no) + ": duplicate face id '" + id + "' in landmarks");
        }
    }
    return landmarks;
}

LandmarkMap load_landmarks(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open landmarks file " + path.string());
    return read_landmarks(in);
}

void write_landmarks(const LandmarkMap& landmarks, std::ostream& out) {
    out << landmarks_header() << '\n';
    for (const auto& [id, set] : landmarks) {
        out << id;
        for (const auto& p : set.points()) {
            out << ',' << text::format_shortest(p.x) << ',' << text::format_shortest(p.y);
        }
        out << '\n';
    }
}

void save_landmarks(const LandmarkMap& landmarks, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    write_landmarks(landmarks, out);
}

}  // namespace facet
