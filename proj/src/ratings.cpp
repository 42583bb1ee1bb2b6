#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "facet/data_model.hpp"
#include "facet/error.hpp"
#include "facet/text.hpp"

namespace facet {

namespace {

constexpr std::string_view kRatingsHeader = "face_id,attribute,rater_id,rating";

bool has_control_char(std::string_view s) noexcept {
    return std::any_of(s.begin(), s.end(), [](char c) {
        const auto u = static_cast<unsigned char>(c);
        return u < 0x20 || u == 0x7f;
    });
}

}  // namespace

bool is_valid_face_id(std::string_view id) noexcept {
    return !id.empty() && id.find(',') == std::string_view::npos && !has_control_char(id);
}

void validate_face_id(std::string_view id) {
    if (!is_valid_face_id(id)) {
        throw Error(ErrorKind::Data, "invalid face id '" + std::string(id) + "'");
    }
}

const std::vector<AttributeName>& default_attributes() {
    static const std::vector<AttributeName> names{
        "attractive",         "unattractive",         "happy",       "unhappy",
        "friendly",           "unfriendly",           "sociable",    "introverted",
        "kind",               "mean",                 "caring",      "cold",
        "calm",               "aggressive",           "trustworthy", "untrustworthy",
        "responsible",        "irresponsible",        "confident",   "uncertain",
        "humble",             "egotistic",            "emotionally_stable",
        "emotionally_unstable", "normal",             "weird",       "intelligent",
        "unintelligent",      "interesting",          "boring",      "emotional",
        "unemotional",        "memorable",            "forgettable", "typical",
        "atypical",           "familiar",             "unfamiliar",  "common",
        "uncommon",
    };
    return names;
}

void RatingsTable::add(const FaceId& face, const AttributeName& attribute, const std::string& rater_id,
                       int rating) {
    validate_face_id(face);
    if (attribute.empty() || attribute.find(',') != std::string::npos || has_control_char(attribute)) {
        throw Error(ErrorKind::Data, "invalid attribute name '" + attribute + "'");
    }
    if (rater_id.empty() || rater_id.find(',') != std::string::npos || has_control_char(rater_id)) {
        throw Error(ErrorKind::Data, "invalid rater id '" + rater_id + "'");
    }
    if (rating < kMinRating || rating > kMaxRating) {
        throw Error(ErrorKind::Data, "rating " + std::to_string(rating) + " outside [1,9]");
    }
    auto& ratings = cells_[{face, attribute}];
    const bool duplicate = std::any_of(ratings.begin(), ratings.end(),
                                       [&](const Rating& r) { return r.rater_id == rater_id; });
    if (duplicate) {
        throw Error(ErrorKind::Duplicate,
                    "duplicate rating for face '" + face + "', attribute '" + attribute + "', rater '" + rater_id + "'");
    }
    ratings.push_back({rater_id, rating});
    ++rows_;
}

const std::vector<Rating>* RatingsTable::cell(const FaceId& face, const AttributeName& attribute) const {
    const auto it = cells_.find({face, attribute});
    return it == cells_.end() ? nullptr : &it->second;
}

bool RatingsTable::has_attribute(const AttributeName& attribute) const {
    return std::any_of(cells_.begin(), cells_.end(), [&](const auto& kv) { return kv.first.second == attribute; });
}

std::vector<AttributeName> RatingsTable::attributes() const {
    std::set<AttributeName> names;
    for (const auto& [key, _] : cells_) names.insert(key.second);
    return {names.begin(), names.end()};
}

std::vector<FaceId> RatingsTable::faces() const {
    std::vector<FaceId> ids;
    for (const auto& [key, _] : cells_) {
        if (ids.empty() || ids.back() != key.first) ids.push_back(key.first);
    }
    return ids;
}

std::vector<FaceId> RatingsTable::faces_with(const AttributeName& attribute) const {
    std::vector<FaceId> ids;
    for (const auto& [key, ratings] : cells_) {
        if (key.second == attribute && !ratings.empty()) ids.push_back(key.first);
    }
    return ids;
}

RatingsTable read_ratings(std::istream& in) {
    RatingsTable table;
    std::string line;
    if (!text::read_line(in, line) || line != kRatingsHeader) {
        throw ParseError(1, "expected header '" + std::string(kRatingsHeader) + "'");
    }
    std::size_t line_no = 1;
    while (text::read_line(in, line)) {
        ++line_no;
        if (line.empty() && in.peek() == std::char_traits<char>::eof()) break;
        const auto fields = text::split(line);
        if (fields.size() != 4) {
            throw ParseError(line_no, "expected 4 columns, found " + std::to_string(fields.size()));
        }
        const std::string_view rating_text = fields[3];
        const bool digits_only = !rating_text.empty() &&
                                 std::all_of(rating_text.begin(), rating_text.end(),
                                             [](char c) { return c >= '0' && c <= '9'; });
        const auto rating = digits_only ? text::parse_int(rating_text) : std::nullopt;
        if (!rating) {
            throw ParseError(line_no, "rating '" + std::string(rating_text) + "' is not an integer");
        }
        if (*rating < kMinRating || *rating > kMaxRating) {
            throw ParseError(line_no, "rating " + std::string(rating_text) + " outside [1,9]");
        }
        try {
            table.add(std::string(fields[0]), std::string(fields[1]), std::string(fields[2]),
                      static_cast<int>(*rating));
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::Duplicate) {
                throw Error(ErrorKind::Duplicate, "line " + std::to_string(line_no) + ": " + e.what());
            }
            throw ParseError(line_no, e.what());
        }
    }
    return table;
}

RatingsTable load_ratings(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open ratings file " + path.string());
    return read_ratings(in);
}

void write_ratings(const RatingsTable& table, std::ostream& out) {
    out << kRatingsHeader << '\n';
    for (const auto& [key, ratings] : table.cells()) {
        for (const auto& r : ratings) {
            out << key.first << ',' << key.second << ',' << r.rater_id << ',' << r.value << '\n';
        }
    }
}

void save_ratings(const RatingsTable& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
    write_ratings(table, out);
}

std::map<FaceId, double> average_ratings(const RatingsTable& table, const AttributeName& attribute) {
    std::map<FaceId, double> means;
    for (const auto& [key, ratings] : table.cells()) {
        if (key.second != attribute || ratings.empty()) continue;
        long sum = 0;
        for (const auto& r : ratings) sum += r.value;
        means.emplace(key.first, static_cast<double>(sum) / static_cast<double>(ratings.size()));
    }
    if (means.empty()) {
        throw Error(ErrorKind::NotFound, "attribute '" + attribute + "' not present in ratings");
    }
    return means;
}

}  // namespace facet
