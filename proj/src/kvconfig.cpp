#include "facet/kvconfig.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "facet/error.hpp"
#include "facet/text.hpp"

namespace facet {

KvConfig KvConfig::parse(std::istream& in) {
    KvConfig config;
    std::string line;
    std::size_t line_no = 0;
    while (text::read_line(in, line)) {
        ++line_no;
        const auto body = text::trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorKind::Config, "line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        std::string key(text::trim(body.substr(0, eq)));
        std::string value(text::trim(body.substr(eq + 1)));
        if (key.empty()) {
            throw Error(ErrorKind::Config, "line " + std::to_string(line_no) + ": empty key");
        }
        if (config.find(key) != nullptr) {
            throw Error(ErrorKind::Config, "line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
        config.entries_.push_back({std::move(key), std::move(value), line_no});
    }
    return config;
}

KvConfig KvConfig::parse_string(const std::string& text) {
    std::istringstream in(text);
    return parse(in);
}

KvConfig KvConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Config, "cannot open config file " + path.string());
    return parse(in);
}

const KvConfig::Entry* KvConfig::find(const std::string& key) const noexcept {
    const auto it = std::find_if(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.key == key; });
    return it == entries_.end() ? nullptr : &*it;
}

void KvConfig::reject_unknown(const std::vector<std::string>& allowed) const {
    for (const auto& e : entries_) {
        if (std::find(allowed.begin(), allowed.end(), e.key) == allowed.end()) {
            throw Error(ErrorKind::Config, "line " + std::to_string(e.line) + ": unknown key '" + e.key + "'");
        }
    }
}

}  // namespace facet
