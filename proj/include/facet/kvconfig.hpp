#ifndef FACET_KVCONFIG_HPP
#define FACET_KVCONFIG_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace facet {

/// `key = value` text with `#` comments and blank lines. Keys keep file
/// order; a repeated key is an error. All failures are Config errors.
class KvConfig {
public:
    struct Entry {
        std::string key;
        std::string value;
        std::size_t line = 0;
    };

    static KvConfig parse(std::istream& in);
    static KvConfig parse_string(const std::string& text);
    static KvConfig load(const std::filesystem::path& path);

    const std::vector<Entry>& entries() const noexcept { return entries_; }
    const Entry* find(const std::string& key) const noexcept;

    /// Throws Config naming the first key not in `allowed`.
    void reject_unknown(const std::vector<std::string>& allowed) const;

private:
    std::vector<Entry> entries_;
};

}  // namespace facet

#endif
