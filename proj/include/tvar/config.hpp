#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tvar {

// Flat key = value configuration. Lines starting with '#' or ';' are
// comments; optional [section] headers prefix keys as "section.key". Keys are
// case-insensitive and stored lower-case.
class KeyValueConfig {
public:
    static KeyValueConfig parse_string(const std::string& text);
    static KeyValueConfig parse_file(const std::string& path);  // config_error if unreadable

    bool has(const std::string& key) const;
    void set(const std::string& key, const std::string& value);

    // Required accessors throw config_error naming the missing/bad key.
    std::string get_string(const std::string& key) const;
    std::string get_string_or(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double fallback) const;
    std::optional<double> get_double_opt(const std::string& key) const;
    std::uint64_t get_u64(const std::string& key) const;
    std::uint64_t get_u64_or(const std::string& key, std::uint64_t fallback) const;
    std::vector<double> get_double_list(const std::string& key) const;
    std::vector<std::size_t> get_size_list(const std::string& key) const;

    // Canonical "key = value" lines, sorted by key; the basis for config
    // hashing and the resolved-config echo.
    std::string canonical() const;

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

}  // namespace tvar
