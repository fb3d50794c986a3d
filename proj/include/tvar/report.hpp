#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "tvar/config.hpp"

namespace tvar {

// Shortest exact decimal representation used in all CSV output.
std::string format_g17(double v);

std::uint64_t fnv1a(std::string_view data);

// 16-hex-digit hash of the canonical config text; part of every report file
// name, so identical configurations map to identical paths.
std::string config_hash(const KeyValueConfig& cfg);

// Numeric table with named columns plus a JSON summary. Reports are written
// as <kind>_<hash>.csv and <kind>_<hash>.json under the output directory;
// reruns of the same configuration overwrite byte-identically.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::variant<double, std::int64_t, std::string>>> rows;

    void require_width(std::size_t width) const;
    std::string to_csv() const;
};

struct Report {
    std::string kind;
    Table table;
    nlohmann::ordered_json summary;
    KeyValueConfig resolved;

    std::string basename() const;  // "<kind>_<hash>"
    // Returns the two file paths written.
    std::pair<std::string, std::string> write(const std::string& out_dir) const;
};

}  // namespace tvar
