#include "tvar/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "tvar/errors.hpp"

namespace tvar {

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::uint64_t fnv1a(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string config_hash(const KeyValueConfig& cfg) {
    // Execution details do not change what an experiment computes, so they
    // stay out of the identity hash: the same experiment maps to the same
    // file name regardless of machine or thread count.
    std::string canonical;
    for (const auto& [k, v] : cfg.values()) {
        if (k == "threads" || k == "out") continue;
        canonical += k;
        canonical += " = ";
        canonical += v;
        canonical += "\n";
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a(canonical)));
    return buf;
}

void Table::require_width(std::size_t width) const {
    if (columns.size() != width) {
        throw std::logic_error("table width mismatch");
    }
}

std::string Table::to_csv() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        os << (i ? "," : "") << columns[i];
    }
    os << "\n";
    for (const auto& row : rows) {
        if (row.size() != columns.size()) {
            throw std::logic_error("table row width mismatch");
        }
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ",";
            if (std::holds_alternative<double>(row[i])) {
                os << format_g17(std::get<double>(row[i]));
            } else if (std::holds_alternative<std::int64_t>(row[i])) {
                os << std::get<std::int64_t>(row[i]);
            } else {
                os << std::get<std::string>(row[i]);
            }
        }
        os << "\n";
    }
    return os.str();
}

std::string Report::basename() const {
    return kind + "_" + config_hash(resolved);
}

std::pair<std::string, std::string> Report::write(const std::string& out_dir) const {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    const std::string base = (fs::path(out_dir) / basename()).string();
    const std::string csv_path = base + ".csv";
    const std::string json_path = base + ".json";

    {
        std::ofstream f(csv_path, std::ios::binary | std::ios::trunc);
        if (!f) throw config_error("cannot write report file '" + csv_path + "'");
        f << table.to_csv();
    }
    {
        nlohmann::ordered_json doc;
        doc["kind"] = kind;
        nlohmann::ordered_json cfg_echo = nlohmann::ordered_json::object();
        for (const auto& [k, v] : resolved.values()) cfg_echo[k] = v;
        doc["config"] = cfg_echo;
        doc["summary"] = summary;
        std::ofstream f(json_path, std::ios::binary | std::ios::trunc);
        if (!f) throw config_error("cannot write report file '" + json_path + "'");
        f << doc.dump(2) << "\n";
    }
    return {csv_path, json_path};
}

}  // namespace tvar
