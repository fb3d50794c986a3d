#include "tvar/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tvar/errors.hpp"

namespace tvar {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_string(const std::string& text) {
    KeyValueConfig cfg;
    std::istringstream is(text);
    std::string line;
    std::string section;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']') {
                throw config_error("config line " + std::to_string(line_no) +
                                   ": unterminated section header");
            }
            section = lower(trim(t.substr(1, t.size() - 2)));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw config_error("config line " + std::to_string(line_no) +
                               ": expected key = value, got '" + t + "'");
        }
        std::string key = lower(trim(t.substr(0, eq)));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty()) {
            throw config_error("config line " + std::to_string(line_no) + ": empty key");
        }
        if (!section.empty()) key = section + "." + key;
        cfg.values_[key] = value;
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        throw config_error("cannot read config file '" + path + "'");
    }
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_string(buf.str());
}

bool KeyValueConfig::has(const std::string& key) const {
    return values_.count(lower(key)) > 0;
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
    values_[lower(key)] = value;
}

std::string KeyValueConfig::get_string(const std::string& key) const {
    const auto it = values_.find(lower(key));
    if (it == values_.end()) {
        throw config_error("missing required config key '" + lower(key) + "'");
    }
    return it->second;
}

std::string KeyValueConfig::get_string_or(const std::string& key,
                                          const std::string& fallback) const {
    const auto it = values_.find(lower(key));
    return it == values_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key) const {
    const std::string raw = get_string(key);
    try {
        std::size_t pos = 0;
        const double v = std::stod(raw, &pos);
        if (pos != raw.size()) throw std::invalid_argument(raw);
        return v;
    } catch (const std::exception&) {
        throw config_error("config key '" + lower(key) + "' is not a number: '" + raw + "'");
    }
}

double KeyValueConfig::get_double_or(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

std::optional<double> KeyValueConfig::get_double_opt(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return get_double(key);
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key) const {
    const std::string raw = get_string(key);
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(raw, &pos);
        if (pos != raw.size()) throw std::invalid_argument(raw);
        return v;
    } catch (const std::exception&) {
        throw config_error("config key '" + lower(key) + "' is not a nonnegative integer: '" +
                           raw + "'");
    }
}

std::uint64_t KeyValueConfig::get_u64_or(const std::string& key, std::uint64_t fallback) const {
    return has(key) ? get_u64(key) : fallback;
}

std::vector<double> KeyValueConfig::get_double_list(const std::string& key) const {
    const std::string raw = get_string(key);
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string token;
    while (std::getline(ss, token, ',')) {
        token = trim(token);
        if (token.empty()) continue;
        try {
            std::size_t pos = 0;
            const double v = std::stod(token, &pos);
            if (pos != token.size()) throw std::invalid_argument(token);
            out.push_back(v);
        } catch (const std::exception&) {
            throw config_error("config key '" + lower(key) + "' has a bad list entry: '" +
                               token + "'");
        }
    }
    if (out.empty()) {
        throw config_error("config key '" + lower(key) + "' is an empty list");
    }
    return out;
}

std::vector<std::size_t> KeyValueConfig::get_size_list(const std::string& key) const {
    std::vector<std::size_t> out;
    for (double v : get_double_list(key)) {
        if (v < 0.0 || v != std::floor(v)) {
            throw config_error("config key '" + lower(key) +
                               "' must list nonnegative integers");
        }
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

std::string KeyValueConfig::canonical() const {
    std::ostringstream os;
    for (const auto& [k, v] : values_) {
        os << k << " = " << v << "\n";
    }
    return os.str();
}

}  // namespace tvar
