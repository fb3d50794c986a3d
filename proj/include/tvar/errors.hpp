#pragma once

#include <stdexcept>
#include <string>

namespace tvar {

// Configuration problems (bad spec strings, missing keys, out-of-range
// parameters). The CLI maps these to exit code 1.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// No design point falls inside the requested band; the caller decides the
// fallback.
struct empty_window_error : std::runtime_error {
    explicit empty_window_error(const std::string& msg) : std::runtime_error(msg) {}
};

// The window holds fewer points than the polynomial needs.
struct window_too_small_error : std::runtime_error {
    explicit window_too_small_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Requested diagnostic needs data the path does not carry (true innovations,
// pre-history, or the generating coefficient function).
struct diagnostics_error : std::runtime_error {
    explicit diagnostics_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct degenerate_path_error : std::runtime_error {
    explicit degenerate_path_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct degenerate_window_error : std::runtime_error {
    explicit degenerate_window_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct grid_mismatch_error : std::runtime_error {
    explicit grid_mismatch_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Brute-force vertex enumeration refused because the problem exceeds the
// combinatorial guard.
struct oracle_size_error : std::runtime_error {
    explicit oracle_size_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace tvar
