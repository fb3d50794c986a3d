#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace tvar {

// SplitMix64 step; used both as a standalone mixer and to derive seed streams.
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic per-stream seed derivation. Streams derived from the same
// master with different ids are independent for all practical purposes.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(master ^ splitmix64(stream));
}

// Seeded generator with explicitly specified variate transforms, so that the
// same seed produces the same draws on every platform (the mt19937_64 engine
// is fully specified by the standard; library-provided distributions are not).
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on the open interval (0, 1).
    double uniform01() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via the polar method; the second variate is discarded
    // to keep the draw sequence a pure function of the engine state.
    double normal() {
        for (;;) {
            const double u = 2.0 * uniform01() - 1.0;
            const double v = 2.0 * uniform01() - 1.0;
            const double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) {
                return u * std::sqrt(-2.0 * std::log(s) / s);
            }
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace tvar
