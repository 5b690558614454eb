// Seeded random streams. Every stochastic draw in a simulation flows from a
// named stream derived from the master seed, so adding a traffic source or a
// controller never perturbs the draws of another.
#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

#include "cellsim/core.hpp"

namespace cellsim {

// splitmix64 step; the standard 64-bit mixing finaliser.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

enum class StreamPurpose : int {
    Arrival = 0,
    Duration = 1,
    Dwell = 2,
    HandoffTarget = 3,
    Controller = 4,
};

// Fixed mixing of (master seed, cell, class, purpose) into a stream seed.
// Pass class_idx = -1 for streams that are not class specific.
constexpr std::uint64_t derive_stream_seed(std::uint64_t master, int cell, int class_idx,
                                           StreamPurpose purpose) {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ (static_cast<std::uint64_t>(cell) + 0xA24BAED4963EE407ULL));
    h = splitmix64(h ^ (static_cast<std::uint64_t>(class_idx + 1) + 0x9FB21C651E98DF25ULL));
    h = splitmix64(h ^ static_cast<std::uint64_t>(purpose));
    return h;
}

// A self-contained mt19937_64 stream with the handful of draw shapes the
// simulator needs. All derived draws go through uniform01 so the sequence is
// fully pinned by the engine, not by library distribution internals.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on (0,1]; never returns 0, so log() below is always finite.
    double uniform01() {
        return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Inverse-CDF exponential draw: -ln(u)/rate.
    double exponential(double rate) {
        if (rate <= 0.0) throw std::invalid_argument("exponential: rate must be > 0");
        return -std::log(uniform01()) / rate;
    }

    // Uniform integer in [0, n).
    int uniform_int(int n) {
        if (n <= 0) throw std::invalid_argument("uniform_int: n must be > 0");
        // 53-bit scaling keeps the draw deterministic and unbiased enough for
        // the small n used here.
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        int k = static_cast<int>(u * n);
        return k < n ? k : n - 1;
    }

    // Box-Muller standard normal.
    double normal() {
        const double u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    // Index draw from an (approximately normalised) probability vector.
    int categorical(std::span<const double> probs) {
        if (probs.empty()) throw std::invalid_argument("categorical: empty distribution");
        const double u = uniform01();
        double cum = 0.0;
        int last_positive = -1;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            if (probs[i] > 0.0) last_positive = static_cast<int>(i);
            cum += probs[i];
            if (u <= cum) return static_cast<int>(i);
        }
        if (last_positive < 0)
            throw std::invalid_argument("categorical: all probabilities are zero");
        return last_positive;  // u fell into rounding slack at the top
    }

private:
    std::mt19937_64 engine_;
};

inline RandomStream make_stream(std::uint64_t master, int cell, CallClass c,
                                StreamPurpose purpose) {
    return RandomStream(derive_stream_seed(master, cell, class_index(c), purpose));
}

inline RandomStream make_stream(std::uint64_t master, int cell, StreamPurpose purpose) {
    return RandomStream(derive_stream_seed(master, cell, -1, purpose));
}

}  // namespace cellsim
