#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace qrng {

// One splitmix64 step. Used only to derive well-separated engine seeds from
// (master seed, stream index) pairs; the heavy lifting is mt19937_64.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Deterministic Gaussian stream. The Box-Muller transform is implemented here
// rather than via std::normal_distribution, whose output is unspecified by the
// standard; this keeps bitstreams reproducible across standard libraries.
class GaussianRng {
public:
    explicit GaussianRng(std::uint64_t seed) : engine_(seed) {}

    // Derive the RNG for substream `stream` of a master seed. Streams are
    // independent for distinct indices, so parallel and serial trajectory
    // generation produce identical results.
    static GaussianRng substream(std::uint64_t master_seed, std::uint64_t stream) {
        std::uint64_t state = master_seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1));
        std::uint64_t seed = splitmix64(state);
        seed ^= splitmix64(state) << 1;  // second round decorrelates small masters
        return GaussianRng(seed);
    }

    std::uint64_t raw() { return engine_(); }

    // Uniform on (0, 1].
    double uniform_open() {
        return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    }

    // Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Standard normal draw, N(0, 1).
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_open();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace qrng
