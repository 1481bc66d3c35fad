#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace tsne {

/// splitmix64: portable 64-bit generator with a fixed output sequence for a
/// given state, used for all seeded randomness in this project.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in (0, 1]; never returns 0 so it is safe under log().
    double uniform01() {
        // 53 random bits; +1 shifts the range from [0,1) to (0,1].
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

/// Derives an independent stream for (seed, index); each dataset point gets
/// its own stream so outputs are stable under parallel generation.
inline SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mixer(seed ^ (0x632BE59BD9B4E019ULL + 0x9E3779B97F4A7C15ULL * index));
    return SplitMix64(mixer.next());
}

/// Standard normal draws via Box-Muller on a SplitMix64 stream.
class GaussianStream {
public:
    explicit GaussianStream(SplitMix64 gen) : gen_(gen) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = gen_.uniform01();
        double u2 = gen_.uniform01();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    SplitMix64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace tsne
