#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <variant>

namespace klmat {

/// Deterministic random stream: identical seed => identical sample sequence.
///
/// Distributions are derived from the raw mt19937_64 stream with fixed draw
/// counts (uniform = 1 draw, normal = 2 draws via Box-Muller, no cached
/// spare), so streams are reproducible across standard libraries and the
/// degenerate-model identities below hold bit-exactly.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Standard normal.
    double normal() {
        const double u1 = 1.0 - uniform01(); // (0, 1], keeps log finite
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
};

struct NoNoise {};

/// Zero-mean Gaussian with standard deviation sigma.
struct Wgn {
    double sigma = 0.1;
};

/// Gaussian background plus Bernoulli-gated Gaussian impulses:
/// N(0, sigma_g^2) + b * N(0, (impulse_scale * sigma_i)^2), b ~ Bernoulli(p_c).
/// With p_c = 0 the Bernoulli draw is skipped entirely, so the stream is
/// bit-identical to Wgn{sigma_g} for the same seed.
struct BgImpulsive {
    double sigma_g = 0.02;
    double p_c = 0.3;
    double sigma_i = 0.02;
    double impulse_scale = 1.0;
};

/// Uniform on (-a, a) with a = sqrt(3 * variance).
struct UniformNoise {
    double variance = 1.0;
};

/// Rayleigh with scale sqrt(sigma_sq); mean sqrt(sigma_sq * pi / 2) subtracted
/// iff remove_mean.
struct RayleighNoise {
    double sigma_sq = 0.05;
    bool remove_mean = false;
};

/// Deterministic square wave: +amplitude for the first half period, then
/// -amplitude; ignores the rng entirely.
struct RectangularNoise {
    double amplitude = 0.1;
    std::uint64_t period_samples = 2;
};

/// Exponential with the given mean; mean subtracted iff remove_mean.
struct ExponentialNoise {
    double mean = 0.1;
    bool remove_mean = false;
};

using NoiseModel = std::variant<NoNoise, Wgn, BgImpulsive, UniformNoise,
                                RayleighNoise, RectangularNoise, ExponentialNoise>;

void validate(const NoiseModel& model);

/// One additive noise value for the given training step.
double sample_noise(const NoiseModel& model, SeededRng& rng, std::uint64_t step_index);

} // namespace klmat
