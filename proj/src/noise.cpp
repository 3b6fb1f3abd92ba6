#include "klmat/noise.hpp"

#include <cmath>

#include "klmat/errors.hpp"

namespace klmat {

namespace {

struct Validator {
    void operator()(const NoNoise&) const {}
    void operator()(const Wgn& n) const {
        require(n.sigma > 0.0 && std::isfinite(n.sigma), "wgn sigma must be positive");
    }
    void operator()(const BgImpulsive& n) const {
        require(n.sigma_g > 0.0 && std::isfinite(n.sigma_g), "bg sigma_g must be positive");
        require(n.p_c >= 0.0 && n.p_c <= 1.0, "bg p_c must lie in [0, 1]");
        require(n.sigma_i > 0.0 && std::isfinite(n.sigma_i), "bg sigma_i must be positive");
        require(n.impulse_scale > 0.0 && std::isfinite(n.impulse_scale),
                "bg impulse_scale must be positive");
    }
    void operator()(const UniformNoise& n) const {
        require(n.variance > 0.0 && std::isfinite(n.variance), "uniform variance must be positive");
    }
    void operator()(const RayleighNoise& n) const {
        require(n.sigma_sq > 0.0 && std::isfinite(n.sigma_sq), "rayleigh sigma_sq must be positive");
    }
    void operator()(const RectangularNoise& n) const {
        require(n.amplitude > 0.0 && std::isfinite(n.amplitude),
                "rectangular amplitude must be positive");
        require(n.period_samples >= 1, "rectangular period_samples must be >= 1");
    }
    void operator()(const ExponentialNoise& n) const {
        require(n.mean > 0.0 && std::isfinite(n.mean), "exponential mean must be positive");
    }

    static void require(bool ok, const char* msg) {
        if (!ok) {
            throw ContractViolation(msg);
        }
    }
};

struct Sampler {
    SeededRng& rng;
    std::uint64_t step;

    double operator()(const NoNoise&) const { return 0.0; }

    double operator()(const Wgn& n) const { return n.sigma * rng.normal(); }

    double operator()(const BgImpulsive& n) const {
        double v = n.sigma_g * rng.normal();
        // p_c == 0 must not consume the Bernoulli draw, so the stream
        // degenerates bit-exactly to Wgn{sigma_g}
        if (n.p_c > 0.0 && rng.uniform01() < n.p_c) {
            v += n.impulse_scale * n.sigma_i * rng.normal();
        }
        return v;
    }

    double operator()(const UniformNoise& n) const {
        const double a = std::sqrt(3.0 * n.variance);
        return a * (2.0 * rng.uniform01() - 1.0);
    }

    double operator()(const RayleighNoise& n) const {
        const double scale = std::sqrt(n.sigma_sq);
        const double u = 1.0 - rng.uniform01(); // (0, 1]
        double v = scale * std::sqrt(-2.0 * std::log(u));
        if (n.remove_mean) {
            v -= scale * std::sqrt(std::numbers::pi / 2.0);
        }
        return v;
    }

    double operator()(const RectangularNoise& n) const {
        // 50% duty cycle, positive first (odd periods round the high half up)
        const std::uint64_t phase = step % n.period_samples;
        return phase < (n.period_samples + 1) / 2 ? n.amplitude : -n.amplitude;
    }

    double operator()(const ExponentialNoise& n) const {
        const double u = 1.0 - rng.uniform01();
        double v = -n.mean * std::log(u);
        if (n.remove_mean) {
            v -= n.mean;
        }
        return v;
    }
};

} // namespace

void validate(const NoiseModel& model) { std::visit(Validator{}, model); }

double sample_noise(const NoiseModel& model, SeededRng& rng, std::uint64_t step_index) {
    return std::visit(Sampler{rng, step_index}, model);
}

} // namespace klmat
