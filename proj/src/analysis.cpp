#include "klmat/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace klmat {

double mse_db(std::span<const double> errors) {
    if (errors.empty()) {
        throw ContractViolation("mse_db requires a nonempty error list");
    }
    double acc = 0.0;
    for (double e : errors) {
        acc += e * e;
    }
    const double mean = acc / static_cast<double>(errors.size());
    if (mean == 0.0) {
        return kMseFloorDb;
    }
    return std::max(10.0 * std::log10(mean), kMseFloorDb);
}

double step_size_bound(const StabilityInputs& in) {
    return std::sqrt(std::numbers::pi / 2.0) / (in.sigma_e * in.lambda_max);
}

double l_lower_bound(const StabilityInputs& in) {
    return in.e_sq * in.sigma_e * in.lambda_max * in.beta /
           (std::sqrt(2.0 * std::numbers::pi) * std::numbers::ln10);
}

double gradient_oracle(double e) {
    const double s = e > 0.0 ? 1.0 : (e < 0.0 ? -1.0 : 0.0);
    return 3.0 * e * e * s;
}

namespace {

// FNV-1a over the canonical parameter string, for MseCurve::config_digest.
std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string digest_of(const FilterConfig& config, const NoiseModel& noise,
                      std::uint64_t seed) {
    std::string repr = "seed=" + std::to_string(seed) + ";";
    if (const auto* lin = std::get_if<LinearConfig>(&config)) {
        repr += "lmat mu=" + std::to_string(lin->mu) + ";";
    } else {
        const auto& k = std::get<KernelConfig>(config);
        repr += (k.algo == KernelAlgo::Klmat ? "klmat" : "klms");
        repr += " h=" + std::to_string(k.kernel.h) + ";";
        if (const auto* f = std::get_if<FixedStep>(&k.schedule)) {
            repr += "mu=" + std::to_string(f->mu) + ";";
        } else {
            const auto& lo = std::get<LorentzianStep>(k.schedule);
            repr += "beta=" + std::to_string(lo.beta) + " l=" + std::to_string(lo.l) +
                    " theta=" + std::to_string(lo.theta) + ";";
        }
        if (k.nc.enabled) {
            repr += "nc=" + std::to_string(k.nc.dist_threshold) + "," +
                    std::to_string(k.nc.err_threshold) + ";";
        }
    }
    repr += "noise_index=" + std::to_string(noise.index());
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(repr)));
    return std::string(buf);
}

} // namespace

TrainingTrace testing_mse_curve(std::span<const Sample> train,
                                std::span<const Sample> test,
                                const FilterConfig& config,
                                const NoiseModel& noise, SeededRng rng) {
    if (train.empty() || test.empty()) {
        throw ContractViolation("testing_mse_curve requires nonempty train and test sets");
    }
    validate(config);
    validate(noise);

    TrainingTrace trace;
    trace.curve.config_digest = digest_of(config, noise, rng.seed());
    const std::size_t n = train.size();
    trace.curve.values_db.reserve(n);
    trace.mse_linear.reserve(n);
    trace.mu_used.reserve(n);
    trace.codebook_size.reserve(n);
    trace.train_errors.reserve(n);

    if (const auto* lin = std::get_if<LinearConfig>(&config)) {
        LinearFilter filter(train.front().input.size(), lin->mu);
        for (std::size_t k = 0; k < n; ++k) {
            Sample s = train[k];
            s.desired += sample_noise(noise, rng, k);
            LinearFilter::Result r;
            try {
                r = filter.step(s);
            } catch (const DivergenceError&) {
                trace.curve.diverged_at = k;
                break;
            }
            double sq_acc = 0.0;
            for (std::size_t i = 0; i < test.size(); ++i) {
                const double e = test[i].desired - filter.predict(test[i].input);
                sq_acc += e * e;
            }
            const double mean_sq = sq_acc / static_cast<double>(test.size());
            if (!std::isfinite(mean_sq)) {
                trace.curve.diverged_at = k;
                break;
            }
            trace.curve.values_db.push_back(mean_sq == 0.0 ? kMseFloorDb
                                            : std::max(10.0 * std::log10(mean_sq), kMseFloorDb));
            trace.mse_linear.push_back(mean_sq);
            trace.mu_used.push_back(lin->mu);
            trace.codebook_size.push_back(0.0);
            trace.train_errors.push_back(r.error);
        }
        return trace;
    }

    const auto& kcfg = std::get<KernelConfig>(config);
    KernelFilter filter(kcfg.algo, kcfg.kernel, kcfg.schedule, kcfg.nc);

    // Coefficients are immutable once appended, so the test-set predictions
    // can be maintained incrementally: one kernel evaluation per test point
    // per admitted center. Summation order matches predict() exactly.
    std::vector<double> test_pred(test.size(), 0.0);

    for (std::size_t k = 0; k < n; ++k) {
        Sample s = train[k];
        s.desired += sample_noise(noise, rng, k);
        StepResult r;
        try {
            r = filter.step(s);
        } catch (const DivergenceError&) {
            trace.curve.diverged_at = k;
            break;
        }
        if (r.admitted) {
            const auto& center = filter.codebook.centers.back();
            const double coeff = filter.codebook.coeffs.back();
            for (std::size_t i = 0; i < test.size(); ++i) {
                test_pred[i] += coeff * detail::gaussian_kernel_unchecked(
                                            center, test[i].input, kcfg.kernel.h);
            }
        }
        double sq_acc = 0.0;
        for (std::size_t i = 0; i < test.size(); ++i) {
            const double e = test[i].desired - test_pred[i];
            sq_acc += e * e;
        }
        const double mean_sq = sq_acc / static_cast<double>(test.size());
        if (!std::isfinite(mean_sq)) {
            trace.curve.diverged_at = k;
            break;
        }
        trace.curve.values_db.push_back(mean_sq == 0.0 ? kMseFloorDb
                                        : std::max(10.0 * std::log10(mean_sq), kMseFloorDb));
        trace.mse_linear.push_back(mean_sq);
        trace.mu_used.push_back(r.mu_used);
        trace.codebook_size.push_back(static_cast<double>(filter.codebook.size()));
        trace.train_errors.push_back(r.error);
    }
    return trace;
}

} // namespace klmat
