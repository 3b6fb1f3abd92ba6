#include "klmat/filters.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace klmat {

namespace {

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

void check_sample(const Sample& s) {
    for (double x : s.input) {
        if (!std::isfinite(x)) {
            throw ContractViolation("sample input contains a non-finite entry");
        }
    }
    if (!std::isfinite(s.desired)) {
        throw ContractViolation("sample desired value is non-finite");
    }
}

double lorentzian_mu(double delta_e, double beta, double l) {
    return beta * std::log10(1.0 + delta_e / (2.0 * l * l));
}

} // namespace

double vss_step(LorentzianStep& sched, double error) {
    sched.delta_e = sched.theta * sched.delta_e + (1.0 - sched.theta) * error * error;
    return std::clamp(lorentzian_mu(sched.delta_e, sched.beta, sched.l),
                      sched.mu_min, sched.mu_max);
}

double vss_mu(const LorentzianStep& sched) {
    return std::clamp(lorentzian_mu(sched.delta_e, sched.beta, sched.l),
                      sched.mu_min, sched.mu_max);
}

void validate(const StepSizeSchedule& sched) {
    if (const auto* fixed = std::get_if<FixedStep>(&sched)) {
        if (!(fixed->mu > 0.0) || !std::isfinite(fixed->mu)) {
            throw ContractViolation("fixed step size mu must be positive and finite");
        }
        return;
    }
    const auto& lo = std::get<LorentzianStep>(sched);
    if (!(lo.beta > 0.0) || !std::isfinite(lo.beta)) {
        throw ContractViolation("Lorentzian beta must be positive and finite");
    }
    if (!(lo.l > 0.0) || !std::isfinite(lo.l)) {
        throw ContractViolation("Lorentzian l must be positive and finite");
    }
    if (!(lo.theta >= 0.0 && lo.theta < 1.0)) {
        throw ContractViolation("Lorentzian theta must lie in [0, 1)");
    }
    if (!(lo.delta_e >= 0.0) || !std::isfinite(lo.delta_e)) {
        throw ContractViolation("Lorentzian delta_e must be nonnegative and finite");
    }
    if (!(0.0 < lo.mu_min && lo.mu_min < lo.mu_max) || !std::isfinite(lo.mu_max)) {
        throw ContractViolation("Lorentzian clamp requires 0 < mu_min < mu_max");
    }
}

bool nc_admits(const Codebook& codebook, std::span<const double> u, double error,
               const NcParams& nc) {
    if (codebook.empty()) {
        return true; // the first sample is always stored
    }
    double min_dist_sq = std::numeric_limits<double>::infinity();
    for (const auto& center : codebook.centers) {
        double d_sq = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double d = u[i] - center[i];
            d_sq += d * d;
        }
        min_dist_sq = std::min(min_dist_sq, d_sq);
    }
    return std::sqrt(min_dist_sq) > nc.dist_threshold &&
           std::abs(error) > nc.err_threshold;
}

double KernelFilter::predict(std::span<const double> u) const {
    if (!codebook.empty() && u.size() != codebook.centers.front().size()) {
        throw ContractViolation("predict input length " + std::to_string(u.size()) +
                                " does not match center length " +
                                std::to_string(codebook.centers.front().size()));
    }
    for (double x : u) {
        if (!std::isfinite(x)) {
            throw ContractViolation("predict input contains a non-finite entry");
        }
    }
    double acc = 0.0;
    for (std::size_t j = 0; j < codebook.size(); ++j) {
        acc += codebook.coeffs[j] *
               detail::gaussian_kernel_unchecked(codebook.centers[j], u, kernel.h);
    }
    return acc;
}

StepResult KernelFilter::step(const Sample& s) {
    check_sample(s);
    const double prediction = predict(s.input);
    const double error = s.desired - prediction;
    if (!std::isfinite(error)) {
        throw DivergenceError(step_count, std::abs(error));
    }

    StepResult result;
    result.prediction = prediction;
    result.error = error;
    result.admitted = !nc.enabled || nc_admits(codebook, s.input, error, nc);

    if (result.admitted) {
        result.mu_used = std::visit(
            [&](auto& sched) -> double {
                using T = std::decay_t<decltype(sched)>;
                if constexpr (std::is_same_v<T, FixedStep>) {
                    return sched.mu;
                } else {
                    return vss_step(sched, error);
                }
            },
            schedule);
        const double gain = (algo == KernelAlgo::Klmat) ? error * error * sign(error)
                                                        : error;
        const double coeff = result.mu_used * gain;
        if (!std::isfinite(coeff)) {
            throw DivergenceError(step_count, std::abs(error));
        }
        codebook.centers.emplace_back(s.input.begin(), s.input.end());
        codebook.coeffs.push_back(coeff);
    } else {
        // rejected sample: no update of any kind, schedule state included
        result.mu_used = std::visit(
            [](const auto& sched) -> double {
                using T = std::decay_t<decltype(sched)>;
                if constexpr (std::is_same_v<T, FixedStep>) {
                    return sched.mu;
                } else {
                    return vss_mu(sched);
                }
            },
            schedule);
    }
    ++step_count;
    return result;
}

double LinearFilter::predict(std::span<const double> u) const {
    if (u.size() != w.size()) {
        throw ContractViolation("input length does not match filter order");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        acc += w[i] * u[i];
    }
    return acc;
}

LinearFilter::Result LinearFilter::step(const Sample& s) {
    check_sample(s);
    const double prediction = predict(s.input);
    const double error = s.desired - prediction;
    if (!std::isfinite(error)) {
        throw DivergenceError(step_count, std::abs(error));
    }
    const double g = mu * error * error * sign(error);
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] += g * s.input[i];
        if (!std::isfinite(w[i])) {
            throw DivergenceError(step_count, std::abs(error));
        }
    }
    ++step_count;
    return {prediction, error};
}

void validate(const FilterConfig& config) {
    if (const auto* lin = std::get_if<LinearConfig>(&config)) {
        if (!(lin->mu > 0.0) || !std::isfinite(lin->mu)) {
            throw ContractViolation("linear filter mu must be positive and finite");
        }
        return;
    }
    const auto& k = std::get<KernelConfig>(config);
    validate(k.kernel);
    validate(k.schedule);
    if (!(k.nc.dist_threshold >= 0.0) || !(k.nc.err_threshold >= 0.0)) {
        throw ContractViolation("NC thresholds must be nonnegative");
    }
}

} // namespace klmat
