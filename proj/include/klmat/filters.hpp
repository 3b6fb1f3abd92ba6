#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "klmat/kernel.hpp"

namespace klmat {

/// One training example: embedded input vector plus desired scalar output.
struct Sample {
    std::vector<double> input;
    double desired = 0.0;
};

/// Stored kernel centers and their coefficients; grows by at most one entry
/// per training step.
struct Codebook {
    std::vector<std::vector<double>> centers;
    std::vector<double> coeffs;

    std::size_t size() const noexcept { return coeffs.size(); }
    bool empty() const noexcept { return coeffs.empty(); }
};

struct FixedStep {
    double mu = 0.5;
};

/// Lorentzian variable step size: mu = beta * log10(1 + delta_e / (2 l^2)),
/// delta_e a low-pass estimate of the squared error, mu clamped to
/// [mu_min, mu_max].
struct LorentzianStep {
    double beta = 1.0;
    double l = 0.1;
    double theta = 0.9;
    double delta_e = 0.0;
    double mu_min = 0.01;
    double mu_max = 2.0;
};

using StepSizeSchedule = std::variant<FixedStep, LorentzianStep>;

/// Advances the low-pass error estimate with the new error and returns the
/// clamped step size computed from the updated estimate.
double vss_step(LorentzianStep& sched, double error);

/// Clamped step size for the current (un-advanced) estimate.
double vss_mu(const LorentzianStep& sched);

void validate(const StepSizeSchedule& sched);

/// Novelty-criterion gate. Admission requires the candidate to be farther
/// than dist_threshold from every stored center AND its error magnitude to
/// exceed err_threshold (both strict). An empty codebook always admits.
struct NcParams {
    double dist_threshold = 0.0;
    double err_threshold = 0.0;
    bool enabled = false;
};

bool nc_admits(const Codebook& codebook, std::span<const double> u, double error,
               const NcParams& nc);

enum class KernelAlgo { Klms, Klmat };

struct StepResult {
    double prediction = 0.0;
    double error = 0.0;
    double mu_used = 0.0;
    bool admitted = false;
};

/// Online kernel learner (KLMS or KLMAT), optionally with a Lorentzian
/// step-size schedule and/or a novelty-criterion gate.
///
/// KLMAT appends coefficient mu * e^2 * sign(e), KLMS appends mu * e; the
/// step size is folded into the stored coefficient, so predict() is a plain
/// kernel sum.
struct KernelFilter {
    KernelAlgo algo = KernelAlgo::Klmat;
    KernelParams kernel;
    StepSizeSchedule schedule;
    NcParams nc;

    Codebook codebook;
    std::uint64_t step_count = 0;

    KernelFilter() = default;
    KernelFilter(KernelAlgo algo, KernelParams kernel, StepSizeSchedule schedule,
                 NcParams nc = {})
        : algo(algo), kernel(kernel), schedule(std::move(schedule)), nc(nc) {}

    /// Sum of coeff_j * kappa(center_j, u); 0 for an empty codebook.
    double predict(std::span<const double> u) const;

    /// Observe one sample: predict, compute the error, pick the step size,
    /// and (unless NC rejects) append a new center. Throws DivergenceError
    /// on a non-finite prediction, error, or coefficient.
    StepResult step(const Sample& s);
};

/// Linear LMAT baseline: w <- w + mu * e^2 * sign(e) * u.
struct LinearFilter {
    std::vector<double> w;
    double mu = 0.01;
    std::uint64_t step_count = 0;

    LinearFilter() = default;
    LinearFilter(std::size_t order, double mu) : w(order, 0.0), mu(mu) {}

    struct Result {
        double prediction = 0.0;
        double error = 0.0;
    };

    double predict(std::span<const double> u) const;
    Result step(const Sample& s);
};

/// Parameters sufficient to construct a fresh filter of either family.
struct LinearConfig {
    double mu = 0.01;
};

struct KernelConfig {
    KernelAlgo algo = KernelAlgo::Klmat;
    KernelParams kernel;
    StepSizeSchedule schedule = FixedStep{};
    NcParams nc;
};

using FilterConfig = std::variant<LinearConfig, KernelConfig>;

void validate(const FilterConfig& config);

} // namespace klmat
