#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "klmat/filters.hpp"
#include "klmat/noise.hpp"

namespace klmat {

/// Reporting floor for 10*log10(mean e^2); an all-zero error set maps here.
inline constexpr double kMseFloorDb = -320.0;

/// 10 * log10(mean of squared errors), floored at kMseFloorDb.
double mse_db(std::span<const double> errors);

/// Per-training-iteration testing MSE in dB. Truncates at a divergence,
/// recording the 0-based step index that diverged.
struct MseCurve {
    std::vector<double> values_db;
    std::size_t n_replicas = 1;
    std::string config_digest;
    std::optional<std::size_t> diverged_at;
};

/// Full per-iteration record of one training run: the dB curve plus the
/// linear-domain mean squared errors (for replica averaging), the step sizes
/// used, the codebook growth, and the raw training errors (for the stability
/// diagnostics).
struct TrainingTrace {
    MseCurve curve;
    std::vector<double> mse_linear;
    std::vector<double> mu_used;
    std::vector<double> codebook_size;
    std::vector<double> train_errors;
};

/// Trains a fresh filter on `train` (desired values corrupted by one noise
/// draw per step), evaluating the frozen filter on the clean `test` set after
/// every step. The rng is taken by value: a given (config, noise, seed)
/// triple always produces the same trace, and the corruption stream does not
/// depend on the filter, so different algorithms run with equal seeds see
/// identical corrupted targets.
TrainingTrace testing_mse_curve(std::span<const Sample> train,
                                std::span<const Sample> test,
                                const FilterConfig& config,
                                const NoiseModel& noise, SeededRng rng);

struct StabilityInputs {
    double sigma_e = 1.0;   // root mean-squared error estimate
    double lambda_max = 1.0;
    double beta = 1.0;
    double e_sq = 0.0;      // instantaneous squared error
};

/// Sufficient mean-convergence ceiling on the step size:
/// sqrt(pi/2) / (sigma_e * lambda_max).
double step_size_bound(const StabilityInputs& in);

/// Lower bound on the Lorentzian parameter l:
/// e_sq * sigma_e * lambda_max * beta / (sqrt(2 pi) * ln 10).
double l_lower_bound(const StabilityInputs& in);

/// Scalar gradient factor of |e|^3: 3 e^2 sign(e).
double gradient_oracle(double e);

} // namespace klmat
