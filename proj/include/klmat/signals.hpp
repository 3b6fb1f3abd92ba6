#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include "klmat/filters.hpp"

namespace klmat {

/// Mackey-Glass delay ODE:  dx/dt = -q x(t) + m x(t - tau) / (1 + x(t - tau)^10).
///
/// Integrated with fixed-step RK4 on a dt grid; the delayed term is read from
/// a ring buffer of past grid values, linearly interpolated at the half-step
/// stages. x(t) = history_value for t <= 0. One sample is emitted every
/// sample_period time units; the first `warmup` emissions are discarded.
struct MgParams {
    double q = 0.1;
    double m = 0.2;
    double tau = 30.0;
    double dt = 0.1;
    double sample_period = 6.0;
    double history_value = 1.2;
    std::size_t warmup = 100;
};

void validate(const MgParams& params);

enum class SeriesOrigin { MackeyGlass, Sunspot, External };

struct Series {
    std::vector<double> values;
    SeriesOrigin origin = SeriesOrigin::External;
};

Series mackey_glass(const MgParams& params, std::size_t n_samples,
                    std::optional<double> x0_override = std::nullopt);

/// Delay embedding: for each t in [order, len), input = the `order` previous
/// values, desired = x(t). Output length is len - order.
std::vector<Sample> embed(const Series& series, std::size_t order);

/// First n_train samples for training, the next n_test for testing; order
/// preserved, no shuffling.
std::pair<std::vector<Sample>, std::vector<Sample>>
split(const std::vector<Sample>& samples, std::size_t n_train, std::size_t n_test);

/// Reads the annual sunspot series as `year,value` lines (optional header),
/// years 1700-1997 inclusive, strictly increasing. Returns 298 values.
Series load_sunspot(const std::filesystem::path& path);

} // namespace klmat
