#include "klmat/signals.hpp"

#include <cmath>
#include <charconv>
#include <fstream>
#include <string>

namespace klmat {

namespace {

// True when ratio = a / b is an integer to within roundoff.
bool integer_multiple(double a, double b, long long& ratio_out) {
    const double ratio = a / b;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, rounded)) {
        return false;
    }
    ratio_out = static_cast<long long>(rounded);
    return true;
}

} // namespace

void validate(const MgParams& params) {
    if (!(params.dt > 0.0) || !std::isfinite(params.dt)) {
        throw ContractViolation("MG dt must be positive and finite");
    }
    if (!(params.q > 0.0) || !(params.m > 0.0)) {
        throw ContractViolation("MG q and m must be positive");
    }
    if (!std::isfinite(params.history_value)) {
        throw ContractViolation("MG history value must be finite");
    }
    long long ratio = 0;
    if (!integer_multiple(params.sample_period, params.dt, ratio)) {
        throw ContractViolation("MG sample_period must be a positive integer multiple of dt");
    }
    if (!integer_multiple(params.tau, params.dt, ratio)) {
        throw ContractViolation("MG tau must be a positive integer multiple of dt");
    }
}

Series mackey_glass(const MgParams& params, std::size_t n_samples,
                    std::optional<double> x0_override) {
    validate(params);
    if (n_samples == 0) {
        throw ContractViolation("mackey_glass requires n_samples >= 1");
    }

    long long stride = 0, delay_steps = 0;
    integer_multiple(params.sample_period, params.dt, stride);
    integer_multiple(params.tau, params.dt, delay_steps);

    const double q = params.q;
    const double m = params.m;
    const double dt = params.dt;
    const double history = params.history_value;
    const auto deriv = [&](double x, double x_delayed) {
        const double p = std::pow(x_delayed, 10.0);
        return -q * x + m * x_delayed / (1.0 + p);
    };

    // Ring buffer over the last delay_steps+1 grid values; grid index j maps
    // to slot j mod (delay_steps+1). j <= -1 is the constant history.
    const std::size_t ring_len = static_cast<std::size_t>(delay_steps) + 1;
    std::vector<double> ring(ring_len, history);
    const auto grid_value = [&](long long j) {
        return j < 0 ? history : ring[static_cast<std::size_t>(j % static_cast<long long>(ring_len))];
    };
    // delayed value at fractional grid position j + frac, frac in {0, 0.5}
    const auto delayed = [&](long long j, double frac) {
        if (frac == 0.0) {
            return grid_value(j);
        }
        const double a = grid_value(j);
        const double b = grid_value(j + 1);
        return a + frac * (b - a);
    };

    ring[0] = x0_override.value_or(history);

    Series out;
    out.origin = SeriesOrigin::MackeyGlass;
    out.values.reserve(n_samples);

    const long long total_emits = static_cast<long long>(params.warmup + n_samples);
    const long long total_steps = (total_emits - 1) * stride;
    long long emitted = 0;
    for (long long k = 0; k <= total_steps; ++k) {
        if (k % stride == 0) {
            const double x = grid_value(k);
            if (!std::isfinite(x)) {
                throw NumericalFailure("MG state became non-finite at t = " +
                                           std::to_string(static_cast<double>(k) * dt),
                                       x);
            }
            if (emitted >= static_cast<long long>(params.warmup)) {
                out.values.push_back(x);
            }
            ++emitted;
        }
        if (k == total_steps) {
            break;
        }
        const double x = grid_value(k);
        const double xd0 = delayed(k - delay_steps, 0.0);
        const double xdh = delayed(k - delay_steps, 0.5);
        const double xd1 = delayed(k - delay_steps + 1, 0.0);
        const double k1 = deriv(x, xd0);
        const double k2 = deriv(x + 0.5 * dt * k1, xdh);
        const double k3 = deriv(x + 0.5 * dt * k2, xdh);
        const double k4 = deriv(x + dt * k3, xd1);
        const double next = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        ring[static_cast<std::size_t>((k + 1) % static_cast<long long>(ring_len))] = next;
    }
    return out;
}

std::vector<Sample> embed(const Series& series, std::size_t order) {
    if (order == 0) {
        throw ContractViolation("embedding order must be >= 1");
    }
    if (series.values.size() <= order) {
        throw ContractViolation("series of length " + std::to_string(series.values.size()) +
                                " is too short for embedding order " + std::to_string(order));
    }
    std::vector<Sample> samples;
    samples.reserve(series.values.size() - order);
    for (std::size_t t = order; t < series.values.size(); ++t) {
        Sample s;
        s.input.assign(series.values.begin() + static_cast<std::ptrdiff_t>(t - order),
                       series.values.begin() + static_cast<std::ptrdiff_t>(t));
        s.desired = series.values[t];
        samples.push_back(std::move(s));
    }
    return samples;
}

std::pair<std::vector<Sample>, std::vector<Sample>>
split(const std::vector<Sample>& samples, std::size_t n_train, std::size_t n_test) {
    if (n_train + n_test > samples.size()) {
        throw ContractViolation("split needs " + std::to_string(n_train + n_test) +
                                " samples but only " + std::to_string(samples.size()) +
                                " are available");
    }
    std::vector<Sample> train(samples.begin(), samples.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::vector<Sample> test(samples.begin() + static_cast<std::ptrdiff_t>(n_train),
                             samples.begin() + static_cast<std::ptrdiff_t>(n_train + n_test));
    return {std::move(train), std::move(test)};
}

namespace {

bool parse_long(std::string_view field, long& out) {
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

bool parse_double(std::string_view field, double& out) {
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

} // namespace

Series load_sunspot(const std::filesystem::path& path) {
    constexpr long kFirstYear = 1700;
    constexpr long kLastYear = 1997;

    std::ifstream in(path);
    if (!in) {
        throw IngestionError(path.string(), 0, "cannot open file");
    }

    Series out;
    out.origin = SeriesOrigin::Sunspot;
    std::string line;
    std::size_t lineno = 0;
    long prev_year = 0;
    bool have_prev = false;

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
            throw IngestionError(path.string(), lineno, "expected exactly two comma-separated fields");
        }
        const std::string_view year_field(line.data(), comma);
        const std::string_view value_field(line.data() + comma + 1, line.size() - comma - 1);

        long year = 0;
        if (!parse_long(year_field, year)) {
            if (lineno == 1) {
                continue; // optional header row
            }
            throw IngestionError(path.string(), lineno, "non-numeric year '" + std::string(year_field) + "'");
        }
        double value = 0.0;
        if (!parse_double(value_field, value) || !std::isfinite(value)) {
            throw IngestionError(path.string(), lineno, "non-numeric value '" + std::string(value_field) + "'");
        }
        if (have_prev && year <= prev_year) {
            throw IngestionError(path.string(), lineno,
                                 "years must be strictly increasing (" + std::to_string(year) +
                                     " after " + std::to_string(prev_year) + ")");
        }
        if (!have_prev && year != kFirstYear) {
            throw IngestionError(path.string(), lineno,
                                 "first year must be " + std::to_string(kFirstYear) + ", got " +
                                     std::to_string(year));
        }
        prev_year = year;
        have_prev = true;
        out.values.push_back(value);
    }

    if (!have_prev) {
        throw IngestionError(path.string(), 0, "file contains no records");
    }
    if (prev_year != kLastYear ||
        out.values.size() != static_cast<std::size_t>(kLastYear - kFirstYear + 1)) {
        throw IngestionError(path.string(), lineno,
                             "expected years " + std::to_string(kFirstYear) + "-" +
                                 std::to_string(kLastYear) + " inclusive, got " +
                                 std::to_string(out.values.size()) + " records ending at " +
                                 std::to_string(prev_year));
    }
    return out;
}

} // namespace klmat
