#include "klmat/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace klmat {

void validate(const KernelParams& params) {
    if (!(params.h > 0.0) || !std::isfinite(params.h)) {
        throw ContractViolation("kernel bandwidth h must be positive and finite, got " +
                                std::to_string(params.h));
    }
}

namespace {

void check_vector(std::span<const double> v, const char* what) {
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw ContractViolation(std::string(what) + " contains a non-finite entry");
        }
    }
}

} // namespace

double gaussian_kernel(std::span<const double> u, std::span<const double> v,
                       const KernelParams& params) {
    validate(params);
    if (u.size() != v.size()) {
        throw ContractViolation("kernel arguments differ in length: " +
                                std::to_string(u.size()) + " vs " + std::to_string(v.size()));
    }
    check_vector(u, "kernel argument u");
    check_vector(v, "kernel argument v");
    return detail::gaussian_kernel_unchecked(u, v, params.h);
}

GramMatrix gram_matrix(const std::vector<std::vector<double>>& points,
                       const KernelParams& params) {
    validate(params);
    if (points.empty()) {
        throw ContractViolation("gram_matrix requires at least one point");
    }
    const std::size_t dim = points.front().size();
    for (const auto& p : points) {
        if (p.size() != dim) {
            throw ContractViolation("gram_matrix points differ in length");
        }
        check_vector(p, "gram_matrix point");
    }

    const std::size_t n = points.size();
    GramMatrix g(n);
    // each pair computed once and mirrored, so symmetry is exact
    for (std::size_t i = 0; i < n; ++i) {
        g.at(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double k = detail::gaussian_kernel_unchecked(points[i], points[j], params.h);
            g.at(i, j) = k;
            g.at(j, i) = k;
        }
    }
    return g;
}

double lambda_max(const GramMatrix& gram) {
    const std::size_t n = gram.size();
    if (n == 0) {
        throw ContractViolation("lambda_max of an empty matrix");
    }

    constexpr int kMaxIters = 10000;
    constexpr double kRelTol = 1e-9;
    const double scale = 1.0 / static_cast<double>(n);

    std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    std::vector<double> w(n);
    double lambda = 0.0;

    for (int iter = 0; iter < kMaxIters; ++iter) {
        // w = (1/n) G v
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                acc += gram.at(i, j) * v[j];
            }
            w[i] = scale * acc;
        }
        double rayleigh = 0.0;
        double norm_sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            rayleigh += v[i] * w[i];
            norm_sq += w[i] * w[i];
        }
        const double prev = lambda;
        lambda = rayleigh;
        if (iter > 0 && std::abs(lambda - prev) <= kRelTol * std::abs(lambda)) {
            return lambda;
        }
        const double norm = std::sqrt(norm_sq);
        if (norm == 0.0) {
            // only possible for a zero matrix, which a valid Gram never is
            throw NumericalFailure("power iteration hit a zero vector", lambda);
        }
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = w[i] / norm;
        }
    }
    throw NumericalFailure("power iteration did not converge within 10000 iterations",
                           lambda);
}

} // namespace klmat
