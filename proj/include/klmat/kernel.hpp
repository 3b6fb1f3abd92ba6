#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "klmat/errors.hpp"

namespace klmat {

/// Gaussian kernel bandwidth: kappa(u, v) = exp(-h * ||u - v||^2).
struct KernelParams {
    double h = 1.0;
};

void validate(const KernelParams& params);

namespace detail {

// No validation; callers guarantee equal lengths and finite entries.
inline double gaussian_kernel_unchecked(std::span<const double> u,
                                        std::span<const double> v,
                                        double h) noexcept {
    double dist_sq = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double d = u[i] - v[i];
        dist_sq += d * d;
    }
    return std::exp(-h * dist_sq);
}

} // namespace detail

/// exp(-h * ||u - v||^2); always in (0, 1].
double gaussian_kernel(std::span<const double> u, std::span<const double> v,
                       const KernelParams& params);

/// Symmetric kernel matrix with unit diagonal, built one pair at a time.
class GramMatrix {
public:
    GramMatrix() = default;
    explicit GramMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

    std::size_t size() const noexcept { return n_; }
    double at(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
    double& at(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    const std::vector<double>& data() const noexcept { return data_; }

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

GramMatrix gram_matrix(const std::vector<std::vector<double>>& points,
                       const KernelParams& params);

/// Largest eigenvalue of (1/n) * G by power iteration (all-ones start,
/// relative tolerance 1e-9, at most 10000 iterations).
double lambda_max(const GramMatrix& gram);

} // namespace klmat
