#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "sppal/errors.hpp"

namespace sppal::detail {

// int_0^{2 pi} exp(-gamma R) / R dphi with R^2 = zz + rho^2 + r^2 - 2 rho r cos(phi).
// The integrand is periodic and analytic, so the trapezoid rule converges geometrically;
// the node count doubles until successive sums agree to rel_tol.
inline std::complex<double> ring_kernel(double rho, double r, double zz, std::complex<double> gamma,
                                        double rel_tol, int max_levels = 16) {
    constexpr double pi = std::numbers::pi;
    const double base = zz + rho * rho + r * r;
    const double cross = 2.0 * rho * r;
    auto g = [&](double phi) {
        const double big_r = std::sqrt(std::max(base - cross * std::cos(phi), 0.0));
        return std::exp(-gamma * big_r) / big_r;
    };
    int n = 16;  // intervals on [0, pi]
    double h = pi / n;
    std::complex<double> sum = 0.5 * (g(0.0) + g(pi));
    for (int i = 1; i < n; ++i) sum += g(i * h);
    std::complex<double> prev = 2.0 * h * sum;
    for (int level = 0; level < max_levels; ++level) {
        for (int i = 0; i < n; ++i) sum += g((i + 0.5) * h);
        n *= 2;
        h *= 0.5;
        const std::complex<double> cur = 2.0 * h * sum;
        if (std::abs(cur - prev) <= rel_tol * std::abs(cur)) return cur;
        prev = cur;
    }
    throw NumericalError("ring quadrature did not converge at r = " + std::to_string(r) +
                         ", rho = " + std::to_string(rho) + ", dz^2 = " + std::to_string(zz));
}

}  // namespace sppal::detail
