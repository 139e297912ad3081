#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <type_traits>
#include <vector>

#include "sppal/errors.hpp"

namespace sppal {

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

// Rules are cached for n in [1, 64]. Throws DomainError outside that range.
const GaussRule& gauss_legendre(int n);

// Neumaier compensated accumulator; order of additions fixes the result.
template <class T>
class CompensatedSum {
public:
    void add(T v) {
        const T t = sum_ + v;
        comp_ += compensate(sum_, v, t);
        sum_ = t;
    }
    T value() const { return sum_ + comp_; }

private:
    static double term(double s, double v, double t) {
        return std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
    }
    static T compensate(T s, T v, T t) {
        if constexpr (std::is_same_v<T, double>) {
            return term(s, v, t);
        } else {
            return {term(s.real(), v.real(), t.real()), term(s.imag(), v.imag(), t.imag())};
        }
    }
    T sum_{};
    T comp_{};
};

namespace detail {

struct Kronrod15 {
    static constexpr double xk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                     0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                     0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                     0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
    static constexpr double wk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                     0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                     0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                     0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
    static constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                     0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
};

template <class T, class F>
void gk15(F& f, double a, double b, T& kron, T& gauss) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const T fc = f(c);
    kron = fc * Kronrod15::wk[7];
    gauss = fc * Kronrod15::wg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * Kronrod15::xk[j];
        const T s = f(c - dx) + f(c + dx);
        kron += s * Kronrod15::wk[j];
        if (j % 2 == 1) gauss += s * Kronrod15::wg[j / 2];
    }
    kron *= h;
    gauss *= h;
}

template <class T, class F>
T gk15_recurse(F& f, double a, double b, double tol, double span, int depth, int max_depth, int& evals) {
    T kron{}, gauss{};
    gk15<T>(f, a, b, kron, gauss);
    evals += 15;
    const double local = tol * (b - a) / span;
    if (std::abs(kron - gauss) <= local) return kron;
    if (depth >= max_depth) {
        throw NumericalError("adaptive quadrature exceeded depth " + std::to_string(max_depth) +
                             " on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
    }
    const double m = 0.5 * (a + b);
    return gk15_recurse<T>(f, a, m, tol, span, depth + 1, max_depth, evals) +
           gk15_recurse<T>(f, m, b, tol, span, depth + 1, max_depth, evals);
}

}  // namespace detail

// Adaptive Gauss-Kronrod 7/15 quadrature on [a, b].
// Accepts a panel when |K15 - G7| is below its length share of max(abs_tol, rel_tol * |coarse estimate|).
template <class T, class F>
T integrate_adaptive(F&& f, double a, double b, double rel_tol, double abs_tol = 0.0,
                     int max_depth = 40) {
    if (b == a) return T{};
    T kron{}, gauss{};
    detail::gk15<T>(f, a, b, kron, gauss);
    const double tol = std::max(abs_tol, rel_tol * std::abs(kron));
    if (std::abs(kron - gauss) <= tol && tol > 0.0) return kron;
    int evals = 0;
    const double m = 0.5 * (a + b);
    const double span = b - a;
    const double t = tol > 0.0 ? tol : rel_tol;
    return detail::gk15_recurse<T>(f, a, m, t, span, 1, max_depth, evals) +
           detail::gk15_recurse<T>(f, m, b, t, span, 1, max_depth, evals);
}

// Fixed-order Gauss-Legendre on n equal panels of [a, b].
template <class T, class F>
T integrate_panels(F&& f, double a, double b, int panels, int order) {
    const GaussRule& g = gauss_legendre(order);
    const double h = (b - a) / panels;
    T total{};
    for (int p = 0; p < panels; ++p) {
        const double c = a + (p + 0.5) * h;
        T part{};
        for (std::size_t j = 0; j < g.x.size(); ++j) part += g.w[j] * f(c + 0.5 * h * g.x[j]);
        total += 0.5 * h * part;
    }
    return total;
}

}  // namespace sppal
