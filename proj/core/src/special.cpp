#include "sppal/special.hpp"

#include <cmath>
#include <numbers>

#include "sppal/errors.hpp"
#include "sppal/quadrature.hpp"

namespace sppal {

double bessel_j0(double x) { return std::cyl_bessel_j(0.0, x); }
double bessel_j1(double x) { return std::cyl_bessel_j(1.0, x); }
double bessel_i0(double x) { return std::cyl_bessel_i(0.0, x); }
double bessel_i1(double x) { return std::cyl_bessel_i(1.0, x); }

double struve_h1(double x) {
    detail::require(x >= 0.0, "struve_h1 needs x >= 0");
    if (x == 0.0) return 0.0;
    // H1(x) = (2x/pi) * int_0^{pi/2} cos^2(t) sin(x sin t) dt; panels keep the
    // oscillation per panel below about one radian.
    const int panels = 2 + static_cast<int>(x / 2.0);
    const double integral = integrate_panels<double>(
        [x](double t) {
            const double c = std::cos(t);
            return c * c * std::sin(x * std::sin(t));
        },
        0.0, 0.5 * std::numbers::pi, panels, 16);
    return 2.0 * x / std::numbers::pi * integral;
}

double piston_resistance(double two_ka) {
    detail::require(two_ka > 0.0, "piston resistance needs 2ka > 0");
    if (two_ka < 1e-3) return two_ka * two_ka / 8.0;
    return 1.0 - 2.0 * bessel_j1(two_ka) / two_ka;
}

double piston_reactance(double two_ka) {
    detail::require(two_ka > 0.0, "piston reactance needs 2ka > 0");
    return 2.0 * struve_h1(two_ka) / two_ka;
}

}  // namespace sppal
