#include "sppal/linfield.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sppal/errors.hpp"
#include "sppal/parallel.hpp"
#include "sppal/quadrature.hpp"
#include "sppal/special.hpp"
#include "ring_kernel.hpp"

namespace sppal {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRefPressure = 20e-6;

bool is_uniform(const SourceProfile& p) {
    return std::all_of(p.v.begin(), p.v.end(), [&](const cplx& x) { return x == p.v.front(); });
}

// Splits [r0, r1] into panels of at most ~2 rad of phase and applies fn(r, weight) on Gauss nodes.
template <class Fn>
void radial_nodes(double r0, double r1, double k, int order, Fn&& fn) {
    const int panels = std::max(1, static_cast<int>(std::ceil(k * (r1 - r0) / 2.0)));
    const int n = panels > 1 || k * (r1 - r0) > 0.5 ? order + 2 : order;
    const GaussRule& g = gauss_legendre(n);
    const double h = (r1 - r0) / panels;
    for (int p = 0; p < panels; ++p) {
        const double c = r0 + (p + 0.5) * h;
        for (int j = 0; j < n; ++j) fn(c + 0.5 * h * g.x[j], 0.5 * h * g.w[j]);
    }
}

cplx general_pressure(const SourceProfile& profile, const Medium& medium, double f,
                      const FieldPoint& pt, const RayleighOptions& opts) {
    const cplx gamma = propagation_constant(medium, f);
    const double k = gamma.imag();
    const double omega = 2.0 * kPi * f;
    const double zz = pt.z * pt.z;
    CompensatedSum<cplx> acc;
    const bool on_axis = pt.rho == 0.0;
    for (std::size_t j = 0; j + 1 < profile.r.size(); ++j) {
        double edges[3] = {profile.r[j], profile.r[j + 1], 0.0};
        int count = 2;
        if (!on_axis && pt.rho > edges[0] && pt.rho < edges[1]) {
            edges[2] = edges[1];
            edges[1] = pt.rho;
            count = 3;
        }
        for (int s = 0; s + 1 < count; ++s) {
            radial_nodes(edges[s], edges[s + 1], k, opts.radial_order, [&](double r, double w) {
                const cplx v = profile.velocity_at(r);
                if (v == 0.0) return;
                if (on_axis) {
                    const double big_r = std::sqrt(zz + r * r);
                    acc.add(w * v * r * std::exp(-gamma * big_r) / big_r);
                } else {
                    acc.add(w * v * r * detail::ring_kernel(pt.rho, r, zz, gamma, opts.rel_tol) / (2.0 * kPi));
                }
            });
        }
    }
    return cplx(0.0, omega * medium.density) * acc.value();
}

cplx far_field_pressure(const SourceProfile& profile, const Medium& medium, double f,
                        const FieldPoint& pt, const RayleighOptions& opts) {
    const cplx gamma = propagation_constant(medium, f);
    const double k = gamma.imag();
    const double range = std::hypot(pt.rho, pt.z);
    const double sin_theta = pt.rho / range;
    CompensatedSum<cplx> acc;
    for (std::size_t j = 0; j + 1 < profile.r.size(); ++j) {
        radial_nodes(profile.r[j], profile.r[j + 1], k, opts.radial_order, [&](double r, double w) {
            acc.add(w * profile.velocity_at(r) * bessel_j0(k * r * sin_theta) * r);
        });
    }
    const double omega = 2.0 * kPi * f;
    return cplx(0.0, omega * medium.density) * std::exp(-gamma * range) / range * acc.value();
}

}  // namespace

double spl_db(cplx p) { return 20.0 * std::log10(std::abs(p) / (std::numbers::sqrt2 * kRefPressure)); }

std::vector<double> FieldCurve::spl_db() const {
    std::vector<double> out;
    out.reserve(pressure.size());
    for (const cplx& p : pressure) out.push_back(sppal::spl_db(p));
    return out;
}

std::vector<double> FieldCurve::normalized_db() const {
    double peak = 0.0;
    for (const cplx& p : pressure) peak = std::max(peak, std::abs(p));
    std::vector<double> out;
    out.reserve(pressure.size());
    for (const cplx& p : pressure) out.push_back(20.0 * std::log10(std::abs(p) / peak));
    return out;
}

double far_field_range(double radius_a, const Medium& medium, double f) {
    const double lambda = wavelength(medium, f);
    const double z1 = radius_a > lambda / 2.0 ? first_local_max(radius_a, f, medium) : radius_a;
    return 20.0 * std::max(z1, radius_a);
}

cplx piston_field(double radius_a, cplx velocity, const Medium& medium, double f,
                  const FieldPoint& pt, double rel_tol) {
    detail::require(radius_a > 0.0, "piston radius must be positive");
    detail::require(pt.z > 0.0, "edge integral needs z > 0");
    detail::require(pt.rho >= 0.0, "rho must be non-negative");
    const cplx gamma = propagation_constant(medium, f);
    const double omega = 2.0 * kPi * f;
    const cplx pre = cplx(0.0, omega * medium.density) * velocity / gamma;
    const double a = radius_a, rho = pt.rho, zz = pt.z * pt.z;
    auto ray = [&](double s) { return std::exp(-gamma * std::sqrt(zz + s * s)); };
    const double abs_tol = 1e-12 * std::exp(-gamma.real() * pt.z);

    if (rho == 0.0) return pre * (std::exp(-gamma * pt.z) - ray(a));
    if (rho <= a) {
        // Rays from the projection of the point to the rim.
        auto edge = [&](double psi) {
            const double sn = std::sin(psi);
            const double s_out = -rho * std::cos(psi) + std::sqrt(std::max(0.0, a * a - rho * rho * sn * sn));
            return ray(s_out);
        };
        const cplx rim = integrate_adaptive<cplx>(edge, 0.0, kPi, rel_tol, abs_tol);
        return pre * (std::exp(-gamma * pt.z) - rim / kPi);
    }
    // Outside the disc only the wedge psi in [pi - delta, pi + delta] meets it.
    const double delta = std::asin(a / rho);
    auto chord = [&](double u) {
        const double psi = kPi + delta * std::sin(u);
        const double sn = std::sin(psi);
        const double root = std::sqrt(std::max(0.0, a * a - rho * rho * sn * sn));
        const double mid = -rho * std::cos(psi);
        return (ray(mid - root) - ray(mid + root)) * delta * std::cos(u);
    };
    const cplx wedge = integrate_adaptive<cplx>(chord, 0.0, 0.5 * kPi, rel_tol, abs_tol);
    return pre * wedge / kPi;
}

cplx rayleigh_pressure(const SourceProfile& profile, const Medium& medium, double f,
                       const FieldPoint& pt, const RayleighOptions& opts) {
    detail::require(f > 0.0, "frequency must be positive");
    detail::require(pt.z >= 0.0, "field point needs z >= 0");
    detail::require(pt.rho >= 0.0, "field point needs rho >= 0");
    if (opts.piston_edge_integral && pt.z > 0.0 && is_uniform(profile)) {
        return piston_field(profile.radius_a, profile.v.front(), medium, f, pt, opts.rel_tol);
    }
    if (opts.far_field_switch && pt.z > 0.0 &&
        std::hypot(pt.rho, pt.z) > far_field_range(profile.radius_a, medium, f)) {
        return far_field_pressure(profile, medium, f, pt, opts);
    }
    if (pt.z == 0.0 && pt.rho > 0.0) {
        throw DomainError("off-axis points on the source plane are not supported");
    }
    return general_pressure(profile, medium, f, pt, opts);
}

cplx axial_piston_pressure(const PistonSpec& spec, const Medium& medium, double f, double z) {
    detail::require(z >= 0.0, "axial distance must be non-negative");
    detail::require(f > 0.0, "frequency must be positive");
    const double k = 2.0 * kPi * f / medium.sound_speed;
    const double alpha = kernel_attenuation(medium, f);
    const cplx i(0.0, 1.0);
    const double edge = std::sqrt(z * z + spec.radius_a * spec.radius_a);
    return medium.density * medium.sound_speed * spec.normal_velocity *
           (std::exp(-i * k * z) - std::exp(-i * k * edge)) * std::exp(-alpha * z);
}

FieldCurve propagation_curve(const SourceProfile& profile, const Medium& medium, double f,
                             const std::vector<double>& z_grid, const RayleighOptions& opts) {
    detail::require(!z_grid.empty(), "z grid must not be empty");
    for (std::size_t i = 0; i < z_grid.size(); ++i) {
        detail::require(z_grid[i] > 0.0, "z grid must be positive");
        detail::require(i == 0 || z_grid[i] > z_grid[i - 1], "z grid must be increasing");
    }
    FieldCurve c{z_grid, std::vector<cplx>(z_grid.size()), f};
    parallel_for(z_grid.size(), [&](std::size_t i) {
        c.pressure[i] = rayleigh_pressure(profile, medium, f, {0.0, z_grid[i]}, opts);
    });
    return c;
}

FieldCurve beam_pattern(const SourceProfile& profile, const Medium& medium, double f, double r,
                        const std::vector<double>& theta_deg, const RayleighOptions& opts) {
    detail::require(r > 0.0, "beam pattern range must be positive");
    detail::require(!theta_deg.empty(), "angle grid must not be empty");
    for (std::size_t i = 0; i < theta_deg.size(); ++i) {
        detail::require(std::abs(theta_deg[i]) < 90.0, "angles must lie in (-90, 90) degrees");
        detail::require(i == 0 || theta_deg[i] > theta_deg[i - 1], "angle grid must be increasing");
    }
    FieldCurve c{theta_deg, std::vector<cplx>(theta_deg.size()), f};
    parallel_for(theta_deg.size(), [&](std::size_t i) {
        const double t = std::abs(theta_deg[i]) * kPi / 180.0;
        c.pressure[i] = rayleigh_pressure(profile, medium, f, {r * std::sin(t), r * std::cos(t)}, opts);
    });
    return c;
}

double quarter_power_half_angle(const SourceProfile& profile, const Medium& medium, double f,
                                double r, const RayleighOptions& opts) {
    detail::require(r > 0.0, "range must be positive");
    const double axis = std::abs(rayleigh_pressure(profile, medium, f, {0.0, r}, opts));
    auto drop = [&](double deg) {
        const double t = deg * kPi / 180.0;
        const cplx p = rayleigh_pressure(profile, medium, f, {r * std::sin(t), r * std::cos(t)}, opts);
        return 20.0 * std::log10(std::abs(p) / axis) + 6.0;
    };
    double lo = 0.0;
    const double step = 0.05;
    for (double hi = step; hi < 89.0; hi += step) {
        if (drop(hi) < 0.0) {
            for (int it = 0; it < 40; ++it) {
                const double mid = 0.5 * (lo + hi);
                (drop(mid) < 0.0 ? hi : lo) = mid;
            }
            return 0.5 * (lo + hi);
        }
        lo = hi;
    }
    throw NumericalError("beam never drops 6 dB below the axis");
}

cplx piston_radiation_impedance(double radius_a, double f, const Medium& medium) {
    detail::require(radius_a > 0.0 && f > 0.0, "impedance needs positive radius and frequency");
    const double two_ka = 2.0 * (2.0 * kPi * f / medium.sound_speed) * radius_a;
    const double area = kPi * radius_a * radius_a;
    return medium.density * medium.sound_speed * area *
           cplx(piston_resistance(two_ka), piston_reactance(two_ka));
}

double EquivalenceRatio::factor() const { return std::pow(10.0, er_db / 20.0); }

EquivalenceRatio equivalence_ratio(const SourceProfile& profile, const Medium& medium, double f,
                                   double d_uc, const RayleighOptions& opts) {
    detail::require(d_uc > 0.0, "critical distance must be positive");
    const cplx v0 = profile.center_velocity();
    detail::require(v0 != 0.0, "profile centre velocity must be non-zero");
    const SourceProfile ref = piston_profile({profile.radius_a, v0}, 2);
    const cplx p_sp = rayleigh_pressure(profile, medium, f, {0.0, d_uc}, opts);
    const cplx p_rp = rayleigh_pressure(ref, medium, f, {0.0, d_uc}, opts);
    return {spl_db(p_sp) - spl_db(p_rp), f, d_uc};
}

}  // namespace sppal
