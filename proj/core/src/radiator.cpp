#include "sppal/radiator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include <boost/math/tools/roots.hpp>

#include "sppal/errors.hpp"
#include "sppal/special.hpp"

namespace sppal {
namespace {

double refine_root(const std::function<double(double)>& f, double lo, double hi) {
    boost::uintmax_t iters = 200;
    auto tol = boost::math::tools::eps_tolerance<double>(52);
    auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, tol, iters);
    return 0.5 * (a + b);
}

double characteristic(Boundary boundary, double poisson, double q) {
    const double j0 = bessel_j0(q), j1 = bessel_j1(q);
    const double i0 = bessel_i0(q), i1 = bessel_i1(q);
    const double base = j0 * i1 + j1 * i0;
    if (boundary == Boundary::Clamped) return base;
    return base - 2.0 * (1.0 - poisson) * j1 * i1 / q;
}

void check_plate(const PlateSpec& s) {
    detail::require(s.radius_a > 0.0, "plate radius must be positive");
    detail::require(s.thickness > 0.0 && s.thickness < s.radius_a / 5.0,
                    "plate thickness must lie in (0, a/5)");
    detail::require(s.mode_m >= 1, "mode_m must be at least 1");
    detail::require(s.poisson > 0.0 && s.poisson < 0.5, "Poisson ratio must lie in (0, 0.5)");
    detail::require(s.youngs > 0.0 && s.density > 0.0, "plate material must be positive");
    detail::require(s.loss_factor >= 0.0, "loss factor must be non-negative");
}

}  // namespace

Material aluminum() { return {"aluminum", 2700.0, 70e9, 0.33, 0.001}; }
Material stainless_steel() { return {"stainless_steel", 8000.0, 193e9, 0.29, 0.001}; }
Material pzt_ceramic() { return {"pzt", 7500.0, 1.0 / 12.3e-12, 0.31, 0.01}; }

Material material_by_name(const std::string& name) {
    if (name == "aluminum") return aluminum();
    if (name == "stainless_steel") return stainless_steel();
    if (name == "pzt") return pzt_ceramic();
    throw DomainError("unknown material '" + name + "'");
}

double ModeShape::value(double radius) const {
    const double x = eigenvalue * radius / radius_a;
    return (bessel_j0(x) + coupling * bessel_i0(x)) / (1.0 + coupling);
}

cplx SourceProfile::velocity_at(double radius) const {
    if (radius <= r.front()) return v.front();
    if (radius >= r.back()) return v.back();
    const auto it = std::upper_bound(r.begin(), r.end(), radius);
    const std::size_t j = static_cast<std::size_t>(it - r.begin());
    const double t = (radius - r[j - 1]) / (r[j] - r[j - 1]);
    return v[j - 1] + t * (v[j] - v[j - 1]);
}

SourceProfile make_profile(double radius_a, SourceKind kind, std::vector<double> r,
                           std::vector<cplx> v) {
    detail::require(radius_a > 0.0, "source radius must be positive");
    detail::require(r.size() >= 2 && r.size() == v.size(), "profile needs matching grids of >= 2 points");
    detail::require(r.front() == 0.0 && std::abs(r.back() - radius_a) <= 1e-12 * radius_a,
                    "profile grid must span [0, a]");
    for (std::size_t i = 1; i < r.size(); ++i)
        detail::require(r[i] > r[i - 1], "profile grid must be strictly increasing");
    if (kind == SourceKind::Piston) {
        for (const cplx& x : v) detail::require(x == v.front(), "piston profile must be uniform");
    }
    r.back() = radius_a;
    return {radius_a, kind, std::move(r), std::move(v)};
}

SourceProfile scaled(const SourceProfile& p, cplx factor) {
    SourceProfile out = p;
    for (cplx& x : out.v) x *= factor;
    return out;
}

SourceProfile piston_profile(const PistonSpec& spec, int n_samples) {
    detail::require(n_samples >= 2, "piston profile needs at least 2 samples");
    std::vector<double> r(n_samples);
    for (int i = 0; i < n_samples; ++i) r[i] = spec.radius_a * i / (n_samples - 1);
    return make_profile(spec.radius_a, SourceKind::Piston, std::move(r),
                        std::vector<cplx>(n_samples, spec.normal_velocity));
}

double plate_eigenvalue(Boundary boundary, double poisson, int mode_m) {
    detail::require(mode_m >= 1, "mode_m must be at least 1");
    // The clamped fundamental has no interior nodal circle, so m circles is root m + 1.
    const int wanted = boundary == Boundary::Free ? mode_m : mode_m + 1;
    auto f = [&](double q) { return characteristic(boundary, poisson, q); };
    const double step = 0.01;
    double lo = 0.5, f_lo = f(lo);
    int found = 0;
    for (double hi = lo + step; hi < 400.0; hi += step) {
        const double f_hi = f(hi);
        if ((f_lo < 0.0) != (f_hi < 0.0)) {
            if (++found == wanted) return refine_root(f, lo, hi);
        }
        lo = hi;
        f_lo = f_hi;
    }
    throw NumericalError("plate eigenvalue for mode " + std::to_string(mode_m) +
                         " not bracketed below q = 400");
}

double plate_natural_frequency(const PlateSpec& spec) {
    check_plate(spec);
    const double q = plate_eigenvalue(spec.boundary, spec.poisson, spec.mode_m);
    const double h = spec.thickness;
    const double d = spec.youngs * h * h * h / (12.0 * (1.0 - spec.poisson * spec.poisson));
    const double omega = q * q / (spec.radius_a * spec.radius_a) * std::sqrt(d / (spec.density * h));
    return omega / (2.0 * std::numbers::pi);
}

ModeShape plate_mode_shape(const PlateSpec& spec, int n_samples) {
    check_plate(spec);
    detail::require(n_samples >= 16, "mode shape needs at least 16 samples");
    ModeShape m;
    m.radius_a = spec.radius_a;
    m.eigenvalue = plate_eigenvalue(spec.boundary, spec.poisson, spec.mode_m);
    const double q = m.eigenvalue;
    m.coupling = spec.boundary == Boundary::Free ? -bessel_j1(q) / bessel_i1(q)
                                                 : -bessel_j0(q) / bessel_i0(q);
    m.natural_frequency = plate_natural_frequency(spec);

    // Nodal radii: sign changes on a fine scan, refined.
    auto w = [&m](double r) { return m.value(r); };
    const int scan = 64 * (spec.mode_m + 2);
    double lo = 0.0, w_lo = w(0.0);
    for (int i = 1; i <= scan; ++i) {
        const double hi = spec.radius_a * i / scan * (1.0 - 1e-4);  // a clamped rim is not interior
        const double w_hi = w(hi);
        if (w_hi == 0.0 && i < scan) {
            m.nodal_radii.push_back(hi);
        } else if ((w_lo < 0.0) != (w_hi < 0.0) && w_lo != 0.0) {
            m.nodal_radii.push_back(refine_root(w, lo, hi));
        }
        lo = hi;
        w_lo = w_hi;
    }
    if (static_cast<int>(m.nodal_radii.size()) != spec.mode_m) {
        throw NumericalError("mode " + std::to_string(spec.mode_m) + " has " +
                             std::to_string(m.nodal_radii.size()) + " sign changes");
    }

    std::vector<double> grid(n_samples);
    for (int i = 0; i < n_samples; ++i) grid[i] = spec.radius_a * i / (n_samples - 1);
    grid.insert(grid.end(), m.nodal_radii.begin(), m.nodal_radii.end());
    std::sort(grid.begin(), grid.end());
    const double tiny = 1e-9 * spec.radius_a;
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [tiny](double a, double b) { return std::abs(a - b) < tiny; }),
               grid.end());
    m.r = grid;
    m.w.reserve(grid.size());
    for (double r : grid) m.w.push_back(w(r));
    m.w.front() = 1.0;
    for (std::size_t i = 0; i < m.r.size(); ++i) {
        if (std::find(m.nodal_radii.begin(), m.nodal_radii.end(), m.r[i]) != m.nodal_radii.end())
            m.w[i] = 0.0;
    }
    return m;
}

PlateSpec size_plate_for(double f_u0, double d_uc, int mode_m, const Material& material,
                         const Medium& medium, Boundary boundary) {
    detail::require(f_u0 > 0.0 && d_uc > 0.0, "sizing needs positive frequency and distance");
    PlateSpec s;
    s.radius_a = aperture_for_cd(d_uc, f_u0, medium);
    s.youngs = material.youngs;
    s.poisson = material.poisson;
    s.density = material.density;
    s.loss_factor = material.loss_factor;
    s.mode_m = mode_m;
    s.boundary = boundary;
    // Thin-plate frequency is proportional to thickness, so one evaluation fixes it.
    s.thickness = s.radius_a / 1000.0;
    const double f_ref = plate_natural_frequency(s);
    const double h = s.thickness * f_u0 / f_ref;
    if (!(h > 0.0 && h < s.radius_a / 5.0)) {
        throw InfeasibleDesign("no thin-plate thickness gives mode " + std::to_string(mode_m) +
                               " at " + std::to_string(f_u0) + " Hz (needs h = " +
                               std::to_string(h) + " m)");
    }
    s.thickness = h;
    return s;
}

SourceProfile stepped_profile(const ModeShape& mode, cplx center_velocity, StepPolicy policy,
                              const std::vector<double>& grid) {
    const std::vector<double>& r = grid.empty() ? mode.r : grid;
    const int m = static_cast<int>(mode.nodal_radii.size());
    std::vector<cplx> v;
    v.reserve(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double x = r[i];
        const auto zone = static_cast<int>(
            std::upper_bound(mode.nodal_radii.begin(), mode.nodal_radii.end(), x) -
            mode.nodal_radii.begin());
        bool stepped = false;
        if (policy != StepPolicy::None && zone % 2 == 1) {
            stepped = !(policy == StepPolicy::Practical && m % 2 == 1 && zone == m);
        }
        const double w = grid.empty() ? mode.w[i] : mode.value(x);
        v.push_back(center_velocity * (stepped ? -w : w));
    }
    const SourceKind kind = policy == StepPolicy::None ? SourceKind::FlatPlate : SourceKind::SteppedPlate;
    return make_profile(mode.radius_a, kind, r, std::move(v));
}

std::vector<double> radial_grid(double radius_a, double f, const Medium& medium,
                                const std::vector<double>& breakpoints) {
    detail::require(radius_a > 0.0, "grid radius must be positive");
    const double lambda = wavelength(medium, f);
    const int n = std::max(64, static_cast<int>(std::ceil(16.0 * radius_a / lambda)) + 1);
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = radius_a * i / (n - 1);
    for (double b : breakpoints)
        if (b > 0.0 && b < radius_a) g.push_back(b);
    std::sort(g.begin(), g.end());
    const double tiny = 1e-9 * radius_a;
    g.erase(std::unique(g.begin(), g.end(), [tiny](double a, double b) { return std::abs(a - b) < tiny; }),
            g.end());
    g.back() = radius_a;
    return g;
}

double first_local_max(double radius_a, double f, const Medium& medium) {
    const double lambda = wavelength(medium, f);
    if (!(radius_a > lambda / 2.0)) {
        throw InfeasibleDesign("aperture " + std::to_string(radius_a) +
                               " m is not larger than half a wavelength");
    }
    return radius_a * radius_a / lambda - lambda / 4.0;
}

double aperture_for_cd(double d_uc, double f, const Medium& medium) {
    detail::require(d_uc > 0.0 && f > 0.0, "aperture needs positive distance and frequency");
    const double lambda = wavelength(medium, f);
    return std::sqrt((d_uc + lambda / 4.0) * lambda);
}

}  // namespace sppal
