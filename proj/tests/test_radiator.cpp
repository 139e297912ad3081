#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "sppal/errors.hpp"
#include "sppal/linfield.hpp"
#include "sppal/radiator.hpp"
#include "sppal/special.hpp"

using namespace sppal;

namespace {

// Free-edge boundary determinant assembled from moment and shear rows (unit radius).
double free_edge_determinant(double q, double nu) {
    const double j0 = bessel_j0(q), j1 = bessel_j1(q), i0 = bessel_i0(q), i1 = bessel_i1(q);
    const double m_j = -q * q * j0 + (1.0 - nu) * q * j1;
    const double m_i = q * q * i0 - (1.0 - nu) * q * i1;
    const double v_j = q * q * q * j1;
    const double v_i = q * q * q * i1;
    return (m_j * v_i - m_i * v_j) / std::pow(q, 5) / (i0 * i1);
}

// m-th sign change of the determinant on a uniform scan, then plain bisection.
double scanned_root(double nu, int m) {
    const double step = 1e-3;
    double lo = 0.5, f_lo = free_edge_determinant(lo, nu);
    int found = 0;
    for (double hi = lo + step; hi < 40.0; hi += step) {
        const double f_hi = free_edge_determinant(hi, nu);
        if ((f_lo < 0) != (f_hi < 0) && ++found == m) {
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double f_mid = free_edge_determinant(mid, nu);
                if ((f_mid < 0) == (f_lo < 0)) lo = mid, f_lo = f_mid;
                else hi = mid;
            }
            return 0.5 * (lo + hi);
        }
        lo = hi;
        f_lo = f_hi;
    }
    return -1.0;
}

PlateSpec aluminum_plate(int m, double h = 1e-3) {
    const Material al = aluminum();
    return {0.0508, h, al.youngs, al.poisson, al.density, m, al.loss_factor, Boundary::Free};
}

int sign_changes(const ModeShape& s) {
    int n = 0;
    double last = s.w.front();
    for (double w : s.w) {
        if (w == 0.0) continue;
        if ((w < 0) != (last < 0)) ++n;
        last = w;
    }
    return n;
}

}  // namespace

TEST_CASE("piston profile") {
    const SourceProfile p = piston_profile({0.05, 0.1}, 64);
    CHECK(p.r.size() == 64);
    for (const cplx& v : p.v) CHECK(v == cplx(0.1, 0.0));
    const SourceProfile q = piston_profile({0.05, cplx(0.0, 0.1)}, 64);
    for (const cplx& v : q.v) CHECK(v == cplx(0.0, 0.1));
    CHECK(p.kind == SourceKind::Piston);
    CHECK_THROWS_AS(piston_profile({0.05, 0.1}, 1), DomainError);
}

TEST_CASE("free plate eigenvalues against a determinant scan") {
    for (double nu : {0.30, 0.33}) {
        for (int m = 1; m <= 8; ++m) {
            const double q = plate_eigenvalue(Boundary::Free, nu, m);
            CHECK(q == doctest::Approx(scanned_root(nu, m)).epsilon(1e-7));
        }
    }
    // The commonly tabulated 9.003 belongs to nu = 0.30.
    CHECK(std::pow(plate_eigenvalue(Boundary::Free, 0.30, 1), 2) == doctest::Approx(9.003).epsilon(1e-4));
    CHECK(std::pow(plate_eigenvalue(Boundary::Free, 0.33, 1), 2) == doctest::Approx(9.0688986618).epsilon(1e-9));
    CHECK(std::pow(plate_eigenvalue(Boundary::Free, 0.33, 8), 2) == doctest::Approx(630.5925151816).epsilon(1e-9));
}

TEST_CASE("clamped plate eigenvalues") {
    CHECK(std::pow(plate_eigenvalue(Boundary::Clamped, 0.3, 1), 2) == doctest::Approx(39.7711482365).epsilon(1e-9));
    CHECK(std::pow(plate_eigenvalue(Boundary::Clamped, 0.3, 2), 2) == doctest::Approx(89.1041439740).epsilon(1e-9));
}

TEST_CASE("mode shapes have m simple nodal circles") {
    for (Boundary b : {Boundary::Free, Boundary::Clamped}) {
        for (int m = 1; m <= 9; ++m) {
            PlateSpec s = aluminum_plate(m);
            s.boundary = b;
            const ModeShape shape = plate_mode_shape(s);
            CHECK(shape.w.front() == 1.0);
            CHECK(sign_changes(shape) == m);
            REQUIRE(shape.nodal_radii.size() == static_cast<std::size_t>(m));
            for (std::size_t i = 0; i < shape.nodal_radii.size(); ++i) {
                const double r = shape.nodal_radii[i];
                CHECK(r > 0.0);
                CHECK(r < s.radius_a);
                if (i > 0) CHECK(r > shape.nodal_radii[i - 1]);
                const double d = 1e-6 * s.radius_a;
                CHECK(shape.value(r - d) * shape.value(r + d) < 0.0);
                CHECK(std::abs(shape.value(r)) < 1e-10);
            }
        }
    }
}

TEST_CASE("natural frequency scales with thickness") {
    const double f1 = plate_natural_frequency(aluminum_plate(8, 1e-3));
    const double f2 = plate_natural_frequency(aluminum_plate(8, 2e-3));
    CHECK(f2 / f1 == doctest::Approx(2.0).epsilon(1e-9));
    CHECK_THROWS_AS(plate_natural_frequency(aluminum_plate(8, 0.02)), DomainError);
}

TEST_CASE("plate sizing") {
    const Medium air = standard_air();
    const PlateSpec s = size_plate_for(60e3, 0.45, 8, aluminum(), air);
    const double c = 331.3 * std::sqrt(1.0 + 20.0 / 273.15);
    const double lambda = c / 60e3;
    CHECK(s.radius_a == doctest::Approx(std::sqrt((0.45 + lambda / 4.0) * lambda)).epsilon(1e-12));
    CHECK(s.radius_a == doctest::Approx(0.0508).epsilon(1e-3));
    CHECK(plate_natural_frequency(s) == doctest::Approx(60e3).epsilon(1e-4));
    const PlateSpec s6 = size_plate_for(60e3, 0.45, 6, aluminum(), air);
    CHECK(s.thickness < s6.thickness);
    CHECK_THROWS_AS(size_plate_for(60e3, 0.45, 1, aluminum(), air), InfeasibleDesign);
}

TEST_CASE("stepped profile phase compensation") {
    const Medium air = standard_air();
    const cplx v0(0.03, 0.04);
    for (int m : {4, 6, 8, 10}) {
        const ModeShape mode = plate_mode_shape(size_plate_for(60e3, 0.45, m, aluminum(), air));
        const SourceProfile p = stepped_profile(mode, v0, StepPolicy::Practical);
        CHECK(p.kind == SourceKind::SteppedPlate);
        for (const cplx& v : p.v) {
            CHECK((v * std::conj(v0)).real() >= 0.0);
            if (std::abs(v) > 1e-9) CHECK(std::abs(std::arg(v) - std::arg(v0)) < 1e-12);
        }
    }
}

TEST_CASE("odd mode keeps the outermost annulus unstepped") {
    const Medium air = standard_air();
    const ModeShape mode = plate_mode_shape(size_plate_for(60e3, 0.45, 7, aluminum(), air));
    const SourceProfile p = stepped_profile(mode, 1.0, StepPolicy::Practical);
    const double outer = 0.5 * (mode.nodal_radii.back() + mode.radius_a);
    CHECK(mode.value(outer) < 0.0);
    CHECK(p.velocity_at(outer).real() < 0.0);
    const SourceProfile all = stepped_profile(mode, 1.0, StepPolicy::AllNegativeZones);
    CHECK(all.velocity_at(outer).real() > 0.0);
    // The centre zone is bare.
    CHECK(p.velocity_at(0.0) == cplx(1.0, 0.0));
}

TEST_CASE("no steps reproduces the bare mode") {
    const ModeShape mode = plate_mode_shape(aluminum_plate(5));
    const cplx v0(0.0, 0.2);
    const SourceProfile p = stepped_profile(mode, v0, StepPolicy::None);
    CHECK(p.kind == SourceKind::FlatPlate);
    for (std::size_t i = 0; i < p.r.size(); ++i) CHECK(std::abs(p.v[i] - v0 * mode.w[i]) < 1e-15);
}

TEST_CASE("first local maximum distance") {
    const Medium air = standard_air();
    const double lambda = air.sound_speed / 60e3;
    CHECK(first_local_max(0.0508, 60e3, air) == doctest::Approx(0.0508 * 0.0508 / lambda - lambda / 4).epsilon(1e-14));
    CHECK(first_local_max(0.0508, 60e3, air) == doctest::Approx(0.45).epsilon(2e-3));
    CHECK_THROWS_AS(first_local_max(0.001, 40e3, air), InfeasibleDesign);

    // Grid search on the lossless closed form.
    const Medium still = lossless(air);
    const double z1 = first_local_max(0.0508, 60e3, air);
    double best_z = 0.0, best = 0.0;
    const double step = 1e-4;
    for (double z = 0.2; z < 1.0; z += step) {
        const double p = std::abs(axial_piston_pressure({0.0508, 0.1}, still, 60e3, z));
        if (p > best) best = p, best_z = z;
    }
    CHECK(std::abs(best_z - z1) <= step);
}

TEST_CASE("aperture for critical distance") {
    const Medium air = standard_air();
    CHECK(aperture_for_cd(0.45, 60e3, air) == doctest::Approx(0.0508162).epsilon(1e-5));
    CHECK(aperture_for_cd(0.45, 40e3, air) > aperture_for_cd(0.45, 60e3, air));
    for (double d : {0.1, 0.3, 0.45, 1.7}) {
        for (double f : {20e3, 40e3, 60e3, 90e3}) {
            const double z = first_local_max(aperture_for_cd(d, f, air), f, air);
            CHECK(std::abs(z - d) <= 1e-12 * d);
        }
    }
}

TEST_CASE("radial grid density") {
    const Medium air = standard_air();
    const auto g = radial_grid(0.0508, 60e3, air, {0.01234});
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 0.0508);
    CHECK(g.size() >= static_cast<std::size_t>(16 * 0.0508 / (air.sound_speed / 60e3)));
    CHECK(std::find(g.begin(), g.end(), 0.01234) != g.end());
    CHECK(radial_grid(0.001, 1e3, air).size() == 64);
}
