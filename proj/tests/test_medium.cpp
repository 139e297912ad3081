#include "doctest.h"

#include <cmath>

#include "sppal/errors.hpp"
#include "sppal/medium.hpp"

using namespace sppal;

// Reference values below were produced by a separate implementation of the
// ISO 9613-1 formulas and frozen here.
TEST_CASE("standard air state") {
    const Medium m = build_medium(20.0, 0.70, 101.325);
    CHECK(m.sound_speed == doctest::Approx(343.2146).epsilon(1e-6));
    CHECK(m.density == doctest::Approx(101325.0 / (287.05 * 293.15)).epsilon(1e-12));
    CHECK(m.beta == 1.2);
    CHECK(m.absorbing);
}

TEST_CASE("sound speed at the reference temperature") {
    CHECK(build_medium(0.0, 0.70, 101.325).sound_speed == doctest::Approx(331.3).epsilon(1e-14));
}

TEST_CASE("state bounds") {
    CHECK_THROWS_AS(build_medium(20.0, 1.5, 101.325), DomainError);
    CHECK_THROWS_AS(build_medium(20.0, -0.1, 101.325), DomainError);
    CHECK_THROWS_AS(build_medium(-25.0, 0.5, 101.325), DomainError);
    CHECK_THROWS_AS(build_medium(55.0, 0.5, 101.325), DomainError);
    CHECK_THROWS_AS(build_medium(20.0, 0.5, 0.0), DomainError);
    CHECK_THROWS_AS(build_medium(20.0, 0.5, 250.0), DomainError);
    CHECK_NOTHROW(build_medium(20.0, 0.5, 200.0));
}

TEST_CASE("absorption matches the reference implementation") {
    const Medium m = standard_air();
    CHECK(absorption_coeff(m, 60e3) == doctest::Approx(2.4970898838e-01).epsilon(1e-4));
    CHECK(absorption_coeff(m, 40e3) == doctest::Approx(1.4800514444e-01).epsilon(1e-4));
    CHECK(absorption_coeff(m, 90e3) == doctest::Approx(3.9167724695e-01).epsilon(1e-4));
    CHECK(absorption_coeff(m, 1e3) == doctest::Approx(5.7308437108e-04).epsilon(1e-4));
    const Medium cold = build_medium(0.0, 0.5, 90.0);
    CHECK(absorption_coeff(cold, 60e3) == doctest::Approx(9.6978391008e-02).epsilon(1e-4));
}

TEST_CASE("absorption ordering and sign") {
    const Medium m = standard_air();
    CHECK(absorption_coeff(m, 90e3) > absorption_coeff(m, 40e3));
    for (double f = 10.0; f < 3e5; f *= 1.37) CHECK(absorption_coeff(m, f) >= 0.0);
    CHECK_THROWS_AS(absorption_coeff(m, 0.0), DomainError);
    CHECK_THROWS_AS(absorption_coeff(m, -5.0), DomainError);
}

TEST_CASE("property: dB and neper views agree") {
    for (double t : {-20.0, 0.0, 20.0, 45.0}) {
        for (double rh : {0.0, 0.3, 0.7, 1.0}) {
            const Medium m = build_medium(t, rh, 95.0);
            for (double f = 500.0; f < 2e5; f *= 2.3) {
                CHECK(absorption_db_per_m(m, f) == doctest::Approx(8.686 * absorption_coeff(m, f)).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("property: absorption is continuous in frequency") {
    const Medium m = standard_air();
    // A 1 Hz step may differ from the local centred slope by no more than 1e-6 Np/m.
    double worst = 0.0;
    for (double f = 1e3; f < 2e5; f += 997.0) {
        const double step = absorption_coeff(m, f + 1.0) - absorption_coeff(m, f);
        const double slope = 0.5 * (absorption_coeff(m, f + 2.0) - absorption_coeff(m, f - 1.0)) / 1.5;
        worst = std::max(worst, std::abs(step - slope));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("lossless copy switches off kernel attenuation") {
    const Medium m = lossless(standard_air());
    CHECK(kernel_attenuation(m, 60e3) == 0.0);
    CHECK(absorption_coeff(m, 60e3) > 0.0);
    const cplx g = propagation_constant(standard_air(), 60e3);
    CHECK(g.real() == doctest::Approx(absorption_coeff(standard_air(), 60e3)));
    CHECK(g.imag() == doctest::Approx(2.0 * M_PI * 60e3 / standard_air().sound_speed));
}
