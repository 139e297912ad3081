#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "sppal/errors.hpp"
#include "sppal/nlfield.hpp"
#include "support/brute_force_audio.hpp"

using namespace sppal;

namespace {

// Small aperture, short volume: cheap enough for property sweeps.
const double kDeskA = 0.02;
const double kDeskF2 = 40e3;
const double kDeskFa = 1e3;

PrimaryPair desk_pair(cplx v1 = 0.1, cplx v2 = 0.1) {
    return make_primary_pair(kDeskF2 - kDeskFa, kDeskF2, piston_profile({kDeskA, v1}),
                             piston_profile({kDeskA, v2}));
}

VolumeGridOptions short_volume() {
    VolumeGridOptions o;
    o.z_max = 0.1;
    o.r_max = 0.03;
    return o;
}

std::vector<double> linspace(double lo, double hi, double step) {
    std::vector<double> out;
    for (int i = 0; lo + i * step <= hi + 1e-12; ++i) out.push_back(lo + i * step);
    return out;
}

FieldCurve quadratic_curve(double peak_z) {
    FieldCurve c;
    for (double z : linspace(0.1, 1.0, 0.07)) {
        c.abscissa.push_back(z);
        const double level_db = 60.0 - 40.0 * (z - peak_z) * (z - peak_z);
        c.pressure.push_back(std::sqrt(2.0) * 20e-6 * std::pow(10.0, level_db / 20.0));
    }
    return c;
}

}  // namespace

TEST_CASE("lower-sideband pair") {
    const auto [f1, f2] = lsb_am_pair(60e3, 1e3);
    CHECK(f1 == 59e3);
    CHECK(f2 == 60e3);
    CHECK(lsb_am_pair(40e3, 777.0).second - lsb_am_pair(40e3, 777.0).first == doctest::Approx(777.0));
    CHECK_THROWS_AS(lsb_am_pair(60e3, 0.0), DomainError);
    CHECK_THROWS_AS(lsb_am_pair(60e3, 60e3), DomainError);
    CHECK_THROWS_AS(make_primary_pair(60e3, 59e3, piston_profile({kDeskA, 0.1}), piston_profile({kDeskA, 0.1})),
                    DomainError);
    CHECK_THROWS_AS(make_primary_pair(59e3, 60e3, piston_profile({kDeskA, 0.1}), piston_profile({0.03, 0.1})),
                    DomainError);
}

TEST_CASE("volume grid weights and extent") {
    const Medium air = standard_air();
    const VolumeGrid g = make_volume_grid(desk_pair(), air, short_volume());
    CHECK(g.z_max == doctest::Approx(0.1));
    CHECK(g.start.size() == g.z.size() + 1);
    double volume = 0.0;
    for (std::size_t i = 0; i < g.z.size(); ++i) {
        CHECK(g.z_weight[i] > 0.0);
        CHECK(g.z[i] > 0.0);
        CHECK(g.z[i] < g.z_max);
        for (std::size_t n = g.start[i]; n < g.start[i + 1]; ++n) {
            CHECK(g.r_weight[n] > 0.0);
            CHECK(g.r[n] < 0.03);
            volume += 2.0 * std::numbers::pi * g.z_weight[i] * g.r_weight[n];
        }
    }
    CHECK(volume == doctest::Approx(std::numbers::pi * 0.03 * 0.03 * 0.1).epsilon(1e-12));

    const VolumeGrid full = make_volume_grid(desk_pair(), air);
    const double z1 = first_local_max(kDeskA, kDeskF2, air);
    CHECK(full.z_max > 2.0 * z1);
    CHECK(full.truncation_db == 60.0);
}

TEST_CASE("zero primary velocity gives zero audio") {
    const Medium air = standard_air();
    for (const auto& pair : {desk_pair(0.0, 0.1), desk_pair(0.1, 0.0)}) {
        const VolumeGrid g = make_volume_grid(pair, air, short_volume());
        const VirtualSource s = build_virtual_source(pair, air, g);
        CHECK(std::abs(quasilinear_pressure(s, air, {0.0, 0.3}).pressure) == 0.0);
        CHECK(std::abs(quasilinear_pressure(s, air, {0.05, 0.3}).pressure) == 0.0);
    }
}

TEST_CASE("bilinear in the primary velocities") {
    const Medium air = standard_air();
    const PrimaryPair base = desk_pair();
    const VolumeGrid g = make_volume_grid(base, air, short_volume());
    const cplx ref_axis = quasilinear_pressure(base, air, {0.0, 0.3}, g).pressure;
    const cplx ref_off = quasilinear_pressure(base, air, {0.04, 0.25}, g).pressure;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 5; ++trial) {
        const cplx s1(u(rng), u(rng)), s2(u(rng), u(rng));
        const PrimaryPair p = desk_pair(0.1 * s1, 0.1 * s2);
        const VirtualSource src = build_virtual_source(p, air, g);
        // The difference tone carries the sideband's conjugate.
        const cplx expect_axis = std::conj(s1) * s2 * ref_axis;
        const cplx expect_off = std::conj(s1) * s2 * ref_off;
        CHECK(std::abs(quasilinear_pressure(src, air, {0.0, 0.3}).pressure - expect_axis) <
              1e-9 * std::abs(expect_axis));
        CHECK(std::abs(quasilinear_pressure(src, air, {0.04, 0.25}).pressure - expect_off) <
              1e-9 * std::abs(expect_off));
    }
}

TEST_CASE("doubling both velocities adds 12 dB to the curve") {
    const Medium air = standard_air();
    const std::vector<double> z = linspace(0.15, 0.5, 0.05);
    const AudioCurve one = audio_propagation_curve(desk_pair(0.1, 0.1), air, z, short_volume());
    const AudioCurve two = audio_propagation_curve(desk_pair(0.2, 0.2), air, z, short_volume());
    const auto a = one.curve.spl_db(), b = two.curve.spl_db();
    for (std::size_t i = 0; i < z.size(); ++i) CHECK(b[i] - a[i] == doctest::Approx(20.0 * std::log10(4.0)).epsilon(1e-10));
}

TEST_CASE("small lossless volume matches a point source") {
    const Medium still = lossless(standard_air());
    const PrimaryPair pair = desk_pair();
    VolumeGridOptions o;
    o.z_max = 2e-4;
    o.r_max = 2e-4;
    const VolumeGrid g = make_volume_grid(pair, still, o);
    const cplx p1 = rayleigh_pressure(pair.profile_1, still, pair.f_u1, {0.0, 1e-4});
    const cplx p2 = rayleigh_pressure(pair.profile_2, still, pair.f_u2, {0.0, 1e-4});
    const double w = 2.0 * std::numbers::pi * kDeskFa;
    const double c = still.sound_speed;
    const double strength = -still.beta * w * w / (still.density * c * c * c * c);
    const double volume = std::numbers::pi * o.r_max * o.r_max * o.z_max;
    const double k = w / c;
    for (const FieldPoint pt : {FieldPoint{0.0, 1.0}, FieldPoint{0.3, 0.8}}) {
        const double r = std::hypot(pt.rho, pt.z - 1e-4);
        const cplx expect = strength * p2 * std::conj(p1) * volume * std::exp(cplx(0.0, -k * r)) /
                            (4.0 * std::numbers::pi * r);
        const cplx got = quasilinear_pressure(pair, still, pt, g).pressure;
        CHECK(std::abs(got - expect) < 0.02 * std::abs(expect));
    }
}

TEST_CASE("axisymmetric path matches Cartesian brute force") {
    const Medium air = standard_air();
    const PrimaryPair pair = desk_pair();
    const std::vector<FieldPoint> probes{{0.0, 0.15}, {0.0, 0.25}, {0.0, 0.4}, {0.05, 0.2}, {0.1, 0.3}};
    const VirtualSource src = build_virtual_source(pair, air, make_volume_grid(pair, air, short_volume()));
    const auto brute = oracle::brute_force_audio(pair, air, {0.03, 0.1, 0.0015}, probes);
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const cplx fast = quasilinear_pressure(src, air, probes[i]).pressure;
        CHECK(std::abs(spl_db(fast) - spl_db(brute[i])) < 0.5);
    }
}

TEST_CASE("halving every grid step moves the audio peak level by under 0.2 dB") {
    const Medium air = standard_air();
    const std::vector<double> z = linspace(0.02, 0.6, 0.01);
    VolumeGridOptions fine;
    fine.refine = 0.5;
    const AudioCd coarse = find_audio_cd(audio_propagation_curve(desk_pair(), air, z).curve);
    const AudioCd refined = find_audio_cd(audio_propagation_curve(desk_pair(), air, z, fine).curve);
    CHECK_FALSE(coarse.boundary_warning);
    CHECK(std::abs(coarse.spl - refined.spl) < 0.2);
    CHECK(std::abs(coarse.distance - refined.distance) < 0.01);
}

TEST_CASE("audio critical distance from a synthetic curve") {
    const AudioCd cd = find_audio_cd(quadratic_curve(0.45));
    CHECK(cd.distance == doctest::Approx(0.45).epsilon(1e-3 / 0.45));
    CHECK(cd.spl == doctest::Approx(60.0).epsilon(1e-9));
    CHECK_FALSE(cd.boundary_warning);

    FieldCurve rising;
    for (double z : linspace(0.1, 1.0, 0.1)) {
        rising.abscissa.push_back(z);
        rising.pressure.push_back(z);
    }
    const AudioCd edge = find_audio_cd(rising);
    CHECK(edge.boundary_warning);
    CHECK(edge.distance == doctest::Approx(1.0));

    FieldCurve flat{{0.1, 0.2, 0.3, 0.4}, {1.0, 2.0, 2.0, 1.0}, 1e3};
    CHECK(find_audio_cd(flat).distance <= 0.25 + 1e-9);
    CHECK_THROWS_AS(find_audio_cd(FieldCurve{}), DomainError);
}

TEST_CASE("piston critical distances at a 50 mm aperture") {
    const Medium air = standard_air();
    const std::vector<double> z = linspace(0.1, 3.0, 0.05);
    const auto run = [&](double radius, double f2) {
        const SourceProfile p = piston_profile({radius, 0.1});
        return audio_propagation_curve(make_primary_pair(f2 - 1e3, f2, p, p), air, z);
    };
    const AudioCd at40 = find_audio_cd(run(0.05, 40e3).curve);
    const AudioCurve c60 = run(0.05, 60e3);
    const AudioCd at60 = find_audio_cd(c60.curve);
    CHECK(at40.distance == doctest::Approx(0.4).epsilon(0.2));
    CHECK(at60.distance == doctest::Approx(0.5).epsilon(0.2));
    CHECK(at60.distance > at40.distance);
    CHECK_FALSE(c60.truncation_warning());

    // Single maximum inside [0.2, 1.5] m and a monotone tail beyond twice the critical distance.
    const AudioCurve design = run(aperture_for_cd(0.45, 60e3, air), 60e3);
    const auto spl = design.curve.spl_db();
    const std::size_t peak = static_cast<std::size_t>(std::max_element(spl.begin(), spl.end()) - spl.begin());
    CHECK(z[peak] > 0.2);
    CHECK(z[peak] < 1.5);
    for (std::size_t i = 1; i < spl.size(); ++i) {
        if (i <= peak) CHECK(spl[i] > spl[i - 1]);
        else CHECK(spl[i] < spl[i - 1]);
    }
}

TEST_CASE("audio beam is symmetric and narrower than a plain radiator") {
    const Medium air = standard_air();
    const std::vector<double> theta{-30.0, -10.0, 0.0, 10.0, 30.0};
    const AudioCurve zero = audio_beam_pattern(desk_pair(0.0, 0.1), air, 1.0, theta);
    for (const cplx& p : zero.curve.pressure) CHECK(std::abs(p) == 0.0);

    const AudioCurve beam = audio_beam_pattern(desk_pair(), air, 1.0, theta);
    const auto db = beam.curve.normalized_db();
    CHECK(db[0] == doctest::Approx(db[4]).epsilon(1e-12));
    CHECK(db[1] == doctest::Approx(db[3]).epsilon(1e-12));
    CHECK(db[2] == doctest::Approx(0.0));
    CHECK(db[4] < -6.0);

    const FieldCurve plain = beam_pattern(piston_profile({kDeskA, 0.1}), air, kDeskFa, 1.0, theta);
    CHECK(plain.normalized_db()[4] > -1.0);
    CHECK_THROWS_AS(audio_beam_pattern(desk_pair(), air, 0.0, theta), DomainError);
}

TEST_CASE("collimated far-field estimate") {
    const Medium air = standard_air();
    const BerktaySpec spec{0.0508, 60e3, 0.1, 0.1};
    const double p1k = berktay_farfield(spec, air, 1e3, 4.0);
    const double p2k = berktay_farfield(spec, air, 2e3, 4.0);
    // Absorption of the sideband shifts slightly with f_a; the f_a^2 law dominates.
    CHECK(20.0 * std::log10(p2k / p1k) == doctest::Approx(12.04).epsilon(0.01));
    const BerktaySpec louder{0.0508, 60e3, 0.3, 0.2};
    CHECK(berktay_farfield(louder, air, 1e3, 4.0) == doctest::Approx(6.0 * p1k).epsilon(1e-12));
    CHECK(berktay_farfield(spec, air, 1e3, 8.0) == doctest::Approx(0.5 * p1k).epsilon(1e-12));
    CHECK_THROWS_AS(berktay_farfield(spec, air, 1e3, 1.0), DomainError);
    const auto many = berktay_farfield(spec, air, std::vector<double>{500.0, 1e3}, 4.0);
    REQUIRE(many.size() == 2);
    CHECK(many[1] == doctest::Approx(p1k));
}
