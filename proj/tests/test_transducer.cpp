#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "sppal/errors.hpp"
#include "sppal/transducer.hpp"
#include "support/sandwich_oracle.hpp"

using namespace sppal;

namespace {

const double kPi = std::numbers::pi;

std::vector<double> grid(double lo, double hi, double step) {
    std::vector<double> out;
    for (int i = 0; lo + i * step <= hi + 1e-9; ++i) out.push_back(lo + i * step);
    return out;
}

double peak_frequency(const Frf& frf) {
    std::size_t best = 1;
    for (std::size_t i = 1; i + 1 < frf.freqs.size(); ++i)
        if (std::abs(frf.center_velocity[i]) > std::abs(frf.center_velocity[best])) best = i;
    const double y0 = std::abs(frf.center_velocity[best - 1]);
    const double y1 = std::abs(frf.center_velocity[best]);
    const double y2 = std::abs(frf.center_velocity[best + 1]);
    const double h = frf.freqs[best] - frf.freqs[best - 1];
    return frf.freqs[best] + 0.5 * h * (y0 - y2) / (y0 - 2.0 * y1 + y2);
}

Material lossy(Material m, double eta) {
    m.loss_factor = eta;
    return m;
}

StackGeometry full_stack_9mm() {
    StackGeometry g;
    g.config = XdcrConfig::Full;
    g.r_piezo = 9e-3;
    g.l_piezo = 8e-3;
    g.r_horn = 0.75e-3;
    g.f_design = 60e3;
    return g;
}

// Piezo material with aluminium-like elastic constants, so every segment shares one wave speed.
StackGeometry uniform_rod(XdcrConfig config) {
    StackGeometry g;
    g.config = config;
    g.f_design = 60e3;
    g.materials.back = aluminum();
    g.materials.horn = aluminum();
    g.materials.piezo.density = aluminum().density;
    g.materials.piezo.s33E = 1.0 / aluminum().youngs;
    g.materials.piezo.s11E = 1.0 / aluminum().youngs;
    g.r_piezo = 15e-3;
    g.l_piezo = 10e-3;
    g.r_horn = 15e-3;
    return g;
}

double det2(const Chain& m) { return std::abs(m[0][0] * m[1][1] - m[0][1] * m[1][0] - 1.0); }

}  // namespace

TEST_CASE("piezo constants") {
    const PiezoConstants p = default_piezo();
    CHECK(std::sqrt(p.k33_sq()) == doctest::Approx(0.70).epsilon(0.01));
    CHECK(p.v1E() == doctest::Approx(1.0 / std::sqrt(7500.0 * 12.3e-12)));
    CHECK(p.v3E() == doctest::Approx(1.0 / std::sqrt(7500.0 * 15.5e-12)));
    CHECK(p.c33D() > 1.0 / p.s33E);
}

TEST_CASE("segment matrices are reciprocal and compose") {
    const double f = 47e3;
    Segment rod{0.031, 0.01, lossy(aluminum(), 0.0), std::nullopt};
    CHECK(det2(segment_matrix(rod, f)) < 1e-10);
    Segment layer{2e-3, 9e-3, aluminum(), PiezoLayer{default_piezo(), 1.0}};
    layer.piezo->constants.loss_factor = 0.0;
    CHECK(det2(segment_matrix(layer, f)) < 1e-10);

    for (const double eta : {0.0, 0.001}) {
        Segment whole{0.05, 0.012, lossy(stainless_steel(), eta), std::nullopt};
        Segment a = whole, b = whole;
        a.length = 0.0173;
        b.length = whole.length - a.length;
        TransducerSpec split{XdcrConfig::Half, {a, b}};
        const Chain m1 = segment_matrix(whole, f);
        const Chain m2 = chain_matrix(split, f);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) CHECK(std::abs(m1[i][j] - m2[i][j]) <= 1e-10 * std::abs(m1[i][j]) + 1e-14);
    }
    CHECK_THROWS_AS(segment_matrix(Segment{0.0, 0.01, aluminum(), std::nullopt}, f), DomainError);
}

TEST_CASE("half-wave rod resonance") {
    const Material al = aluminum();
    const double c = std::sqrt(al.youngs / al.density);
    const double length = c / (2.0 * 60e3);
    TransducerSpec rod{XdcrConfig::Half, {Segment{length, 0.01, al, std::nullopt}}, 0.0, 1.0};
    const auto f = grid(55e3, 65e3, 10.0);
    const Frf frf = frf_transfer_matrix(rod, std::vector<cplx>(f.size(), 0.0), f);
    CHECK(peak_frequency(frf) == doctest::Approx(60e3).epsilon(1e-3));
}

TEST_CASE("response is linear in the drive") {
    const StackGeometry g = full_stack_9mm();
    const InitialLengths x = langevin_initial_lengths(g);
    const auto f = grid(50e3, 70e3, 250.0);
    const std::vector<cplx> load(f.size(), cplx(0.5, 2.0));
    const Frf one = frf_transfer_matrix(build_stack(g, x.x0, 10.0), load, f);
    const Frf two = frf_transfer_matrix(build_stack(g, x.x0, 20.0), load, f);
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(std::abs(two.center_velocity[i] - 2.0 * one.center_velocity[i]) <=
              1e-12 * std::abs(one.center_velocity[i]));
}

TEST_CASE("mass-loaded sandwich matches an independent root finder") {
    oracle::Sandwich s{lossy(stainless_steel(), 0.0), lossy(aluminum(), 0.0), 0.012, 0.018, 4e-3, 9e-3, default_piezo()};
    s.pz.loss_factor = 0.0;
    const double root = s.first_root(20e3, 150e3);
    REQUIRE(root > 0.0);

    TransducerSpec spec;
    spec.drive_voltage = 1.0;
    const double eta = 1e-5;
    PiezoLayer layer{s.pz, 1.0};
    layer.constants.loss_factor = eta;
    spec.segments = {Segment{s.l_back, s.radius, lossy(s.back, eta), std::nullopt},
                     Segment{s.l_layer, s.radius, aluminum(), layer},
                     Segment{s.l_front, s.radius, lossy(s.front, eta), std::nullopt}};
    const auto f = grid(root * 0.97, root * 1.03, 1.0);
    const Frf frf = frf_transfer_matrix(spec, std::vector<cplx>(f.size(), 0.0), f);
    CHECK(peak_frequency(frf) == doctest::Approx(root).epsilon(1e-3));
}

TEST_CASE("pole-zero-gain surrogates") {
    PzgParams p{1.0, 59e3, 60e3, 59.5e3, 0.02};
    CHECK(std::abs(pzg_velocity(ResponseKind::DR, p, 1e-3)) < 1e-12);
    CHECK(std::abs(pzg_velocity(ResponseKind::SR, p, 0.0)) == 0.0);

    PzgParams sharp = p;
    sharp.eta = 1e-9;
    CHECK(std::abs(pzg_velocity(ResponseKind::DR, sharp, 59.5e3)) <
          1e-6 * std::abs(pzg_velocity(ResponseKind::DR, sharp, 58e3)));

    PzgParams a = p, b = p;
    a.eta = 0.01;
    b.eta = 0.002;
    const double ratio = std::abs(pzg_velocity(ResponseKind::SR, b, 60e3)) / std::abs(pzg_velocity(ResponseKind::SR, a, 60e3));
    CHECK(ratio == doctest::Approx(5.0).epsilon(1e-3));
    const double w2 = 2.0 * kPi * 60e3;
    CHECK(std::abs(pzg_velocity(ResponseKind::SR, b, 60e3)) == doctest::Approx(1.0 / (0.002 * w2)).epsilon(1e-5));

    PzgParams bad = p;
    bad.f_anti = 61e3;
    CHECK_THROWS_AS(pzg_velocity(ResponseKind::DR, bad, 60e3), DomainError);
    bad = p;
    bad.eta = 0.0;
    CHECK_THROWS_AS(pzg_velocity(ResponseKind::SR, bad, 60e3), DomainError);
}

TEST_CASE("dual-resonance features") {
    const auto f = grid(55e3, 65e3, 10.0);
    const PzgParams p{1.0, 58.7e3, 60.2e3, 59.4e3, 0.001};
    const DrFeatures d = extract_dr_features(pzg_frf(ResponseKind::DR, p, f));
    CHECK(std::abs(d.f_r1 - 58.7e3) < 10.0);
    CHECK(std::abs(d.f_r2 - 60.2e3) < 10.0);
    CHECK(d.f_r1 < d.f_m);
    CHECK(d.f_m < d.f_r2);
    CHECK(d.v_m <= std::min(d.v_r1, d.v_r2));
    CHECK(d.f_dist == doctest::Approx(d.f_r2 - d.f_r1));
    CHECK_THROWS_AS(extract_dr_features(pzg_frf(ResponseKind::SR, p, f)), NoDualResonance);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double f1 = 56e3 + 3e3 * u(rng);
        const double f2 = f1 + 400.0 + 3e3 * u(rng);
        const PzgParams q{0.5 + u(rng), f1, f2, f1 + (0.2 + 0.6 * u(rng)) * (f2 - f1), 0.002 + 0.004 * u(rng)};
        const DrFeatures e = extract_dr_features(pzg_frf(ResponseKind::DR, q, f));
        CHECK(e.f_r1 < e.f_m);
        CHECK(e.f_m < e.f_r2);
    }
}

TEST_CASE("objective formulas") {
    DrFeatures d;
    d.v_r1 = 8.0;
    d.v_r2 = 1.0;
    d.v_m = 1.0;
    d.f_r1 = 59e3;
    d.f_r2 = 60.4e3;
    const Objectives o = objectives(d);
    CHECK(o.f1 == -2.0);
    CHECK(o.f2 == doctest::Approx(1400.0));
    d.v_r1 = d.v_r2 = d.v_m = 1.0;
    CHECK(objectives(d).f1 == -1.0);
    d.v_m = 0.0;
    CHECK_THROWS_AS(objectives(d), DomainError);

    const auto f = grid(55e3, 65e3, 10.0);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double f1 = 56e3 + 3e3 * u(rng);
        const double f2 = f1 + 500.0 + 3e3 * u(rng);
        const PzgParams q{0.5 + u(rng), f1, f2, 0.5 * (f1 + f2), 0.003 + 0.003 * u(rng)};
        Frf a = pzg_frf(ResponseKind::DR, q, f);
        const double s = 0.1 + 10.0 * u(rng);
        Frf b = a;
        for (cplx& v : b.center_velocity) v *= s;
        const Objectives oa = objectives(extract_dr_features(a));
        const Objectives ob = objectives(extract_dr_features(b));
        CHECK(ob.f1 == doctest::Approx(s * oa.f1).epsilon(1e-9));
        CHECK(ob.f2 == doctest::Approx(oa.f2).epsilon(1e-9));
    }
}

TEST_CASE("stack topology and admissible sizes") {
    const StackGeometry full = full_stack_9mm();
    const InitialLengths x = langevin_initial_lengths(full);
    REQUIRE(x.x0.size() == 4);
    const TransducerSpec spec = build_stack(full, x.x0, 20.0);
    CHECK(spec.segments.back().radius == full.r_horn);
    int layers = 0;
    for (const Segment& s : spec.segments) layers += s.piezo ? 1 : 0;
    CHECK(layers == 2 * full.materials.layers_per_stack);
    CHECK(spec.drive_voltage == 20.0);

    StackGeometry half = full;
    half.config = XdcrConfig::Half;
    CHECK_THROWS_AS(build_stack(half, x.x0, 1.0), DomainError);
    CHECK(build_stack(half, {0.01, 0.01, 0.01}).segments.size() == 3 + static_cast<std::size_t>(half.materials.layers_per_stack));

    StackGeometry thin = full;
    thin.r_piezo = full.materials.piezo.v1E() / full.f_design / 10.0;
    CHECK_THROWS_AS(build_stack(thin, x.x0), InfeasibleDesign);
    StackGeometry short_stack = full;
    short_stack.l_piezo = 1e-3;
    CHECK_THROWS_AS(build_stack(short_stack, x.x0), InfeasibleDesign);

    CHECK(horn_end_radius_catalog().size() == 4);
    CHECK(piezo_radius_catalog().front() == 7e-3);
}

TEST_CASE("initial lengths follow the half-wave condition") {
    const Material al = aluminum();
    const double c = std::sqrt(al.youngs / al.density);
    const StackGeometry half = uniform_rod(XdcrConfig::Half);
    const InitialLengths h = langevin_initial_lengths(half);
    double total = half.l_piezo;
    for (double v : h.x0) total += v;
    CHECK(total == doctest::Approx(c / (2.0 * 60e3)).epsilon(1e-6));

    const StackGeometry full = uniform_rod(XdcrConfig::Full);
    const InitialLengths w = langevin_initial_lengths(full);
    double total_full = 2.0 * full.l_piezo;
    for (double v : w.x0) total_full += v;
    CHECK(total_full == doctest::Approx(c / 60e3).epsilon(1e-6));

    for (const StackGeometry& g : {full_stack_9mm(), uniform_rod(XdcrConfig::Half)}) {
        const InitialLengths b = langevin_initial_lengths(g);
        for (std::size_t i = 0; i < b.x0.size(); ++i) {
            CHECK(b.lower[i] < b.x0[i]);
            CHECK(b.x0[i] < b.upper[i]);
            CHECK(b.lower[i] == doctest::Approx(0.5 * b.x0[i]));
            CHECK(b.upper[i] == doctest::Approx(1.5 * b.x0[i]));
        }
    }

    // Mixed materials: the full-wave stack is still about twice as long.
    StackGeometry g = full_stack_9mm();
    const InitialLengths lf = langevin_initial_lengths(g);
    g.config = XdcrConfig::Half;
    const InitialLengths lh = langevin_initial_lengths(g);
    double lf_total = 2.0 * g.l_piezo, lh_total = g.l_piezo;
    for (double v : lf.x0) lf_total += v;
    for (double v : lh.x0) lh_total += v;
    CHECK(lf_total / lh_total == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("plate load impedance") {
    const Medium air = standard_air();
    const PlateSpec plate = size_plate_for(60e3, 0.45, 8, aluminum(), air);
    const ModeShape mode = plate_mode_shape(plate);
    const EquivalenceRatio silent{-400.0, 60e3, 0.45};
    const double fm = mode.natural_frequency;

    PlateSpec undamped = plate;
    undamped.loss_factor = 1e-12;
    const cplx z0 = plate_load_impedance(undamped, mode, silent, air, {fm})[0];
    const cplx z_off = plate_load_impedance(undamped, mode, silent, air, {1.05 * fm})[0];
    CHECK(std::abs(z0.imag()) < 1e-6 * std::abs(z_off.imag()));

    PlateSpec damped = plate;
    damped.loss_factor = 0.01;
    CHECK(std::abs(plate_load_impedance(damped, mode, silent, air, {fm})[0]) >
          std::abs(plate_load_impedance(plate, mode, silent, air, {fm})[0]));

    const EquivalenceRatio er{-17.8, 60e3, 0.45};
    const PlateSpec six = size_plate_for(60e3, 0.45, 6, aluminum(), air);
    const ModeShape mode6 = plate_mode_shape(six);
    CHECK(six.thickness > plate.thickness);
    const double z8 = std::abs(plate_load_impedance(plate, mode, er, air, {fm})[0]);
    const double z6 = std::abs(plate_load_impedance(six, mode6, er, air, {mode6.natural_frequency})[0]);
    CHECK(z8 < z6);
}

TEST_CASE("combination-resonance screen") {
    const CrScreen s = cr_screen({400.0, 2000.0, 5000.0}, {100.0, 6000.0}, 100.0);
    REQUIRE(s.flags.size() == 3);
    for (double f : {300.0, 400.0, 500.0, 1900.0, 2000.0, 2100.0, 4900.0, 5000.0, 5100.0}) CHECK(s.flagged(f));
    for (double f : {299.0, 1000.0, 2101.0, 3500.0, 4899.0, 5101.0}) CHECK_FALSE(s.flagged(f));
    CHECK(s.flagged_frequencies({350.0, 3500.0, 5050.0}) == std::vector<double>{350.0, 5050.0});
    CHECK(cr_screen({}, {100.0, 6000.0}, 100.0).flags.empty());
    CHECK(cr_screen({9000.0}, {100.0, 6000.0}, 100.0).flags.empty());
    CHECK_THROWS_AS(cr_screen({400.0}, {100.0, 6000.0}, 0.0), DomainError);
}
