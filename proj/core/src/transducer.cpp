#include "sppal/transducer.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include <boost/math/tools/roots.hpp>

#include "sppal/errors.hpp"
#include "sppal/parallel.hpp"
#include "sppal/quadrature.hpp"

namespace sppal {
namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);

Chain identity() {
    Chain m{};
    for (int i = 0; i < 3; ++i) m[i][i] = 1.0;
    return m;
}

Chain multiply(const Chain& a, const Chain& b) {
    Chain c{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) c[i][j] += a[i][k] * b[k][j];
    return c;
}

Chain chain_of(const std::vector<Segment>& segments, double f) {
    Chain m = identity();
    for (const Segment& s : segments) m = multiply(m, segment_matrix(s, f));
    return m;
}

Segment passive(double length, double radius, Material m) {
    m.loss_factor = 0.0;
    return {length, radius, std::move(m), std::nullopt};
}

// Piezo layer stiffened to its short-circuit bar modulus, lossless; used for sizing only.
Material short_circuit(const PiezoConstants& p) { return {"piezo", p.density, 1.0 / p.s33E, 0.3, 0.0}; }

double bar_wavelength(const Material& m, double f) { return std::sqrt(m.youngs / m.density) / f; }

// Smallest length in (0, span) at which element (row, col) of the lossless chain changes sign.
double solve_length(const std::function<std::vector<Segment>(double)>& make, int row, int col, double f,
                    double span, const std::string& what) {
    auto g = [&](double len) {
        const cplx v = chain_of(make(len), f)[row][col];
        // Elements on the diagonal are real, off-diagonal ones imaginary for a lossless chain.
        return row == col ? v.real() : v.imag();
    };
    const int steps = 4000;
    double lo = span * 1e-6, g_lo = g(lo);
    for (int i = 1; i <= steps; ++i) {
        const double hi = span * i / steps;
        const double g_hi = g(hi);
        if ((g_lo < 0.0) != (g_hi < 0.0)) {
            boost::uintmax_t iters = 200;
            const auto [a, b] =
                boost::math::tools::toms748_solve(g, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
            return 0.5 * (a + b);
        }
        lo = hi;
        g_lo = g_hi;
    }
    throw InfeasibleDesign("no resonant length for the " + what);
}

void check_piezo(const PiezoConstants& p) {
    detail::require(p.density > 0.0 && p.s33E > 0.0 && p.s11E > 0.0 && p.eps33S > 0.0 && p.d33 > 0.0,
                    "piezo constants must be positive");
    detail::require(p.loss_factor >= 0.0, "piezo loss factor must be non-negative");
}

void check_geometry(const StackGeometry& g) {
    detail::require(g.r_piezo > 0.0 && g.l_piezo > 0.0 && g.r_horn > 0.0, "stack sizes must be positive");
    detail::require(g.f_design > 0.0, "design frequency must be positive");
    detail::require(g.materials.layers_per_stack >= 1, "a stack needs at least one layer");
    detail::require(g.materials.horn_step_ratio > 0.0, "horn step ratio must be positive");
    check_piezo(g.materials.piezo);
    const double lambda1 = g.materials.piezo.v1E() / g.f_design;
    const double lambda3 = g.materials.piezo.v3E() / g.f_design;
    if (!(g.r_piezo > lambda1 / 8.0 && g.r_piezo < lambda1 / 4.0)) {
        throw InfeasibleDesign("stack radius " + std::to_string(g.r_piezo) + " m outside (" +
                               std::to_string(lambda1 / 8.0) + ", " + std::to_string(lambda1 / 4.0) + ") m");
    }
    if (!(g.l_piezo > lambda3 / 10.0 && g.l_piezo < lambda3 / 4.0)) {
        throw InfeasibleDesign("stack length " + std::to_string(g.l_piezo) + " m outside (" +
                               std::to_string(lambda3 / 10.0) + ", " + std::to_string(lambda3 / 4.0) + ") m");
    }
}

void append_stack(std::vector<Segment>& out, const StackGeometry& g, double polarity) {
    const int n = g.materials.layers_per_stack;
    for (int i = 0; i < n; ++i) {
        Segment s{g.l_piezo / n, g.r_piezo, short_circuit(g.materials.piezo), PiezoLayer{g.materials.piezo, polarity}};
        out.push_back(std::move(s));
    }
}

double parabola_vertex(double x0, double x1, double x2, double y0, double y1, double y2, double* y_out) {
    const double d01 = (y1 - y0) / (x1 - x0);
    const double d12 = (y2 - y1) / (x2 - x1);
    const double curv = (d12 - d01) / (x2 - x0);
    if (curv == 0.0) {
        *y_out = y1;
        return x1;
    }
    const double slope = d01 + curv * (x1 - x0);
    const double x = std::clamp(x1 - slope / (2.0 * curv), x0, x2);
    *y_out = y1 + slope * (x - x1) + curv * (x - x1) * (x - x1);
    return x;
}

}  // namespace

double PiezoConstants::v1E() const { return 1.0 / std::sqrt(density * s11E); }
double PiezoConstants::v3E() const { return 1.0 / std::sqrt(density * s33E); }
double PiezoConstants::k33_sq() const {
    const double eps_t = eps33S + d33 * d33 / s33E;
    return d33 * d33 / (s33E * eps_t);
}
double PiezoConstants::c33D() const { return 1.0 / (s33E * (1.0 - k33_sq())); }
double PiezoConstants::h33() const { return d33 / (s33E * eps33S); }

PiezoConstants default_piezo() { return {}; }

double Segment::area() const { return kPi * radius * radius; }

const std::vector<double>& horn_end_radius_catalog() {
    static const std::vector<double> c{0.75e-3, 1.00e-3, 1.25e-3, 1.50e-3};
    return c;
}

const std::vector<double>& piezo_radius_catalog() {
    static const std::vector<double> c{7e-3, 9e-3, 11e-3, 13e-3};
    return c;
}

Chain segment_matrix(const Segment& s, double f) {
    detail::require(s.length > 0.0 && s.radius > 0.0, "segment length and radius must be positive");
    detail::require(f > 0.0, "frequency must be positive");
    const double area = s.area();
    const double omega = 2.0 * kPi * f;
    Chain m = identity();
    if (!s.piezo) {
        const Material& mat = s.material;
        detail::require(mat.density > 0.0 && mat.youngs > 0.0 && mat.loss_factor >= 0.0,
                        "segment material must be positive");
        const cplx c = std::sqrt(cplx(mat.youngs, mat.youngs * mat.loss_factor) / mat.density);
        const cplx kl = omega / c * s.length;
        const cplx z0 = mat.density * c * area;
        m[0][0] = std::cos(kl);
        m[0][1] = kI * z0 * std::sin(kl);
        m[1][0] = kI * std::sin(kl) / z0;
        m[1][1] = std::cos(kl);
        return m;
    }
    // Three-port layer with voltage drive:
    // F_in = p v_in - q v_out + N V, F_out = q v_in - p v_out + N V,
    // p = Z0 / (i tan kL) - X, q = Z0 / (i sin kL) - X, X = h^2 C0 / (i w), N = h C0.
    const PiezoConstants& pc = s.piezo->constants;
    check_piezo(pc);
    const double c_d = pc.c33D();
    const cplx c = std::sqrt(cplx(c_d, c_d * pc.loss_factor) / pc.density);
    const cplx kl = omega / c * s.length;
    const cplx z0 = pc.density * c * area;
    const double c0 = pc.eps33S * area / s.length;
    const double h = pc.h33();
    const cplx x = h * h * c0 / (kI * omega);
    const double n = s.piezo->polarity * h * c0;
    const cplx p = z0 / (kI * std::tan(kl)) - x;
    const cplx q = z0 / (kI * std::sin(kl)) - x;
    m[0][0] = p / q;
    m[0][1] = (p * p - q * q) / q;
    m[0][2] = n * (1.0 - p / q);
    m[1][0] = 1.0 / q;
    m[1][1] = p / q;
    m[1][2] = -n / q;
    return m;
}

Chain chain_matrix(const TransducerSpec& spec, double f) {
    detail::require(!spec.segments.empty(), "transducer needs at least one segment");
    return chain_of(spec.segments, f);
}

TransducerSpec build_stack(const StackGeometry& g, const std::vector<double>& x, double drive_voltage) {
    const std::size_t arity = g.config == XdcrConfig::Half ? 3 : 4;
    detail::require(x.size() == arity, std::string(g.config == XdcrConfig::Half ? "Half" : "Full") +
                                           " configuration needs " + std::to_string(arity) + " lengths");
    for (double l : x) detail::require(l > 0.0, "segment lengths must be positive");
    check_geometry(g);
    detail::require(g.r_horn <= g.r_piezo * g.materials.horn_step_ratio, "horn end must not exceed the horn");
    const TransducerMaterials& m = g.materials;
    const double r_big = g.r_piezo * m.horn_step_ratio;
    TransducerSpec spec;
    spec.config = g.config;
    spec.drive_voltage = drive_voltage;
    spec.segments.push_back({x[0], g.r_piezo, m.back, std::nullopt});
    append_stack(spec.segments, g, 1.0);
    if (g.config == XdcrConfig::Full) {
        spec.segments.push_back({x[1], g.r_piezo, m.horn, std::nullopt});
        // The full-wave mode strains the two stacks in antiphase.
        append_stack(spec.segments, g, -1.0);
    }
    spec.segments.push_back({x[arity - 2], r_big, m.horn, std::nullopt});
    spec.segments.push_back({x[arity - 1], g.r_horn, m.horn, std::nullopt});
    return spec;
}

InitialLengths langevin_initial_lengths(const StackGeometry& g) {
    check_geometry(g);
    const TransducerMaterials& m = g.materials;
    const double f = g.f_design;
    const Material pz = short_circuit(m.piezo);
    const Segment half_stack = passive(0.5 * g.l_piezo, g.r_piezo, pz);
    const double r_big = g.r_piezo * m.horn_step_ratio;
    const double lambda_back = bar_wavelength(m.back, f);
    const double lambda_horn = bar_wavelength(m.horn, f);
    const double neck = lambda_horn / 8.0;

    InitialLengths out;
    // Node at the stack centre to a free end: the velocity transfer element vanishes.
    out.x0.push_back(solve_length(
        [&](double l) { return std::vector<Segment>{half_stack, passive(l, g.r_piezo, m.back)}; }, 1, 1, f,
        0.5 * lambda_back, "back mass"));
    if (g.config == XdcrConfig::Full) {
        // Node to node: the force-to-velocity element vanishes.
        out.x0.push_back(solve_length(
            [&](double l) { return std::vector<Segment>{half_stack, passive(l, g.r_piezo, m.horn), half_stack}; }, 1, 0,
            f, 0.5 * lambda_horn, "stack spacer"));
    }
    out.x0.push_back(solve_length(
        [&](double l) {
            return std::vector<Segment>{half_stack, passive(l, r_big, m.horn), passive(neck, g.r_horn, m.horn)};
        },
        1, 1, f, 0.5 * lambda_horn, "horn"));
    out.x0.push_back(neck);
    for (double v : out.x0) {
        out.lower.push_back(0.5 * v);
        out.upper.push_back(1.5 * v);
    }
    return out;
}

std::vector<cplx> plate_load_impedance(const PlateSpec& plate, const ModeShape& mode, const EquivalenceRatio& er,
                                       const Medium& medium, const std::vector<double>& freqs) {
    detail::require(std::abs(mode.radius_a - plate.radius_a) <= 1e-12 * plate.radius_a,
                    "mode shape must belong to the plate");
    detail::require(plate.thickness > 0.0 && plate.density > 0.0, "plate must have mass");
    // Drive-point modal mass: rho h int w^2 dA / w(0)^2.
    const double w0 = mode.value(0.0);
    auto integrand = [&](double r) { return mode.value(r) * mode.value(r) * r; };
    const double integral = integrate_panels<double>(integrand, 0.0, plate.radius_a, 8 * (plate.mode_m + 2), 16);
    const double m_eff = plate.density * plate.thickness * 2.0 * kPi * integral / (w0 * w0);
    const double w_m = 2.0 * kPi * mode.natural_frequency;
    const double k_eff = m_eff * w_m * w_m;
    const double factor = er.factor();
    std::vector<cplx> z;
    z.reserve(freqs.size());
    for (double f : freqs) {
        detail::require(f > 0.0, "frequency must be positive");
        const double w = 2.0 * kPi * f;
        const cplx rad = piston_radiation_impedance(plate.radius_a, f, medium) * factor * factor;
        z.push_back(kI * w * m_eff + k_eff * cplx(1.0, plate.loss_factor) / (kI * w) + rad);
    }
    return z;
}

Frf frf_transfer_matrix(const TransducerSpec& spec, const std::vector<cplx>& load, const std::vector<double>& freqs) {
    detail::require(!freqs.empty(), "frequency grid must not be empty");
    detail::require(load.size() == freqs.size(), "load must match the frequency grid");
    for (std::size_t i = 1; i < freqs.size(); ++i)
        detail::require(freqs[i] > freqs[i - 1], "frequency grid must be strictly increasing");
    Frf out{freqs, std::vector<cplx>(freqs.size()), std::vector<char>(freqs.size(), 0)};
    parallel_for(freqs.size(), [&](std::size_t i) {
        const Chain m = chain_matrix(spec, freqs[i]);
        const cplx den = m[0][0] * load[i] + m[0][1];
        const cplx num = spec.drive_force - m[0][2] * spec.drive_voltage;
        const double scale = std::abs(m[0][0] * load[i]) + std::abs(m[0][1]);
        const cplx v = num / den;
        if (!(std::abs(den) > 1e-14 * scale) || !std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            out.flagged[i] = 1;
        } else {
            out.center_velocity[i] = v;
        }
    });
    // Singular samples take the linear interpolant of their nearest good neighbours.
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        if (!out.flagged[i]) continue;
        std::size_t lo = i, hi = i;
        while (lo > 0 && out.flagged[lo]) --lo;
        while (hi + 1 < freqs.size() && out.flagged[hi]) ++hi;
        const bool lo_ok = !out.flagged[lo], hi_ok = !out.flagged[hi];
        if (lo_ok && hi_ok) {
            const double t = (freqs[i] - freqs[lo]) / (freqs[hi] - freqs[lo]);
            out.center_velocity[i] = out.center_velocity[lo] + t * (out.center_velocity[hi] - out.center_velocity[lo]);
        } else if (lo_ok || hi_ok) {
            out.center_velocity[i] = out.center_velocity[lo_ok ? lo : hi];
        } else {
            throw NumericalError("transfer chain singular at every frequency");
        }
    }
    return out;
}

cplx pzg_velocity(ResponseKind kind, const PzgParams& p, double f) {
    detail::require(p.eta > 0.0, "loss factor must be positive");
    detail::require(p.f_r2 > 0.0 && f >= 0.0, "frequencies must be positive");
    const double w = 2.0 * kPi * f;
    const cplx damp(1.0, p.eta);
    const double w2 = 2.0 * kPi * p.f_r2;
    const cplx pole2 = w2 * w2 * damp - w * w;
    if (kind == ResponseKind::SR) return kI * w * p.gain / pole2;
    detail::require(p.f_r1 > 0.0 && p.f_r1 < p.f_anti && p.f_anti < p.f_r2,
                    "dual resonance needs f_r1 < f_anti < f_r2");
    const double w1 = 2.0 * kPi * p.f_r1;
    const double wa = 2.0 * kPi * p.f_anti;
    return kI * w * p.gain * (wa * wa * damp - w * w) / ((w1 * w1 * damp - w * w) * pole2);
}

Frf pzg_frf(ResponseKind kind, const PzgParams& p, const std::vector<double>& freqs) {
    for (std::size_t i = 1; i < freqs.size(); ++i)
        detail::require(freqs[i] > freqs[i - 1], "frequency grid must be strictly increasing");
    Frf out{freqs, {}, std::vector<char>(freqs.size(), 0)};
    out.center_velocity.reserve(freqs.size());
    for (double f : freqs) out.center_velocity.push_back(pzg_velocity(kind, p, f));
    return out;
}

DrFeatures extract_dr_features(const Frf& frf) {
    const std::size_t n = frf.freqs.size();
    detail::require(frf.center_velocity.size() == n, "response and grid sizes differ");
    std::vector<double> mag(n);
    for (std::size_t i = 0; i < n; ++i) mag[i] = std::abs(frf.center_velocity[i]);
    std::vector<std::size_t> peaks;
    for (std::size_t i = 1; i + 1 < n; ++i)
        if (mag[i] > mag[i - 1] && mag[i] >= mag[i + 1]) peaks.push_back(i);
    if (peaks.size() < 2) throw NoDualResonance("response has " + std::to_string(peaks.size()) + " interior peaks");
    std::stable_sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) { return mag[a] > mag[b]; });
    std::size_t i1 = std::min(peaks[0], peaks[1]);
    std::size_t i2 = std::max(peaks[0], peaks[1]);
    std::size_t im = i1 + 1;
    for (std::size_t i = i1 + 1; i < i2; ++i)
        if (mag[i] < mag[im]) im = i;

    const auto& f = frf.freqs;
    DrFeatures d;
    auto refine = [&](std::size_t i, double* value) {
        return parabola_vertex(f[i - 1], f[i], f[i + 1], mag[i - 1], mag[i], mag[i + 1], value);
    };
    d.f_r1 = refine(i1, &d.v_r1);
    d.f_r2 = refine(i2, &d.v_r2);
    d.f_m = refine(im, &d.v_m);
    // Keep the refined minimum strictly between the refined peaks.
    if (!(d.f_m > d.f_r1 && d.f_m < d.f_r2)) {
        d.f_m = f[im];
        d.v_m = mag[im];
    }
    d.v_m = std::min({d.v_m, d.v_r1, d.v_r2});
    d.f_dist = d.f_r2 - d.f_r1;
    return d;
}

Objectives objectives(const DrFeatures& d) {
    detail::require(d.v_r1 > 0.0 && d.v_r2 > 0.0 && d.v_m > 0.0, "peak and valley velocities must be positive");
    return {-std::cbrt(d.v_r1 * d.v_r2 * d.v_m), d.f_r2 - d.f_r1};
}

bool CrScreen::flagged(double f_audio) const {
    return std::any_of(flags.begin(), flags.end(),
                       [f_audio](const CrFlag& c) { return f_audio >= c.f_lo && f_audio <= c.f_hi; });
}

std::vector<double> CrScreen::flagged_frequencies(const std::vector<double>& f_audio) const {
    std::vector<double> out;
    for (double f : f_audio)
        if (flagged(f)) out.push_back(f);
    return out;
}

CrScreen cr_screen(const std::vector<double>& modal_freqs, std::pair<double, double> band, double tol) {
    detail::require(tol > 0.0, "tolerance must be positive");
    detail::require(band.first >= 0.0 && band.second > band.first, "audio band must be increasing");
    CrScreen s;
    for (double fm : modal_freqs) {
        const double lo = std::max(band.first, fm - tol);
        const double hi = std::min(band.second, fm + tol);
        if (lo <= hi) s.flags.push_back({fm, lo, hi});
    }
    return s;
}

}  // namespace sppal
