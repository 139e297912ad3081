#include "sppal/nlfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sppal/errors.hpp"
#include "sppal/parallel.hpp"
#include "sppal/quadrature.hpp"
#include "ring_kernel.hpp"

namespace sppal {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRingTol = 1e-8;
// sin(theta) of the -3 dB edge of a piston beam is 1.616 / ka.
constexpr double kHalfPowerKa = 1.616;

double axial_product(const PrimaryPair& pair, const Medium& medium, double z) {
    const cplx p1 = rayleigh_pressure(pair.profile_1, medium, pair.f_u1, {0.0, z});
    const cplx p2 = rayleigh_pressure(pair.profile_2, medium, pair.f_u2, {0.0, z});
    return std::abs(p1 * p2);
}

// Returns the panel width used.
double add_radial_panels(double r0, double r1, double width, const GaussRule& g, bool outermost,
                         std::vector<double>& r, std::vector<double>& w, std::vector<char>& outer) {
    const int panels = std::max(1, static_cast<int>(std::ceil((r1 - r0) / width)));
    const double h = (r1 - r0) / panels;
    for (int p = 0; p < panels; ++p) {
        const double c = r0 + (p + 0.5) * h;
        for (std::size_t j = 0; j < g.x.size(); ++j) {
            const double x = c + 0.5 * h * g.x[j];
            r.push_back(x);
            w.push_back(0.5 * h * g.w[j] * x);
            outer.push_back(outermost && p == panels - 1 ? 1 : 0);
        }
    }
    return h;
}

}  // namespace

PrimaryPair make_primary_pair(double f_u1, double f_u2, SourceProfile profile_1, SourceProfile profile_2) {
    detail::require(f_u1 > 0.0 && f_u2 > f_u1, "primary pair needs f_u2 > f_u1 > 0");
    detail::require(std::abs(profile_1.radius_a - profile_2.radius_a) <= 1e-12 * profile_2.radius_a,
                    "primary profiles must share one aperture");
    return {f_u1, f_u2, std::move(profile_1), std::move(profile_2)};
}

std::pair<double, double> lsb_am_pair(double f_carrier, double f_audio) {
    detail::require(f_audio > 0.0 && f_audio < f_carrier, "LSB-AM needs 0 < f_audio < f_carrier");
    return {f_carrier - f_audio, f_carrier};
}

VolumeGrid make_volume_grid(const PrimaryPair& pair, const Medium& medium, const VolumeGridOptions& opts) {
    detail::require(opts.refine > 0.0 && opts.beam_radii > 0.0 && opts.max_growth > 0.0,
                    "volume grid scales must be positive");
    detail::require(opts.truncation_db > 0.0, "truncation level must be positive");
    const double a = pair.profile_2.radius_a;
    const double lambda = wavelength(medium, pair.f_u2);
    const double lambda_audio = wavelength(medium, pair.f_audio());
    const double k1 = 2.0 * kPi * pair.f_u1 / medium.sound_speed;
    const double z1 = a > lambda / 2.0 ? first_local_max(a, pair.f_u2, medium) : a;
    const double ratio = std::pow(10.0, -opts.truncation_db / 20.0);
    const GaussRule& g = gauss_legendre(opts.order);

    VolumeGrid grid;
    grid.truncation_db = opts.truncation_db;
    grid.order = opts.order;
    grid.start.push_back(0);
    grid.z_edges.push_back(0.0);
    double z0 = 0.0;
    double peak = 0.0;
    const double hard_stop = 2000.0 * std::max(z1, a);
    for (int panel = 0;; ++panel) {
        // Half a near-field fringe per panel, stretched geometrically far out, never above half an
        // audio wavelength so the back-propagated part of the source still cancels.
        const double fringe = 0.5 * lambda / (1.0 - z0 / std::hypot(z0, a));
        double h = opts.refine * std::min({fringe, std::max(0.5 * lambda, opts.max_growth * z0), 0.5 * lambda_audio});
        bool last = false;
        if (opts.z_max > 0.0 && z0 + h >= opts.z_max) {
            h = opts.z_max - z0;
            last = true;
        }
        const double z_end = z0 + h;

        const double b = std::hypot(a, kHalfPowerKa * z_end / (k1 * a));
        const double r_ext = opts.r_max > 0.0 ? opts.r_max : opts.beam_radii * b;
        const double width = opts.refine * 0.5 * lambda * std::max(1.0, z_end / (2.0 * a));
        std::vector<double> rr, rw;
        std::vector<char> ro;
        double first = 0.0;
        if (r_ext > a) {
            first = add_radial_panels(0.0, a, width, g, false, rr, rw, ro);
            add_radial_panels(a, r_ext, width, g, true, rr, rw, ro);
        } else {
            first = add_radial_panels(0.0, r_ext, width, g, true, rr, rw, ro);
        }

        for (std::size_t j = 0; j < g.x.size(); ++j) {
            grid.z.push_back(z0 + 0.5 * h * (1.0 + g.x[j]));
            grid.z_weight.push_back(0.5 * h * g.w[j]);
            grid.z_panel.push_back(panel);
            grid.r.insert(grid.r.end(), rr.begin(), rr.end());
            grid.r_weight.insert(grid.r_weight.end(), rw.begin(), rw.end());
            grid.r_outer.insert(grid.r_outer.end(), ro.begin(), ro.end());
            grid.r_first.push_back(first);
            grid.start.push_back(grid.r.size());
        }
        grid.z_edges.push_back(z_end);
        z0 = z_end;
        if (last) break;
        if (opts.z_max <= 0.0) {
            const double prod = axial_product(pair, medium, z_end);
            peak = std::max(peak, prod);
            if (z_end > 2.0 * z1 && prod <= ratio * peak) break;
            if (z_end > hard_stop) {
                throw NumericalError("axial truncation not reached by z = " + std::to_string(z_end) + " m");
            }
        }
    }
    grid.z_max = z0;
    return grid;
}

VirtualSource build_virtual_source(const PrimaryPair& pair, const Medium& medium, const VolumeGrid& grid,
                                   const RayleighOptions& opts) {
    VirtualSource s{grid, std::vector<cplx>(grid.size()), std::vector<cplx>(grid.z.size()), pair.f_audio()};
    parallel_for(grid.z.size(), [&](std::size_t i) {
        const cplx a1 = rayleigh_pressure(pair.profile_1, medium, pair.f_u1, {0.0, grid.z[i]}, opts);
        const cplx a2 = rayleigh_pressure(pair.profile_2, medium, pair.f_u2, {0.0, grid.z[i]}, opts);
        s.q_axis[i] = a2 * std::conj(a1);
        for (std::size_t n = grid.start[i]; n < grid.start[i + 1]; ++n) {
            const FieldPoint pt{grid.r[n], grid.z[i]};
            const cplx p1 = rayleigh_pressure(pair.profile_1, medium, pair.f_u1, pt, opts);
            const cplx p2 = rayleigh_pressure(pair.profile_2, medium, pair.f_u2, pt, opts);
            s.q[n] = p2 * std::conj(p1);
        }
    });
    return s;
}

AudioSample quasilinear_pressure(const VirtualSource& source, const Medium& medium, const FieldPoint& pt) {
    detail::require(pt.z >= 0.0 && pt.rho >= 0.0, "observation point needs z >= 0 and rho >= 0");
    const VolumeGrid& g = source.grid;
    const double omega = 2.0 * kPi * source.f_audio;
    const cplx gamma = propagation_constant(medium, source.f_audio);
    const double c2 = medium.sound_speed * medium.sound_speed;
    const double strength = -medium.beta * omega * omega / (medium.density * c2 * c2);
    const bool on_axis = pt.rho == 0.0;
    const int panels = static_cast<int>(g.z_edges.size()) - 1;
    const int order = g.order;

    std::vector<CompensatedSum<cplx>> by_panel(panels);
    std::vector<double> by_panel_abs(panels, 0.0);
    CompensatedSum<cplx> rim;

    // One axial node: radial sum against the Green kernel. On axis the first radial panel subtracts
    // the axis value, whose share is closed form:
    // int_0^r1 exp(-gamma R) / (2R) r' dr' = (exp(-gamma |dz|) - exp(-gamma R1)) / (2 gamma).
    auto add_node = [&](int panel, std::size_t row_start, std::size_t count, double zz, double wz,
                        const cplx* q, cplx q0, double r1) {
        const double dz = pt.z - zz;
        const double dz2 = dz * dz;
        CompensatedSum<cplx> row;
        CompensatedSum<cplx> row_rim;
        double row_abs = 0.0;
        for (std::size_t j = 0; j < count; ++j) {
            const std::size_t n = row_start + j;
            const double r = g.r[n];
            cplx kernel;
            cplx qq = q[j];
            if (on_axis) {
                const double big_r = std::sqrt(r * r + dz2);
                kernel = std::exp(-gamma * big_r) / (2.0 * big_r);
                if (j < static_cast<std::size_t>(order)) qq -= q0;
            } else {
                if (qq == 0.0) continue;
                kernel = detail::ring_kernel(pt.rho, r, dz2, gamma, kRingTol) / (4.0 * kPi);
            }
            row.add(qq * g.r_weight[n] * kernel);
            row_abs += std::abs(q[j] * g.r_weight[n] * kernel);
            if (g.r_outer[n]) row_rim.add(q[j] * g.r_weight[n] * kernel);
        }
        if (on_axis) {
            row.add(q0 * (std::exp(-gamma * std::abs(dz)) - std::exp(-gamma * std::hypot(r1, dz))) / (2.0 * gamma));
        }
        by_panel[panel].add(wz * row.value());
        by_panel_abs[panel] += wz * row_abs;
        rim.add(wz * row_rim.value());
    };

    std::size_t i0 = 0;
    std::vector<cplx> q_sub;
    std::vector<double> lag(order);
    for (int p = 0; p < panels; ++p) {
        const double lo = g.z_edges[p], hi = g.z_edges[p + 1], h = hi - lo;
        const std::size_t row_start = g.start[i0];
        const std::size_t count = g.start[i0 + 1] - row_start;
        const double r1 = g.r_first[i0];
        if (pt.z < lo - h || pt.z > hi + h || r1 >= h) {
            for (int k = 0; k < order; ++k) {
                const std::size_t i = i0 + k;
                add_node(p, g.start[i], count, g.z[i], g.z_weight[i], &source.q[g.start[i]], source.q_axis[i], r1);
            }
        } else {
            // Near the observer the kernel varies on the scale of the first radial panel: subdivide
            // the panel, split at the observer and interpolate the source along z.
            std::vector<double> cuts{lo};
            const int pieces = static_cast<int>(std::ceil(h / r1));
            for (int k = 1; k < pieces; ++k) cuts.push_back(lo + h * k / pieces);
            cuts.push_back(hi);
            if (pt.z > lo && pt.z < hi) {
                cuts.insert(std::upper_bound(cuts.begin(), cuts.end(), pt.z), pt.z);
            }
            const GaussRule& gr = gauss_legendre(order);
            q_sub.resize(count);
            for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
                const double a = cuts[c], b = cuts[c + 1];
                for (int k = 0; k < order; ++k) {
                    const double zz = 0.5 * (a + b) + 0.5 * (b - a) * gr.x[k];
                    for (int m = 0; m < order; ++m) {
                        double l = 1.0;
                        for (int n = 0; n < order; ++n)
                            if (n != m) l *= (zz - g.z[i0 + n]) / (g.z[i0 + m] - g.z[i0 + n]);
                        lag[m] = l;
                    }
                    cplx q0 = 0.0;
                    for (std::size_t j = 0; j < count; ++j) q_sub[j] = 0.0;
                    for (int m = 0; m < order; ++m) {
                        const cplx* qm = &source.q[g.start[i0 + m]];
                        for (std::size_t j = 0; j < count; ++j) q_sub[j] += lag[m] * qm[j];
                        q0 += lag[m] * source.q_axis[i0 + m];
                    }
                    add_node(p, row_start, count, zz, 0.5 * (b - a) * gr.w[k], q_sub.data(), q0, r1);
                }
            }
        }
        i0 += order;
    }
    CompensatedSum<cplx> total;
    for (const auto& s : by_panel) total.add(s.value());
    const cplx p = strength * total.value();

    // Tail beyond the last panel: the last two panels continued with the decay rate of their
    // unsigned sums, which do not oscillate.
    double tail = 0.0;
    if (panels >= 2) {
        const double last = by_panel_abs[panels - 1];
        const double prev = by_panel_abs[panels - 2];
        const double q = prev > 0.0 ? last / prev : 0.0;
        const double signed_end = std::abs(by_panel[panels - 1].value() + by_panel[panels - 2].value());
        tail = q < 1.0 ? signed_end * q / (1.0 - q) : std::numeric_limits<double>::infinity();
    }
    tail += std::abs(rim.value());
    const double mag = std::abs(total.value());
    const double fraction = mag > 0.0 ? tail / mag : (tail > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    return {p, fraction};
}

AudioSample quasilinear_pressure(const PrimaryPair& pair, const Medium& medium, const FieldPoint& pt,
                                 const VolumeGrid& grid) {
    return quasilinear_pressure(build_virtual_source(pair, medium, grid), medium, pt);
}

AudioCurve audio_propagation_curve(const VirtualSource& source, const Medium& medium,
                                   const std::vector<double>& z_grid) {
    detail::require(!z_grid.empty(), "z grid must not be empty");
    for (std::size_t i = 0; i < z_grid.size(); ++i) {
        detail::require(z_grid[i] > 0.0, "z grid must be positive");
        detail::require(i == 0 || z_grid[i] > z_grid[i - 1], "z grid must be increasing");
    }
    std::vector<AudioSample> samples(z_grid.size());
    parallel_for(z_grid.size(),
                 [&](std::size_t i) { samples[i] = quasilinear_pressure(source, medium, {0.0, z_grid[i]}); });
    AudioCurve out{{z_grid, {}, source.f_audio}, 0.0};
    for (const AudioSample& s : samples) {
        out.curve.pressure.push_back(s.pressure);
        out.tail_fraction = std::max(out.tail_fraction, s.tail_fraction);
    }
    return out;
}

AudioCurve audio_propagation_curve(const PrimaryPair& pair, const Medium& medium,
                                   const std::vector<double>& z_grid, const VolumeGridOptions& opts) {
    detail::require(!z_grid.empty(), "z grid must not be empty");
    const VirtualSource src = build_virtual_source(pair, medium, make_volume_grid(pair, medium, opts));
    return audio_propagation_curve(src, medium, z_grid);
}

AudioCurve audio_beam_pattern(const PrimaryPair& pair, const Medium& medium, double r,
                              const std::vector<double>& theta_deg, const VolumeGridOptions& opts) {
    detail::require(r > 0.0, "beam pattern range must be positive");
    detail::require(!theta_deg.empty(), "angle grid must not be empty");
    for (std::size_t i = 0; i < theta_deg.size(); ++i) {
        detail::require(std::abs(theta_deg[i]) < 90.0, "angles must lie in (-90, 90) degrees");
        detail::require(i == 0 || theta_deg[i] > theta_deg[i - 1], "angle grid must be increasing");
    }
    const VirtualSource src = build_virtual_source(pair, medium, make_volume_grid(pair, medium, opts));
    std::vector<AudioSample> samples(theta_deg.size());
    parallel_for(theta_deg.size(), [&](std::size_t i) {
        const double t = std::abs(theta_deg[i]) * kPi / 180.0;
        samples[i] = quasilinear_pressure(src, medium, {r * std::sin(t), r * std::cos(t)});
    });
    AudioCurve out{{theta_deg, {}, src.f_audio}, 0.0};
    for (const AudioSample& s : samples) {
        out.curve.pressure.push_back(s.pressure);
        out.tail_fraction = std::max(out.tail_fraction, s.tail_fraction);
    }
    return out;
}

AudioCd find_audio_cd(const FieldCurve& curve) {
    detail::require(!curve.pressure.empty(), "curve must not be empty");
    const std::vector<double> spl = curve.spl_db();
    const std::size_t i = static_cast<std::size_t>(std::max_element(spl.begin(), spl.end()) - spl.begin());
    if (i == 0 || i + 1 == spl.size()) return {curve.abscissa[i], spl[i], true};
    const double x0 = curve.abscissa[i - 1], x1 = curve.abscissa[i], x2 = curve.abscissa[i + 1];
    const double y0 = spl[i - 1], y1 = spl[i], y2 = spl[i + 1];
    // Vertex of the interpolating parabola through three unequally spaced points.
    const double d01 = (y1 - y0) / (x1 - x0);
    const double d12 = (y2 - y1) / (x2 - x1);
    const double curv = (d12 - d01) / (x2 - x0);
    if (!(curv < 0.0)) return {x1, y1, false};
    const double slope = d01 + curv * (x1 - x0);  // derivative at x1
    const double x = std::clamp(x1 - slope / (2.0 * curv), x0, x2);
    const double y = y1 + slope * (x - x1) + curv * (x - x1) * (x - x1);
    return {x, y, false};
}

double berktay_farfield(const BerktaySpec& spec, const Medium& medium, double f_audio, double z) {
    detail::require(spec.radius_a > 0.0, "aperture must be positive");
    const auto [f1, f2] = lsb_am_pair(spec.f_carrier, f_audio);
    const double k2 = 2.0 * kPi * f2 / medium.sound_speed;
    const double rayleigh = 0.5 * k2 * spec.radius_a * spec.radius_a;
    if (!(z > rayleigh)) {
        throw DomainError("Berktay estimate needs z beyond the Rayleigh distance " + std::to_string(rayleigh) + " m");
    }
    const double rc = medium.density * medium.sound_speed;
    const double alpha = absorption_coeff(medium, f1) + absorption_coeff(medium, f2);
    const double omega = 2.0 * kPi * f_audio;
    const double c2 = medium.sound_speed * medium.sound_speed;
    const double area = kPi * spec.radius_a * spec.radius_a;
    return medium.beta * omega * omega * rc * std::abs(spec.v_sideband) * rc * std::abs(spec.v_carrier) * area /
           (4.0 * kPi * medium.density * c2 * c2 * alpha * z);
}

std::vector<double> berktay_farfield(const BerktaySpec& spec, const Medium& medium,
                                     const std::vector<double>& f_audio, double z) {
    std::vector<double> out;
    out.reserve(f_audio.size());
    for (double f : f_audio) out.push_back(berktay_farfield(spec, medium, f, z));
    return out;
}

}  // namespace sppal
