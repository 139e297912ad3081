#pragma once

#include <vector>

#include "sppal/medium.hpp"
#include "sppal/radiator.hpp"

namespace sppal {

// Cylindrical observation point; rho is the distance from the axis.
struct FieldPoint {
    double rho = 0.0;
    double z = 0.0;
};

// Sampled complex pressure against distance (m) or polar angle (degrees).
struct FieldCurve {
    std::vector<double> abscissa;
    std::vector<cplx> pressure;
    double f = 0.0;

    std::vector<double> spl_db() const;
    std::vector<double> normalized_db() const;  // re the largest magnitude
};

// SPL re 20 uPa of a peak complex amplitude.
double spl_db(cplx p);

struct RayleighOptions {
    bool piston_edge_integral = true;  // exact boundary integral for uniform profiles
    bool far_field_switch = true;      // directivity kernel beyond far_field_range
    double rel_tol = 1e-9;             // azimuthal and edge quadrature
    int radial_order = 4;              // Gauss nodes per profile interval
};

// Range beyond which the directivity kernel replaces the surface integral: 20 z1.
double far_field_range(double radius_a, const Medium& medium, double f);

// Baffled-source Rayleigh integral with exp(-(alpha + i k) R) / R kernel.
// Throws DomainError for f <= 0 or z < 0, NumericalError when the azimuthal rule does not converge.
cplx rayleigh_pressure(const SourceProfile& profile, const Medium& medium, double f,
                       const FieldPoint& pt, const RayleighOptions& opts = {});

// Exact pressure of a uniform disc at any point with z > 0, from its edge integral.
cplx piston_field(double radius_a, cplx velocity, const Medium& medium, double f,
                  const FieldPoint& pt, double rel_tol = 1e-9);

// rho c v (e^{-ikz} - e^{-ik sqrt(z^2 + a^2)}) e^{-alpha z}.
cplx axial_piston_pressure(const PistonSpec& spec, const Medium& medium, double f, double z);

FieldCurve propagation_curve(const SourceProfile& profile, const Medium& medium, double f,
                             const std::vector<double>& z_grid, const RayleighOptions& opts = {});

// Pressure at range r from the source centre over polar angles in degrees.
FieldCurve beam_pattern(const SourceProfile& profile, const Medium& medium, double f, double r,
                        const std::vector<double>& theta_deg, const RayleighOptions& opts = {});

// Smallest positive angle (degrees) where the level at range r is 6 dB below the axis.
double quarter_power_half_angle(const SourceProfile& profile, const Medium& medium, double f,
                                double r, const RayleighOptions& opts = {});

// Mechanical radiation impedance of a baffled piston, N s / m.
cplx piston_radiation_impedance(double radius_a, double f, const Medium& medium);

// er_db = SPL(profile) - SPL(piston of equal radius moving at the profile centre velocity) at d_uc.
// In ratio notation the plate-to-piston factor is 10^(er_db / 20) and its reciprocal the reverse.
struct EquivalenceRatio {
    double er_db = 0.0;
    double f = 0.0;
    double d_uc = 0.0;

    double factor() const;  // 10^(er_db / 20)
};

EquivalenceRatio equivalence_ratio(const SourceProfile& profile, const Medium& medium, double f,
                                   double d_uc, const RayleighOptions& opts = {});

}  // namespace sppal
