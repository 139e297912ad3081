#pragma once

#include <complex>
#include <string>
#include <vector>

#include "sppal/medium.hpp"

namespace sppal {

struct Material {
    std::string name;
    double density = 0.0;      // kg/m^3
    double youngs = 0.0;       // Pa
    double poisson = 0.0;
    double loss_factor = 0.0;  // hysteretic
};

Material aluminum();
Material stainless_steel();
Material pzt_ceramic();

// Built-in lookup by name ("aluminum", "stainless_steel", "pzt"). Throws DomainError.
Material material_by_name(const std::string& name);

struct PistonSpec {
    double radius_a = 0.0;  // m
    cplx normal_velocity;   // m/s, peak
};

enum class Boundary { Free, Clamped };

struct PlateSpec {
    double radius_a = 0.0;
    double thickness = 0.0;
    double youngs = 0.0;
    double poisson = 0.0;
    double density = 0.0;
    int mode_m = 1;  // nodal circles inside the plate
    double loss_factor = 0.0;
    Boundary boundary = Boundary::Free;
};

// Axisymmetric Kirchhoff mode w(r) = (J0(q r / a) + C I0(q r / a)) / (1 + C), w(0) = 1.
struct ModeShape {
    double radius_a = 0.0;
    double eigenvalue = 0.0;  // q; q^2 is the frequency parameter
    double coupling = 0.0;    // C
    double natural_frequency = 0.0;
    std::vector<double> nodal_radii;
    std::vector<double> r;  // sample grid including the nodal radii
    std::vector<double> w;

    double value(double radius) const;
};

enum class SourceKind { Piston, FlatPlate, SteppedPlate };

// Axisymmetric surface velocity, linear between samples.
struct SourceProfile {
    double radius_a = 0.0;
    SourceKind kind = SourceKind::Piston;
    std::vector<double> r;
    std::vector<cplx> v;

    cplx velocity_at(double radius) const;
    cplx center_velocity() const { return v.front(); }
};

// Validates grid ordering and the piston invariant. Throws DomainError.
SourceProfile make_profile(double radius_a, SourceKind kind, std::vector<double> r,
                           std::vector<cplx> v);

SourceProfile scaled(const SourceProfile& p, cplx factor);

SourceProfile piston_profile(const PistonSpec& spec, int n_samples = 2);

// Frequency parameter of the m-th axisymmetric mode for the given boundary.
double plate_eigenvalue(Boundary boundary, double poisson, int mode_m);

// Throws DomainError on violated invariants and NumericalError when the eigenvalue is not bracketed.
ModeShape plate_mode_shape(const PlateSpec& spec, int n_samples = 512);

double plate_natural_frequency(const PlateSpec& spec);

// Radius from the ultrasonic critical distance, thickness so the m-th mode sits at f_u0.
// Throws InfeasibleDesign when the thickness would leave the thin-plate range.
PlateSpec size_plate_for(double f_u0, double d_uc, int mode_m, const Material& material,
                         const Medium& medium, Boundary boundary = Boundary::Free);

enum class StepPolicy {
    None,              // bare plate
    AllNegativeZones,  // every zone with w < 0 carries a step
    Practical          // as above, outermost step omitted for odd modes
};

// v(r) = v0 w(r), sign flipped on stepped zones. Uses the mode grid when `grid` is empty.
SourceProfile stepped_profile(const ModeShape& mode, cplx center_velocity, StepPolicy policy,
                              const std::vector<double>& grid = {});

// Uniform grid of max(64, 16 per air wavelength) points with breakpoints merged in.
std::vector<double> radial_grid(double radius_a, double f, const Medium& medium,
                                const std::vector<double>& breakpoints = {});

// Last on-axis maximum of a piston, a^2/lambda - lambda/4. Throws InfeasibleDesign for a <= lambda/2.
double first_local_max(double radius_a, double f, const Medium& medium);

// Inverse of first_local_max.
double aperture_for_cd(double d_uc, double f, const Medium& medium);

}  // namespace sppal
