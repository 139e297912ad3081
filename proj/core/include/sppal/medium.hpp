#pragma once

#include <complex>

namespace sppal {

using cplx = std::complex<double>;

// Still air at a fixed state. Immutable after build_medium.
struct Medium {
    double temperature_c = 20.0;
    double relative_humidity = 0.70;  // fraction
    double pressure_kpa = 101.325;
    double sound_speed = 0.0;         // m/s
    double density = 0.0;             // kg/m^3
    double beta = 1.2;                // coefficient of nonlinearity
    bool absorbing = true;            // false disables attenuation in field kernels
};

// Ideal-gas sound speed and density at the given state.
// Throws DomainError for T outside [-20, 50] C, RH outside [0, 1] or p outside (0, 200] kPa.
Medium build_medium(double temperature_c, double relative_humidity, double pressure_kpa,
                    double beta = 1.2);

// Standard air: 20 C, 70 % RH, 101.325 kPa.
Medium standard_air();

// Copy of m with attenuation switched off in field kernels.
Medium lossless(Medium m);

// ISO 9613-1 pure-tone attenuation in Np/m. Throws DomainError for f <= 0.
double absorption_coeff(const Medium& m, double f);

// Same quantity in dB/m.
double absorption_db_per_m(const Medium& m, double f);

// Attenuation used by field kernels: absorption_coeff, or 0 when the medium is lossless.
double kernel_attenuation(const Medium& m, double f);

// alpha + i k for the e^{i w t} convention; fields decay as exp(-gamma R).
cplx propagation_constant(const Medium& m, double f);

double wavelength(const Medium& m, double f);

}  // namespace sppal
