#include "sppal/medium.hpp"

#include <cmath>
#include <numbers>

#include "sppal/errors.hpp"

namespace sppal {
namespace {

constexpr double kZeroCelsius = 273.15;
constexpr double kRefTemperature = 293.15;    // K
constexpr double kTriplePoint = 273.16;       // K
constexpr double kRefPressure = 101.325;      // kPa
constexpr double kDryAirGasConstant = 287.05; // J/(kg K)
constexpr double kNpToDb = 8.686;

}  // namespace

Medium build_medium(double temperature_c, double relative_humidity, double pressure_kpa,
                    double beta) {
    detail::require(temperature_c >= -20.0 && temperature_c <= 50.0,
                    "temperature must lie in [-20, 50] C");
    detail::require(relative_humidity >= 0.0 && relative_humidity <= 1.0,
                    "relative humidity must lie in [0, 1]");
    detail::require(pressure_kpa > 0.0 && pressure_kpa <= 200.0,
                    "pressure must lie in (0, 200] kPa");
    detail::require(beta > 0.0, "beta must be positive");

    Medium m;
    m.temperature_c = temperature_c;
    m.relative_humidity = relative_humidity;
    m.pressure_kpa = pressure_kpa;
    m.beta = beta;
    m.sound_speed = 331.3 * std::sqrt(1.0 + temperature_c / kZeroCelsius);
    m.density = pressure_kpa * 1e3 / (kDryAirGasConstant * (temperature_c + kZeroCelsius));
    return m;
}

Medium standard_air() { return build_medium(20.0, 0.70, kRefPressure); }

Medium lossless(Medium m) {
    m.absorbing = false;
    return m;
}

double absorption_db_per_m(const Medium& m, double f) {
    detail::require(f > 0.0, "frequency must be positive");
    const double t = m.temperature_c + kZeroCelsius;
    const double tr = t / kRefTemperature;
    const double pr = m.pressure_kpa / kRefPressure;

    // Molar concentration of water vapour in percent, via the saturation pressure.
    const double c = -6.8346 * std::pow(kTriplePoint / t, 1.261) + 4.6151;
    const double h = m.relative_humidity * 100.0 * std::pow(10.0, c) / pr;

    const double fr_o = pr * (24.0 + 4.04e4 * h * (0.02 + h) / (0.391 + h));
    const double fr_n =
        pr / std::sqrt(tr) * (9.0 + 280.0 * h * std::exp(-4.170 * (std::cbrt(1.0 / tr) - 1.0)));

    const double classical = 1.84e-11 / pr * std::sqrt(tr);
    const double oxygen = 0.01275 * std::exp(-2239.1 / t) / (fr_o + f * f / fr_o);
    const double nitrogen = 0.1068 * std::exp(-3352.0 / t) / (fr_n + f * f / fr_n);
    return kNpToDb * f * f * (classical + std::pow(tr, -2.5) * (oxygen + nitrogen));
}

double absorption_coeff(const Medium& m, double f) { return absorption_db_per_m(m, f) / kNpToDb; }

double kernel_attenuation(const Medium& m, double f) {
    return m.absorbing ? absorption_coeff(m, f) : 0.0;
}

cplx propagation_constant(const Medium& m, double f) {
    detail::require(f > 0.0, "frequency must be positive");
    return {kernel_attenuation(m, f), 2.0 * std::numbers::pi * f / m.sound_speed};
}

double wavelength(const Medium& m, double f) {
    detail::require(f > 0.0, "frequency must be positive");
    return m.sound_speed / f;
}

}  // namespace sppal
