#pragma once

namespace sppal {

// Bessel functions of integer order for non-negative arguments.
double bessel_j0(double x);
double bessel_j1(double x);
double bessel_i0(double x);
double bessel_i1(double x);

// Struve function H1 for x >= 0, from its Poisson-type integral.
double struve_h1(double x);

// Normalised resistance and reactance of a baffled piston, argument 2ka.
double piston_resistance(double two_ka);
double piston_reactance(double two_ka);

}  // namespace sppal
