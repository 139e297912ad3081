#pragma once

// Independent audio-field oracle: midpoint rule on a Cartesian box clipped to a cylinder, with the
// free-space Green function evaluated directly in 3D. No axisymmetric reduction is used.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <sppal/nlfield.hpp>

namespace oracle {

struct BruteForceBox {
    double r_max = 0.0;
    double z_max = 0.0;
    double step = 0.0;
};

inline std::vector<std::complex<double>> brute_force_audio(const sppal::PrimaryPair& pair, const sppal::Medium& medium,
                                                           const BruteForceBox& box,
                                                           const std::vector<sppal::FieldPoint>& probes) {
    using cplx = std::complex<double>;
    const double pi = std::numbers::pi;
    const int nxy = static_cast<int>(std::ceil(2.0 * box.r_max / box.step));
    const int nz = static_cast<int>(std::ceil(box.z_max / box.step));
    const double hx = 2.0 * box.r_max / nxy;
    const double hz = box.z_max / nz;
    const double fa = pair.f_audio();
    const double w = 2.0 * pi * fa;
    const cplx gamma = sppal::propagation_constant(medium, fa);
    const double c = medium.sound_speed;
    const double strength = -medium.beta * w * w / (medium.density * c * c * c * c);

    std::vector<cplx> sums(probes.size(), 0.0);
    for (int k = 0; k < nz; ++k) {
        const double z = (k + 0.5) * hz;
        for (int i = 0; i < nxy; ++i) {
            const double x = -box.r_max + (i + 0.5) * hx;
            for (int j = 0; j < nxy; ++j) {
                const double y = -box.r_max + (j + 0.5) * hx;
                const double r = std::hypot(x, y);
                if (r >= box.r_max) continue;
                const cplx p1 = sppal::rayleigh_pressure(pair.profile_1, medium, pair.f_u1, {r, z});
                const cplx p2 = sppal::rayleigh_pressure(pair.profile_2, medium, pair.f_u2, {r, z});
                const cplx q = p2 * std::conj(p1);
                for (std::size_t n = 0; n < probes.size(); ++n) {
                    const double dx = probes[n].rho - x;
                    const double dz = probes[n].z - z;
                    const double big_r = std::sqrt(dx * dx + y * y + dz * dz);
                    sums[n] += q * std::exp(-gamma * big_r) / (4.0 * pi * big_r);
                }
            }
        }
    }
    for (cplx& s : sums) s *= strength * hx * hx * hz;
    return sums;
}

}  // namespace oracle
