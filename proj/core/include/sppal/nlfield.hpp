#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "sppal/linfield.hpp"

namespace sppal {

// Two primary tones radiated from one aperture; f_u2 is the carrier.
struct PrimaryPair {
    double f_u1 = 0.0;
    double f_u2 = 0.0;
    SourceProfile profile_1;
    SourceProfile profile_2;

    double f_audio() const { return f_u2 - f_u1; }
};

// Throws DomainError unless f_u2 > f_u1 > 0 and both profiles share the aperture.
PrimaryPair make_primary_pair(double f_u1, double f_u2, SourceProfile profile_1, SourceProfile profile_2);

// Lower-sideband AM: (f_carrier - f_audio, f_carrier). Throws DomainError unless 0 < f_audio < f_carrier.
std::pair<double, double> lsb_am_pair(double f_carrier, double f_audio);

struct VolumeGridOptions {
    double truncation_db = 60.0;  // axial cut where |p1 p2| on axis falls this far below its peak
    double beam_radii = 4.0;      // radial extent in local beam radii
    double refine = 1.0;          // scales every panel width; 0.5 halves all steps
    double max_growth = 0.15;     // axial panel width never exceeds this fraction of z
    int order = 6;                // Gauss nodes per panel in each direction
    double z_max = 0.0;           // fixed axial extent when positive
    double r_max = 0.0;           // fixed radial extent when positive
};

// Tensor Gauss panels in (r', z'); the radial extent follows the beam.
struct VolumeGrid {
    std::vector<double> z;           // axial nodes
    std::vector<double> z_weight;
    std::vector<int> z_panel;        // panel index of each axial node
    std::vector<std::size_t> start;  // first radial node of each axial node, size z.size() + 1
    std::vector<double> r;           // radial nodes, flattened
    std::vector<double> r_weight;    // includes the r' Jacobian
    std::vector<char> r_outer;       // node lies in the outermost radial panel
    std::vector<double> r_first;     // outer edge of the first radial panel of each axial node
    std::vector<double> z_edges;     // axial panel boundaries, size panels + 1
    int order = 0;                   // Gauss nodes per panel
    double z_max = 0.0;
    double truncation_db = 0.0;

    std::size_t size() const { return r.size(); }
};

VolumeGrid make_volume_grid(const PrimaryPair& pair, const Medium& medium,
                            const VolumeGridOptions& opts = {});

// Difference-frequency source density p2 conj(p1) cached on a grid.
struct VirtualSource {
    VolumeGrid grid;
    std::vector<cplx> q;
    std::vector<cplx> q_axis;  // source density on the axis at each axial node
    double f_audio = 0.0;
};

VirtualSource build_virtual_source(const PrimaryPair& pair, const Medium& medium,
                                   const VolumeGrid& grid, const RayleighOptions& opts = {});

struct AudioSample {
    cplx pressure;
    double tail_fraction = 0.0;  // estimated share of the field lost to truncation

    bool truncation_warning() const { return tail_fraction > 0.01; }
};

// Quasilinear difference-frequency pressure at pt:
// p_a = -(beta w_a^2 / (rho c^4)) int p2 conj(p1) exp(-gamma_a R) / (4 pi R) dV.
AudioSample quasilinear_pressure(const VirtualSource& source, const Medium& medium, const FieldPoint& pt);

AudioSample quasilinear_pressure(const PrimaryPair& pair, const Medium& medium, const FieldPoint& pt,
                                 const VolumeGrid& grid);

struct AudioCurve {
    FieldCurve curve;
    double tail_fraction = 0.0;  // worst sample

    bool truncation_warning() const { return tail_fraction > 0.01; }
};

AudioCurve audio_propagation_curve(const PrimaryPair& pair, const Medium& medium,
                                   const std::vector<double>& z_grid, const VolumeGridOptions& opts = {});

AudioCurve audio_propagation_curve(const VirtualSource& source, const Medium& medium,
                                   const std::vector<double>& z_grid);

AudioCurve audio_beam_pattern(const PrimaryPair& pair, const Medium& medium, double r,
                              const std::vector<double>& theta_deg, const VolumeGridOptions& opts = {});

struct AudioCd {
    double distance = 0.0;
    double spl = 0.0;
    bool boundary_warning = false;  // maximum sits on the first or last sample
};

// Parabolic refinement around the largest SPL sample; ties go to the smaller z.
AudioCd find_audio_cd(const FieldCurve& curve);

struct BerktaySpec {
    double radius_a = 0.0;
    double f_carrier = 0.0;
    cplx v_carrier;
    cplx v_sideband;
};

// Far-field collimated-beam estimate
// |p_a| = beta w_a^2 P1 P2 S / (4 pi rho c^4 (alpha1 + alpha2) z), P = rho c |v|, S = pi a^2.
// Throws DomainError when z lies inside the carrier Rayleigh distance.
double berktay_farfield(const BerktaySpec& spec, const Medium& medium, double f_audio, double z);

std::vector<double> berktay_farfield(const BerktaySpec& spec, const Medium& medium,
                                     const std::vector<double>& f_audio, double z);

}  // namespace sppal
