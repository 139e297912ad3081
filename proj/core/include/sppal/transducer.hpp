#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sppal/linfield.hpp"
#include "sppal/medium.hpp"
#include "sppal/radiator.hpp"

namespace sppal {

// Thickness-mode piezoceramic constants. eps33S is the permittivity of the laterally free,
// longitudinally clamped bar.
struct PiezoConstants {
    double density = 7500.0;
    double s33E = 15.5e-12;
    double s11E = 12.3e-12;
    double d33 = 289e-12;
    double eps33S = 635.0 * 8.8541878128e-12;
    double loss_factor = 0.01;

    double v1E() const;    // radial bar speed at constant field
    double v3E() const;    // longitudinal bar speed at constant field
    double k33_sq() const;  // bar coupling factor squared
    double c33D() const;   // open-circuit bar stiffness
    double h33() const;    // piezoelectric stiffness constant, V/m
};

PiezoConstants default_piezo();

struct PiezoLayer {
    PiezoConstants constants;
    double polarity = 1.0;  // +1 or -1 relative to the drive voltage
};

struct Segment {
    double length = 0.0;
    double radius = 0.0;
    Material material;                 // ignored for piezo layers
    std::optional<PiezoLayer> piezo;   // electrically parallel layer under the drive voltage

    double area() const;
};

enum class XdcrConfig { Half, Full };

struct TransducerSpec {
    XdcrConfig config = XdcrConfig::Half;
    std::vector<Segment> segments;  // back mass first, plate interface last
    double drive_voltage = 1.0;     // V
    double drive_force = 0.0;       // N on the back face, for rods without piezo layers
};

struct TransducerMaterials {
    Material back = stainless_steel();
    Material horn = aluminum();
    PiezoConstants piezo = default_piezo();
    int layers_per_stack = 4;
    double horn_step_ratio = 1.0;  // radius of the first horn section relative to r_P
};

struct StackGeometry {
    XdcrConfig config = XdcrConfig::Half;
    double r_piezo = 0.0;  // r_P
    double l_piezo = 0.0;  // l_P, one stack
    double r_horn = 0.0;   // r_H, horn-end radius
    double f_design = 0.0; // f_u0, fixes the admissible r_P and l_P bands
    TransducerMaterials materials;
};

// r_P must lie in (lambda_1 / 8, lambda_1 / 4) and l_P in (lambda_3 / 10, lambda_3 / 4), lambda_i = v_i^E / f.
// Half: back, stack, horn, neck (3 lengths). Full: back, stack, spacer, stack, horn, neck (4 lengths).
// Throws DomainError for the wrong arity or non-positive sizes, InfeasibleDesign outside the bands.
TransducerSpec build_stack(const StackGeometry& geometry, const std::vector<double>& x, double drive_voltage = 1.0);

const std::vector<double>& horn_end_radius_catalog();  // m
const std::vector<double>& piezo_radius_catalog();     // m

struct InitialLengths {
    std::vector<double> x0;
    std::vector<double> lower;  // 0.5 x0
    std::vector<double> upper;  // 1.5 x0
};

// Classical Langevin sizing with nodes at the stack centres and a neck of one eighth wavelength.
InitialLengths langevin_initial_lengths(const StackGeometry& geometry);

// Chain matrices: [F_in, v_in, V] = M [F_out, v_out, V]; F is compressive force, v points to the front.
using Chain = std::array<std::array<cplx, 3>, 3>;
Chain segment_matrix(const Segment& segment, double f);
Chain chain_matrix(const TransducerSpec& spec, double f);

struct Frf {
    std::vector<double> freqs;
    std::vector<cplx> center_velocity;
    std::vector<char> flagged;  // singular chain sample, value interpolated
};

// Drive-point impedance of the plate mode at its centre, radiation referred through the equivalence factor.
std::vector<cplx> plate_load_impedance(const PlateSpec& plate, const ModeShape& mode, const EquivalenceRatio& er,
                                       const Medium& medium, const std::vector<double>& freqs);

// Plate-interface velocity under the drive; load[i] is the impedance at freqs[i].
Frf frf_transfer_matrix(const TransducerSpec& spec, const std::vector<cplx>& load, const std::vector<double>& freqs);

enum class ResponseKind { SR, DR };

struct PzgParams {
    double gain = 1.0;  // K
    double f_r1 = 0.0;
    double f_r2 = 0.0;
    double f_anti = 0.0;
    double eta = 0.0;
};

// SR: i w K / (w_r2^2 (1 + i eta) - w^2).
// DR: i w K (w_a^2 (1 + i eta) - w^2) / ((w_r1^2 (1 + i eta) - w^2)(w_r2^2 (1 + i eta) - w^2)).
Frf pzg_frf(ResponseKind kind, const PzgParams& params, const std::vector<double>& freqs);
cplx pzg_velocity(ResponseKind kind, const PzgParams& params, double f);

struct DrFeatures {
    double f_r1 = 0.0, f_r2 = 0.0;
    double v_r1 = 0.0, v_r2 = 0.0;
    double f_m = 0.0, v_m = 0.0;
    double f_dist = 0.0;
};

// Two largest interior peaks of |v|, the minimum between them, parabolic refinement.
// Throws NoDualResonance with fewer than two interior peaks.
DrFeatures extract_dr_features(const Frf& frf);

struct Objectives {
    double f1 = 0.0;  // -(v_r1 v_r2 v_m)^(1/3), m/s
    double f2 = 0.0;  // f_r2 - f_r1, Hz
};

Objectives objectives(const DrFeatures& features);

struct CrFlag {
    double modal_frequency = 0.0;
    double f_lo = 0.0;
    double f_hi = 0.0;
};

struct CrScreen {
    std::vector<CrFlag> flags;

    bool flagged(double f_audio) const;
    std::vector<double> flagged_frequencies(const std::vector<double>& f_audio) const;
};

// Audio frequencies within tol of a structural mode inside the band risk combination resonance.
CrScreen cr_screen(const std::vector<double>& modal_freqs, std::pair<double, double> audio_band, double tol);

}  // namespace sppal
