#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sppal/nlfield.hpp"
#include "sppal/transducer.hpp"

namespace sppal {

struct DesignParams {
    double d_uc = 0.45;   // m, ultrasonic critical distance
    double f_u0 = 60e3;   // Hz, plate operating mode
    int mode_m = 8;
    XdcrConfig config = XdcrConfig::Full;
    double r_piezo = 9e-3;
    double l_piezo = 0.0;  // one stack; non-positive selects a sixth of the longitudinal wavelength
    double r_horn = 0.75e-3;
    double drive_voltage = 20.0;
    TransducerMaterials materials;
    Material plate_material = aluminum();
    StepPolicy step_policy = StepPolicy::Practical;
};

// Everything about a design that does not depend on the segment lengths.
struct DesignModel {
    DesignParams params;
    StackGeometry geometry;
    PlateSpec plate;
    ModeShape mode;
    SourceProfile plate_profile;  // stepped profile at unit centre velocity
    EquivalenceRatio er;          // at f_u0
    InitialLengths bounds;
    std::vector<double> freqs;    // DR search band [0.9 f_u0, 1.1 f_u0], 10 Hz
    std::vector<cplx> load;       // plate load on the search band

    double band_width() const { return freqs.back() - freqs.front(); }
};

// Throws InfeasibleDesign when the plate or stack cannot be realized.
DesignModel make_design_model(const DesignParams& params, const Medium& medium);

struct DesignPoint {
    DesignParams params;
    std::vector<double> x;
    Objectives objectives;
    DrFeatures features;
    bool penalized = false;  // no dual resonance or infeasible geometry
    std::string note;
    double l_pa_c = std::numeric_limits<double>::quiet_NaN();  // dB, audio SPL at the audio CD
    double d_ac = std::numeric_limits<double>::quiet_NaN();    // m

    double f_dist() const { return features.f_dist; }
};

// Penalty objectives are F1 = 0 and F2 = search-band width. Never throws for x inside the bounds.
DesignPoint evaluate_design(const DesignModel& model, const std::vector<double>& x);

// Builds the model first; infeasible parameters yield a penalized point.
DesignPoint evaluate_design(const DesignParams& params, const Medium& medium, const std::vector<double>& x);

// Generic bi-objective minimization.
struct Score {
    std::array<double, 2> f{};
    bool penalized = false;
};

using Evaluator = std::function<Score(const std::vector<double>&)>;

struct Nsga2Config {
    int population = 40;  // even, at least 8
    int generations = 50;
    std::uint64_t seed = 1;
    double crossover_prob = 0.9;
    double eta_c = 15.0;
    double eta_m = 20.0;
    double mutation_prob = 0.0;  // per variable; non-positive selects 1 / n
    std::optional<std::array<double, 2>> reference;  // enables the hypervolume history
    std::vector<std::vector<double>> seeds;          // injected into the initial population
};

struct Candidate {
    std::vector<double> x;
    Score score;
};

struct Nsga2Result {
    std::vector<Candidate> front;       // first non-dominated front of the final population
    std::vector<Candidate> population;
    std::vector<double> hypervolume;    // first front, initial population then every generation
    std::size_t evaluations = 0;
};

// Feasible points dominate penalized ones; among equals, Pareto dominance on f.
bool dominates(const Score& a, const Score& b);

// Points beyond the reference in either objective contribute nothing.
double hypervolume_2d(std::vector<std::array<double, 2>> points, std::array<double, 2> reference);

// Evaluations run through parallel_for; all random draws happen on the calling thread.
Nsga2Result nsga2(const Evaluator& evaluate, const std::vector<std::pair<double, double>>& bounds,
                  const Nsga2Config& config);

// Mutually non-dominated designs; sorted by F2 ascending.
struct ParetoFront {
    std::vector<DesignPoint> points;
    std::vector<DesignPoint> population;  // final population, penalized members included
    std::vector<double> hypervolume;      // reference (0, band width)
};

// Searches the segment lengths within model.bounds; the Langevin initial lengths seed the population.
ParetoFront optimize_design(const DesignModel& model, const Nsga2Config& config);

// Minimum F1 with f_dist inside the window, ties by smaller F2. Falls back to the final population
// when no front point lies inside the window.
std::optional<DesignPoint> select_knee(const ParetoFront& front, std::pair<double, double> f_dist_window);

using VelocityResponse = std::function<cplx(double f)>;

struct AudioResponse {
    std::vector<double> f_audio;
    std::vector<double> spl;            // dB at the observation point
    std::vector<double> tail_fraction;
};

// Piston of radius_a driven at v(f_carrier - f_a) and v(f_carrier) for every audio frequency.
AudioResponse audio_frequency_response(const VelocityResponse& velocity, double radius_a, double f_carrier,
                                       const std::vector<double>& f_audio, double z_obs, const Medium& medium,
                                       const VolumeGridOptions& opts = {});

struct AudioCapabilityOptions {
    double f_audio = 1000.0;        // audio tone locating the audio CD
    std::vector<double> z_grid;     // empty: 40 points over [0.2, 4] D_uc
    std::vector<double> f_audio_grid;  // audio FRF at the audio CD; empty skips it
    VolumeGridOptions grid;
    std::optional<double> er_db;    // fixed ER for both primaries instead of computing it per frequency
};

struct AudioCapability {
    double f_carrier = 0.0;
    double f_sideband = 0.0;
    cplx v_carrier;                 // effective piston velocities
    cplx v_sideband;
    double l_pa_c = 0.0;
    double d_ac = 0.0;
    bool warning = false;           // audio CD on the z-grid boundary or truncation tail above 1 %
    AudioCurve curve;
    AudioResponse response;
};

// Carrier at f_r2 with a lower sideband; plate velocities mapped to piston velocities through the ER.
// Throws DomainError for a penalized design.
AudioCapability audio_capability(const DesignModel& model, const DesignPoint& design, const Medium& medium,
                                 const AudioCapabilityOptions& opts = {});

struct SweepGrid {
    std::vector<double> d_uc;
    std::vector<double> f_u0;
    std::vector<int> mode_m;
    std::vector<XdcrConfig> config;
    std::vector<double> r_piezo;
    std::vector<double> r_horn;

    std::size_t size() const;
    DesignParams cell(std::size_t index, const DesignParams& base) const;  // last field varies fastest
};

SweepGrid default_sweep_grid();

inline Nsga2Config small_budget() {
    Nsga2Config c;
    c.population = 16;
    c.generations = 12;
    return c;
}

struct SweepOptions {
    DesignParams base;
    Nsga2Config nsga = small_budget();
    std::pair<double, double> f_dist_window{800.0, 1250.0};
    bool audio = true;
    AudioCapabilityOptions audio_options;
};

struct SweepRow {
    std::size_t cell = 0;
    DesignParams params;
    std::optional<DesignPoint> design;  // empty when infeasible or outside the f_dist window
    std::string status;                 // "ok", or why the cell is empty
    bool warning = false;
};

// Cells run through parallel_for and are returned in grid order.
std::vector<SweepRow> design_sweep(const SweepGrid& grid, const Medium& medium, const SweepOptions& options);

std::string to_string(XdcrConfig config);
XdcrConfig xdcr_config_from_string(const std::string& name);  // "half" or "full"

}  // namespace sppal
