#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace sppal::cli {

// Parse and validation failures; what() lists every problem, one per line.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MediumBlock {
    double temperature_c = 20.0;
    double relative_humidity_pct = 70.0;
    double pressure_kpa = 101.325;
    double beta = 1.2;
    bool lossless = false;
};

struct SourceBlock {
    std::string kind = "piston";  // piston | plate
    double radius_m = 0.0;        // piston only; 0 derives it from d_uc_m and f_u0_hz
    double d_uc_m = 0.45;
    double f_u0_hz = 60e3;
    double velocity_m_s = 0.1;    // piston normal velocity
    int mode_m = 8;               // plate only
    std::string material = "aluminum";
    std::string steps = "practical";  // none | all | practical
    double center_velocity_m_s = 1.0;
};

struct FieldBlock {
    double f_hz = 0.0;  // 0 uses source.f_u0_hz
    double z_min_m = 0.05;
    double z_max_m = 2.0;
    int z_points = 200;
    double range_m = 2.0;
    double theta_max_deg = 30.0;
    int theta_points = 121;
};

struct ErBlock {
    double f_min_hz = 55e3;
    double f_max_hz = 65e3;
    int f_points = 11;
};

struct ResponseBlock {
    std::string kind = "flat";  // flat | dr | sr
    double f_r1_hz = 59e3;
    double f_r2_hz = 60e3;
    double f_anti_hz = 59.5e3;
    double eta = 0.026;
};

struct PairBlock {
    double f_carrier_hz = 0.0;  // 0 uses source.f_u0_hz
    double f_audio_hz = 1000.0;
    std::vector<double> f_audio_grid_hz{250.0, 500.0, 1000.0, 2000.0, 4000.0};
    double velocity_carrier_m_s = 0.1;
    double velocity_sideband_m_s = 0.1;  // flat response only
    ResponseBlock response;
};

struct SolverBlock {
    double truncation_db = 60.0;
    double beam_radii = 4.0;
    double refine = 1.0;
    double max_growth = 0.15;
    int order = 6;
    double z_max_m = 0.0;
    double r_max_m = 0.0;
    bool warnings_as_errors = false;
};

struct AudioBlock {
    double z_min_m = 0.05;
    double z_max_m = 3.0;
    int z_points = 60;
    double range_m = 0.0;        // audio-bp; 0 uses the audio CD
    double theta_max_deg = 90.0;
    int theta_points = 37;
    double observation_m = 0.0;  // audio-fr; 0 uses the audio CD
};

struct ContourBlock {
    std::vector<double> f_u2_hz{40e3, 50e3, 60e3, 75e3, 90e3};
    std::vector<double> d_uc_m{0.30, 0.35, 0.40, 0.45};
    double velocity_m_s = 0.1;
    double f_audio_hz = 1000.0;
};

struct DesignBlock {
    double d_uc_m = 0.45;
    double f_u0_hz = 60e3;
    int mode_m = 8;
    std::string config = "full";
    double r_piezo_m = 9e-3;
    double l_piezo_m = 0.0;
    double r_horn_m = 0.75e-3;
    double drive_voltage_v = 20.0;
    double horn_step_ratio = 1.0;
};

struct OptimizerBlock {
    int population = 40;
    int generations = 50;
    std::uint64_t seed = 1;
    double crossover_prob = 0.9;
    double eta_c = 15.0;
    double eta_m = 20.0;
    double mutation_prob = 0.0;
    double f_dist_min_hz = 800.0;
    double f_dist_max_hz = 1250.0;
};

struct SweepBlock {
    std::vector<double> d_uc_m{0.30, 0.35, 0.40, 0.45};
    std::vector<double> f_u0_hz{40e3, 50e3, 60e3, 75e3, 90e3};
    std::vector<int> mode_m{6, 8};
    std::vector<std::string> config{"half", "full"};
    std::vector<double> r_piezo_m{7e-3, 9e-3, 11e-3, 13e-3};
    std::vector<double> r_horn_m{0.75e-3, 1.00e-3, 1.25e-3, 1.50e-3};
    int population = 16;
    int generations = 12;
    bool audio = true;
};

struct CrBlock {
    std::vector<double> modal_frequencies_hz;
    double audio_min_hz = 100.0;
    double audio_max_hz = 20e3;
    double tolerance_hz = 100.0;
    std::vector<double> f_audio_grid_hz;
};

struct OutputBlock {
    std::string directory = ".";
    std::string format = "both";  // csv | json | both
};

// Optional blocks stay empty when the file omits them; the others fall back to their defaults.
struct RunConfig {
    MediumBlock medium;
    std::optional<SourceBlock> source;
    FieldBlock field;
    ErBlock er;
    std::optional<PairBlock> pair;
    SolverBlock solver;
    AudioBlock audio;
    std::optional<ContourBlock> contour;
    std::optional<DesignBlock> design;
    OptimizerBlock optimizer;
    std::optional<SweepBlock> sweep;
    std::optional<CrBlock> cr;
    OutputBlock output;
};

const std::vector<std::string>& command_names();

// Strict schema: unknown fields, wrong types and violated ranges are all reported together.
RunConfig parse_config(const std::string& text, const std::string& origin = "<config>");
RunConfig load_config(const std::string& path);

// Throws ConfigError naming every block the command needs but the config lacks.
void require_blocks(const RunConfig& config, const std::string& command);

// Resolved configuration with every default filled in; parse_config(to_json(c).dump()) reproduces c.
nlohmann::ordered_json to_json(const RunConfig& config);

// FNV-1a 64-bit over the compact dump of the resolved configuration.
std::uint64_t config_hash(const RunConfig& config);

}  // namespace sppal::cli
