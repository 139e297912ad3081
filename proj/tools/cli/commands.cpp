#include "commands.hpp"

#include <cmath>
#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "sppal/errors.hpp"
#include "sppal/optimizer.hpp"
#include "sppal/parallel.hpp"

#ifndef SPPAL_VERSION
#define SPPAL_VERSION "unknown"
#endif

namespace sppal::cli {
namespace {

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1.0);
    return out;
}

Medium make_medium(const MediumBlock& b) {
    Medium m = build_medium(b.temperature_c, b.relative_humidity_pct / 100.0, b.pressure_kpa, b.beta);
    return b.lossless ? lossless(m) : m;
}

StepPolicy step_policy(const std::string& s) {
    if (s == "none") return StepPolicy::None;
    if (s == "all") return StepPolicy::AllNegativeZones;
    return StepPolicy::Practical;
}

// The radiating surface plus, for plates, the unit-centre-velocity shape used for ER mapping.
struct Source {
    SourceProfile profile;
    SourceProfile unit_shape;
    bool plate = false;
    double radius = 0.0;
};

Source make_source(const SourceBlock& s, const Medium& medium) {
    Source out;
    if (s.kind == "plate") {
        const PlateSpec plate = size_plate_for(s.f_u0_hz, s.d_uc_m, s.mode_m, material_by_name(s.material), medium);
        const ModeShape mode = plate_mode_shape(plate);
        const auto grid = radial_grid(plate.radius_a, s.f_u0_hz, medium, mode.nodal_radii);
        out.unit_shape = stepped_profile(mode, 1.0, step_policy(s.steps), grid);
        out.profile = scaled(out.unit_shape, s.center_velocity_m_s);
        out.plate = true;
        out.radius = plate.radius_a;
    } else {
        out.radius = s.radius_m > 0.0 ? s.radius_m : aperture_for_cd(s.d_uc_m, s.f_u0_hz, medium);
        out.profile = piston_profile({out.radius, s.velocity_m_s});
        out.unit_shape = piston_profile({out.radius, 1.0});
    }
    return out;
}

VolumeGridOptions grid_options(const SolverBlock& s) {
    VolumeGridOptions o;
    o.truncation_db = s.truncation_db;
    o.beam_radii = s.beam_radii;
    o.refine = s.refine;
    o.max_growth = s.max_growth;
    o.order = s.order;
    o.z_max = s.z_max_m;
    o.r_max = s.r_max_m;
    return o;
}

double carrier(const RunConfig& c) { return c.pair->f_carrier_hz > 0.0 ? c.pair->f_carrier_hz : c.source->f_u0_hz; }

// Effective piston velocity at f: the response shape scaled to the carrier velocity, times the ER for plates.
VelocityResponse velocity_response(const RunConfig& c, const Source& src, const Medium& medium) {
    const PairBlock& p = *c.pair;
    const double fc = carrier(c);
    const double d_uc = c.source->d_uc_m;
    auto er = [=, &medium](double f) {
        return src.plate ? equivalence_ratio(src.unit_shape, medium, f, d_uc).factor() : 1.0;
    };
    if (p.response.kind == "flat") {
        return [=](double f) { return cplx(f == fc ? p.velocity_carrier_m_s : p.velocity_sideband_m_s) * er(f); };
    }
    const ResponseKind kind = p.response.kind == "dr" ? ResponseKind::DR : ResponseKind::SR;
    const PzgParams params{1.0, p.response.f_r1_hz, p.response.f_r2_hz, p.response.f_anti_hz, p.response.eta};
    const double norm = std::abs(pzg_velocity(kind, params, fc));
    return [=](double f) { return p.velocity_carrier_m_s * pzg_velocity(kind, params, f) / norm * er(f); };
}

PrimaryPair primary_pair(const RunConfig& c, const Source& src, const VelocityResponse& v, double f_audio) {
    const auto [f1, f2] = lsb_am_pair(carrier(c), f_audio);
    return make_primary_pair(f1, f2, piston_profile({src.radius, v(f1)}), piston_profile({src.radius, v(f2)}));
}

void field_rows(Table& t, const FieldCurve& curve) {
    const auto spl = curve.spl_db();
    const auto norm = curve.normalized_db();
    for (std::size_t i = 0; i < curve.abscissa.size(); ++i)
        t.rows.push_back({curve.abscissa[i], spl[i], norm[i], curve.pressure[i].real(), curve.pressure[i].imag()});
}

Table cd_table(const AudioCd& cd, double tail) {
    return Table{"cd",
                 {"d_ac_m", "l_pa_c_db", "boundary_warning", "tail_fraction"},
                 {{cd.distance, cd.spl, static_cast<long long>(cd.boundary_warning), tail}}};
}

void note_audio_warnings(RunResult& r, const AudioCurve& curve, const AudioCd* cd) {
    if (curve.truncation_warning())
        r.warnings.push_back("volume truncation tail " + format_number(curve.tail_fraction) + " exceeds 1 %");
    if (cd && cd->boundary_warning) r.warnings.push_back("audio CD sits on the edge of the z grid");
}

RunResult cmd_pc(const RunConfig& c) {
    const Medium m = make_medium(c.medium);
    const Source src = make_source(*c.source, m);
    const double f = c.field.f_hz > 0.0 ? c.field.f_hz : c.source->f_u0_hz;
    const FieldCurve curve =
        propagation_curve(src.profile, m, f, linspace(c.field.z_min_m, c.field.z_max_m, c.field.z_points));
    RunResult r;
    Table t{"", {"z_m", "spl_db", "normalized_db", "p_re_pa", "p_im_pa"}, {}};
    field_rows(t, curve);
    r.tables.push_back(std::move(t));
    return r;
}

RunResult cmd_bp(const RunConfig& c) {
    const Medium m = make_medium(c.medium);
    const Source src = make_source(*c.source, m);
    const double f = c.field.f_hz > 0.0 ? c.field.f_hz : c.source->f_u0_hz;
    const FieldCurve curve = beam_pattern(src.profile, m, f, c.field.range_m,
                                          linspace(0.0, c.field.theta_max_deg, c.field.theta_points));
    RunResult r;
    Table t{"", {"theta_deg", "spl_db", "normalized_db", "p_re_pa", "p_im_pa"}, {}};
    field_rows(t, curve);
    r.tables.push_back(std::move(t));
    r.tables.push_back(Table{"qp",
                             {"quarter_power_half_angle_deg"},
                             {{quarter_power_half_angle(src.profile, m, f, c.field.range_m)}}});
    return r;
}

RunResult cmd_er(const RunConfig& c) {
    const Medium m = make_medium(c.medium);
    const Source src = make_source(*c.source, m);
    RunResult r;
    Table t{"", {"f_hz", "er_db", "factor"}, {}};
    for (double f : linspace(c.er.f_min_hz, c.er.f_max_hz, c.er.f_points)) {
        const EquivalenceRatio er = equivalence_ratio(src.unit_shape, m, f, c.source->d_uc_m);
        t.rows.push_back({f, er.er_db, er.factor()});
    }
    r.tables.push_back(std::move(t));
    return r;
}

// Audio curve on the audio z grid and its critical distance.
std::pair<AudioCurve, AudioCd> audio_curve(const RunConfig& c, const Source& src, const VelocityResponse& v,
                                           const Medium& m) {
    const PrimaryPair pair = primary_pair(c, src, v, c.pair->f_audio_hz);
    AudioCurve curve = audio_propagation_curve(pair, m, linspace(c.audio.z_min_m, c.audio.z_max_m, c.audio.z_points),
                                               grid_options(c.solver));
    const AudioCd cd = find_audio_cd(curve.curve);
    return {std::move(curve), cd};
}

RunResult cmd_audio_pc(const RunConfig& c) {
    const Medium m = make_medium(c.medium);
    const Source src = make_source(*c.source, m);
    const auto [curve, cd] = audio_curve(c, src, velocity_response(c, src, m), m);
    RunResult r;
    Table t{"", {"z_m", "spl_db", "normalized_db", "p_re_pa", "p_im_pa"}, {}};
    field_rows(t, curve.curve);
    r.tables.push_back(std::move(t));
    r.tables.push_back(cd_table(cd, curve.tail_fraction));
    note_audio_warnings(r, curve, &cd);
    return r;
}

RunResult cmd_audio_bp(const RunConfig& c) {
    const Medium m = make_medium(c.medium);
    const Source src = make_source(*c.source, m);
    const VelocityResponse v = velocity_response(c, src, m);
    RunResult r;
    double range = c.audio.range_m;
    if (range <= 0.0) {
        const auto [curve, cd] = audio_curve(c, src, v, m);
        range = cd.distance;
        r.tables.push_back(cd_table(cd, curve.tail_fraction));
        note_audio_warnings(r, curve, &cd);
    }
    const PrimaryPair pair = primary_pair(c, src, v, c.pair->f_audio_hz);
    const AudioCurve bp = audio_beam_pattern(pair, m, range, linspace(0.0, c.audio.theta_max_deg, c.audio.theta_points),
                                             grid_options(c.solver));
    Table t{"", {"theta_deg", "spl_db", "normalized_db", "p_re_pa", "p_im_pa"}, {}};
    field_rows(t, bp.curve);
    r.tables.insert(r.tables.begin(), std::move(t));
    note_audio_warnings(r, bp, nullptr);
    return r;
}

RunResult cmd_audio_fr(const RunConfig& c) {
    const Medium m = make_medium(c.medium);
    const Source src = make_source(*c.source, m);
    const VelocityResponse v = velocity_response(c, src, m);
    RunResult r;
    double z_obs = c.audio.observation_m;
    if (z_obs <= 0.0) {
        const auto [curve, cd] = audio_curve(c, src, v, m);
        z_obs = cd.distance;
        r.tables.push_back(cd_table(cd, curve.tail_fraction));
        note_audio_warnings(r, curve, &cd);
    }
    const AudioResponse fr =
        audio_frequency_response(v, src.radius, carrier(c), c.pair->f_audio_grid_hz, z_obs, m, grid_options(c.solver));
    Table t{"", {"f_audio_hz", "spl_db", "tail_fraction", "z_m"}, {}};
    for (std::size_t i = 0; i < fr.f_audio.size(); ++i) {
        t.rows.push_back({fr.f_audio[i], fr.spl[i], fr.tail_fraction[i], z_obs});
        if (fr.tail_fraction[i] > 0.01)
            r.warnings.push_back("volume truncation tail above 1 % at f_a = " + format_number(fr.f_audio[i]) + " Hz");
    }
    r.tables.insert(r.tables.begin(), std::move(t));
    return r;
}

RunResult cmd_cd_contour(const RunConfig& c) {
    const Medium m = make_medium(c.medium);
    const ContourBlock& k = *c.contour;
    const auto z = linspace(c.audio.z_min_m, c.audio.z_max_m, c.audio.z_points);
    RunResult r;
    Table longform{"", {"d_uc_m", "f_u2_hz", "radius_m", "d_ac_m", "l_pa_c_db", "boundary_warning", "tail_fraction"}, {}};
    Table spl{"l_pa_c", {"d_uc_m"}, {}};
    Table dac{"d_ac", {"d_uc_m"}, {}};
    for (double f : k.f_u2_hz) {
        spl.columns.push_back("f_u2_" + format_number(f));
        dac.columns.push_back("f_u2_" + format_number(f));
    }
    for (double d : k.d_uc_m) {
        std::vector<Cell> spl_row{d}, dac_row{d};
        for (double f : k.f_u2_hz) {
            const double a = aperture_for_cd(d, f, m);
            const auto [f1, f2] = lsb_am_pair(f, k.f_audio_hz);
            const PrimaryPair pair =
                make_primary_pair(f1, f2, piston_profile({a, k.velocity_m_s}), piston_profile({a, k.velocity_m_s}));
            const AudioCurve curve = audio_propagation_curve(pair, m, z, grid_options(c.solver));
            const AudioCd cd = find_audio_cd(curve.curve);
            longform.rows.push_back(
                {d, f, a, cd.distance, cd.spl, static_cast<long long>(cd.boundary_warning), curve.tail_fraction});
            spl_row.push_back(cd.spl);
            dac_row.push_back(cd.distance);
            note_audio_warnings(r, curve, &cd);
        }
        spl.rows.push_back(std::move(spl_row));
        dac.rows.push_back(std::move(dac_row));
    }
    r.tables = {std::move(longform), std::move(spl), std::move(dac)};
    return r;
}

DesignParams design_params(const DesignBlock& d) {
    DesignParams p;
    p.d_uc = d.d_uc_m;
    p.f_u0 = d.f_u0_hz;
    p.mode_m = d.mode_m;
    p.config = xdcr_config_from_string(d.config);
    p.r_piezo = d.r_piezo_m;
    p.l_piezo = d.l_piezo_m;
    p.r_horn = d.r_horn_m;
    p.drive_voltage = d.drive_voltage_v;
    p.materials.horn_step_ratio = d.horn_step_ratio;
    return p;
}

Nsga2Config nsga_config(const OptimizerBlock& o) {
    Nsga2Config n;
    n.population = o.population;
    n.generations = o.generations;
    n.seed = o.seed;
    n.crossover_prob = o.crossover_prob;
    n.eta_c = o.eta_c;
    n.eta_m = o.eta_m;
    n.mutation_prob = o.mutation_prob;
    return n;
}

std::vector<Cell> design_cells(const DesignPoint& p, std::size_t n_x) {
    std::vector<Cell> row{p.objectives.f1,   p.objectives.f2,   p.features.f_r1, p.features.f_r2, p.features.f_m,
                          p.features.v_r1,   p.features.v_r2,   p.features.v_m,  p.f_dist(),
                          static_cast<long long>(p.penalized)};
    for (std::size_t i = 0; i < n_x; ++i) row.push_back(i < p.x.size() ? p.x[i] : std::nan(""));
    return row;
}

std::vector<std::string> design_columns(std::size_t n_x) {
    std::vector<std::string> cols{"f1_m_s", "f2_hz", "f_r1_hz", "f_r2_hz", "f_m_hz",
                                  "v_r1_m_s", "v_r2_m_s", "v_m_m_s", "f_dist_hz", "penalized"};
    for (std::size_t i = 0; i < n_x; ++i) cols.push_back("x" + std::to_string(i + 1) + "_m");
    return cols;
}

RunResult cmd_pareto(const RunConfig& c) {
    const Medium m = make_medium(c.medium);
    const DesignModel model = make_design_model(design_params(*c.design), m);
    const ParetoFront front = optimize_design(model, nsga_config(c.optimizer));
    const std::size_t n_x = model.bounds.x0.size();
    RunResult r;
    r.seed = c.optimizer.seed;
    Table t{"", design_columns(n_x), {}};
    for (const DesignPoint& p : front.points) t.rows.push_back(design_cells(p, n_x));
    Table hv{"hypervolume", {"generation", "hypervolume"}, {}};
    for (std::size_t g = 0; g < front.hypervolume.size(); ++g)
        hv.rows.push_back({static_cast<long long>(g), front.hypervolume[g]});
    Table knee{"knee", design_columns(n_x), {}};
    if (const auto k = select_knee(front, {c.optimizer.f_dist_min_hz, c.optimizer.f_dist_max_hz}))
        knee.rows.push_back(design_cells(*k, n_x));
    else
        r.warnings.push_back("no design inside the f_dist window");
    Table bounds{"bounds", {"segment", "x0_m", "lower_m", "upper_m"}, {}};
    for (std::size_t i = 0; i < n_x; ++i)
        bounds.rows.push_back(
            {static_cast<long long>(i + 1), model.bounds.x0[i], model.bounds.lower[i], model.bounds.upper[i]});
    r.tables = {std::move(t), std::move(hv), std::move(knee), std::move(bounds)};
    return r;
}

RunResult cmd_sweep(const RunConfig& c) {
    const Medium m = make_medium(c.medium);
    const SweepBlock& s = *c.sweep;
    SweepGrid grid{s.d_uc_m, s.f_u0_hz, s.mode_m, {}, s.r_piezo_m, s.r_horn_m};
    for (const auto& name : s.config) grid.config.push_back(xdcr_config_from_string(name));
    SweepOptions opts;
    if (c.design) opts.base = design_params(*c.design);
    opts.nsga = nsga_config(c.optimizer);
    opts.nsga.population = s.population;
    opts.nsga.generations = s.generations;
    opts.f_dist_window = {c.optimizer.f_dist_min_hz, c.optimizer.f_dist_max_hz};
    opts.audio = s.audio;
    opts.audio_options.grid = grid_options(c.solver);
    const auto rows = design_sweep(grid, m, opts);

    RunResult r;
    r.seed = c.optimizer.seed;
    r.notes.push_back("levels come from a 1D transducer model; compare orderings and trends, not absolute SPL");
    Table t{"",
            {"cell", "d_uc_m", "f_u0_hz", "mode_m", "config", "r_piezo_m", "l_piezo_m", "r_horn_m", "status", "warning",
             "f1_m_s", "f2_hz", "f_dist_hz", "l_pa_c_db", "d_ac_m", "x1_m", "x2_m", "x3_m", "x4_m"},
            {}};
    const double nan = std::nan("");
    for (const SweepRow& row : rows) {
        std::vector<Cell> cells{static_cast<long long>(row.cell), row.params.d_uc, row.params.f_u0,
                                static_cast<long long>(row.params.mode_m), to_string(row.params.config),
                                row.params.r_piezo, row.params.l_piezo, row.params.r_horn, row.status,
                                static_cast<long long>(row.warning)};
        if (row.design) {
            const DesignPoint& d = *row.design;
            cells.insert(cells.end(), {d.objectives.f1, d.objectives.f2, d.f_dist(), d.l_pa_c, d.d_ac});
            for (std::size_t i = 0; i < 4; ++i) cells.push_back(i < d.x.size() ? d.x[i] : nan);
        } else {
            for (int i = 0; i < 9; ++i) cells.push_back(nan);
        }
        if (row.warning) r.warnings.push_back("cell " + std::to_string(row.cell) + ": " + row.status);
        t.rows.push_back(std::move(cells));
    }
    r.tables.push_back(std::move(t));
    return r;
}

RunResult cmd_cr_screen(const RunConfig& c) {
    const CrBlock& b = *c.cr;
    const CrScreen screen = cr_screen(b.modal_frequencies_hz, {b.audio_min_hz, b.audio_max_hz}, b.tolerance_hz);
    RunResult r;
    Table flags{"", {"modal_frequency_hz", "f_lo_hz", "f_hi_hz"}, {}};
    for (const CrFlag& f : screen.flags) flags.rows.push_back({f.modal_frequency, f.f_lo, f.f_hi});
    r.tables.push_back(std::move(flags));
    if (!b.f_audio_grid_hz.empty()) {
        Table grid{"grid", {"f_audio_hz", "flagged"}, {}};
        for (double f : b.f_audio_grid_hz) grid.rows.push_back({f, static_cast<long long>(screen.flagged(f))});
        r.tables.push_back(std::move(grid));
    }
    return r;
}

}  // namespace

std::string version() { return SPPAL_VERSION; }

RunResult run_command(const std::string& command, const RunConfig& config) {
    require_blocks(config, command);
    RunResult r;
    if (command == "pc") r = cmd_pc(config);
    else if (command == "bp") r = cmd_bp(config);
    else if (command == "er") r = cmd_er(config);
    else if (command == "audio-pc") r = cmd_audio_pc(config);
    else if (command == "audio-bp") r = cmd_audio_bp(config);
    else if (command == "audio-fr") r = cmd_audio_fr(config);
    else if (command == "cd-contour") r = cmd_cd_contour(config);
    else if (command == "pareto") r = cmd_pareto(config);
    else if (command == "sweep") r = cmd_sweep(config);
    else r = cmd_cr_screen(config);
    r.seed = config.optimizer.seed;
    return r;
}

int run_main(int argc, char** argv) {
    CLI::App app{"Stepped-plate parametric array loudspeaker simulator"};
    app.set_version_flag("--version", version());
    std::string command, config_path, out_dir, format;
    std::optional<std::uint64_t> seed;
    int threads = 0;
    app.add_option("command", command, "Subcommand")->required()->check(CLI::IsMember(command_names()));
    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--out", out_dir, "Output directory (overrides output.directory)");
    app.add_option("--seed", seed, "Optimizer seed (overrides optimizer.seed)");
    app.add_option("--threads", threads, "Worker threads (default: SPPAL_THREADS or 1)")->check(CLI::PositiveNumber);
    app.add_option("--format", format, "Output format (overrides output.format)")
        ->check(CLI::IsMember({"csv", "json", "both"}));
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }
    if (threads > 0) set_thread_count(threads);

    RunConfig config;
    try {
        config = load_config(config_path);
        if (!out_dir.empty()) config.output.directory = out_dir;
        if (!format.empty()) config.output.format = format;
        if (seed) config.optimizer.seed = *seed;
        require_blocks(config, command);
    } catch (const ConfigError& e) {
        std::cerr << "sppal: " << e.what() << "\n";
        return kUsage;
    }

    Metadata meta;
    meta.command = command;
    meta.version = version();
    meta.config_hash = config_hash(config);
    meta.seed = config.optimizer.seed;
    meta.config = to_json(config);
    RunResult result;
    try {
        result = run_command(command, config);
    } catch (const std::exception& e) {
        std::cerr << "sppal: " << command << " failed: " << e.what() << "\n";
        return kFailed;
    }
    meta.warnings = result.warnings;
    meta.notes = result.notes;
    meta.partial = config.solver.warnings_as_errors && !result.warnings.empty();
    try {
        for (const auto& p : write_tables(config.output.directory, result.tables, meta, config.output.format))
            std::cout << p << "\n";
    } catch (const std::exception& e) {
        std::cerr << "sppal: " << e.what() << "\n";
        return kFailed;
    }
    for (const auto& w : result.warnings) std::cerr << "sppal: warning: " << w << "\n";
    return meta.partial ? kWarningsFatal : kOk;
}

}  // namespace sppal::cli
