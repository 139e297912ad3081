#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace sppal::cli {
namespace {

using json = nlohmann::json;
using ordered = nlohmann::ordered_json;

// Empty string means the value is acceptable.
using Check = std::function<std::string(double)>;

Check any() {
    return [](double) { return std::string(); };
}
Check positive() {
    return [](double v) { return v > 0.0 ? std::string() : "must be positive"; };
}
Check non_negative() {
    return [](double v) { return v >= 0.0 ? std::string() : "must not be negative"; };
}
Check within(double lo, double hi) {
    return [=](double v) {
        if (v >= lo && v <= hi) return std::string();
        std::ostringstream os;
        os << "must lie in [" << lo << ", " << hi << "]";
        return os.str();
    };
}

class Reader {
public:
    Reader(const json& obj, std::string path, std::vector<std::string>& errors)
        : obj_(obj), path_(std::move(path)), errors_(errors) {}

    void number(const char* key, double& out, const Check& check) {
        const json* v = take(key);
        if (!v) return;
        if (!v->is_number()) return fail(key, "must be a number");
        const double x = v->get<double>();
        if (const std::string m = check(x); !m.empty()) return fail(key, m);
        out = x;
    }

    void integer(const char* key, int& out, int lo, int hi) {
        const json* v = take(key);
        if (!v) return;
        if (!v->is_number_integer()) return fail(key, "must be an integer");
        const auto x = v->get<long long>();
        if (x < lo || x > hi) return fail(key, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
        out = static_cast<int>(x);
    }

    void unsigned64(const char* key, std::uint64_t& out) {
        const json* v = take(key);
        if (!v) return;
        if (!v->is_number_unsigned()) return fail(key, "must be a non-negative integer");
        out = v->get<std::uint64_t>();
    }

    void boolean(const char* key, bool& out) {
        const json* v = take(key);
        if (!v) return;
        if (!v->is_boolean()) return fail(key, "must be true or false");
        out = v->get<bool>();
    }

    void text(const char* key, std::string& out, const std::vector<std::string>& allowed = {}) {
        const json* v = take(key);
        if (!v) return;
        if (!v->is_string()) return fail(key, "must be a string");
        const auto s = v->get<std::string>();
        if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), s) == allowed.end())
            return fail(key, "must be one of " + join(allowed));
        out = s;
    }

    void numbers(const char* key, std::vector<double>& out, const Check& check) {
        const json* v = take(key);
        if (!v) return;
        if (!v->is_array()) return fail(key, "must be an array of numbers");
        std::vector<double> xs;
        for (const auto& e : *v) {
            if (!e.is_number()) return fail(key, "must be an array of numbers");
            if (const std::string m = check(e.get<double>()); !m.empty()) return fail(key, "every entry " + m);
            xs.push_back(e.get<double>());
        }
        out = std::move(xs);
    }

    void integers(const char* key, std::vector<int>& out, int lo, int hi) {
        const json* v = take(key);
        if (!v) return;
        if (!v->is_array()) return fail(key, "must be an array of integers");
        std::vector<int> xs;
        for (const auto& e : *v) {
            if (!e.is_number_integer() || e.get<long long>() < lo || e.get<long long>() > hi)
                return fail(key, "every entry must be an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
            xs.push_back(e.get<int>());
        }
        out = std::move(xs);
    }

    void texts(const char* key, std::vector<std::string>& out, const std::vector<std::string>& allowed) {
        const json* v = take(key);
        if (!v) return;
        if (!v->is_array()) return fail(key, "must be an array of strings");
        std::vector<std::string> xs;
        for (const auto& e : *v) {
            if (!e.is_string() || std::find(allowed.begin(), allowed.end(), e.get<std::string>()) == allowed.end())
                return fail(key, "every entry must be one of " + join(allowed));
            xs.push_back(e.get<std::string>());
        }
        out = std::move(xs);
    }

    template <class Block, class Visit>
    void block(const char* key, Block& out, Visit visit) {
        const json* v = take(key);
        if (!v) return;
        if (!v->is_object()) return fail(key, "must be an object");
        Reader inner(*v, path_ + "." + key, errors_);
        visit(inner, out);
        inner.finish();
    }

    void require(bool ok, const std::string& message) {
        if (!ok) errors_.push_back(path_ + ": " + message);
    }

    void finish() {
        for (const auto& [k, _] : obj_.items())
            if (!seen_.count(k)) errors_.push_back(path_ + "." + k + ": unknown field");
    }

private:
    const json* take(const char* key) {
        seen_.insert(key);
        const auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    void fail(const char* key, const std::string& message) { errors_.push_back(path_ + "." + key + ": " + message); }

    static std::string join(const std::vector<std::string>& xs) {
        std::string s;
        for (const auto& x : xs) s += (s.empty() ? "" : "|") + x;
        return s;
    }

    const json& obj_;
    std::string path_;
    std::vector<std::string>& errors_;
    std::set<std::string> seen_;
};

class Writer {
public:
    explicit Writer(ordered& out) : out_(out) {}

    void number(const char* key, double& v, const Check&) { out_[key] = v; }
    void integer(const char* key, int& v, int, int) { out_[key] = v; }
    void unsigned64(const char* key, std::uint64_t& v) { out_[key] = v; }
    void boolean(const char* key, bool& v) { out_[key] = v; }
    void text(const char* key, std::string& v, const std::vector<std::string>& = {}) { out_[key] = v; }
    void numbers(const char* key, std::vector<double>& v, const Check&) { out_[key] = v; }
    void integers(const char* key, std::vector<int>& v, int, int) { out_[key] = v; }
    void texts(const char* key, std::vector<std::string>& v, const std::vector<std::string>&) { out_[key] = v; }
    void require(bool, const std::string&) {}

    template <class Block, class Visit>
    void block(const char* key, Block& b, Visit visit) {
        ordered inner = ordered::object();
        Writer w(inner);
        visit(w, b);
        out_[key] = std::move(inner);
    }

private:
    ordered& out_;
};

const std::vector<std::string> kMaterials{"aluminum", "stainless_steel", "pzt"};

template <class V>
void visit_medium(V& v, MediumBlock& b) {
    v.number("temperature_c", b.temperature_c, within(-20.0, 50.0));
    v.number("relative_humidity_pct", b.relative_humidity_pct, within(0.0, 100.0));
    v.number("pressure_kpa", b.pressure_kpa, within(1e-9, 200.0));
    v.number("beta", b.beta, positive());
    v.boolean("lossless", b.lossless);
}

template <class V>
void visit_source(V& v, SourceBlock& b) {
    v.text("kind", b.kind, {"piston", "plate"});
    v.number("radius_m", b.radius_m, non_negative());
    v.number("d_uc_m", b.d_uc_m, positive());
    v.number("f_u0_hz", b.f_u0_hz, positive());
    v.number("velocity_m_s", b.velocity_m_s, any());
    v.integer("mode_m", b.mode_m, 1, 64);
    v.text("material", b.material, kMaterials);
    v.text("steps", b.steps, {"none", "all", "practical"});
    v.number("center_velocity_m_s", b.center_velocity_m_s, any());
}

template <class V>
void visit_field(V& v, FieldBlock& b) {
    v.number("f_hz", b.f_hz, non_negative());
    v.number("z_min_m", b.z_min_m, positive());
    v.number("z_max_m", b.z_max_m, positive());
    v.integer("z_points", b.z_points, 2, 1000000);
    v.number("range_m", b.range_m, positive());
    v.number("theta_max_deg", b.theta_max_deg, within(1e-6, 90.0));
    v.integer("theta_points", b.theta_points, 2, 1000000);
    v.require(b.z_min_m < b.z_max_m, "z_min_m must be below z_max_m");
}

template <class V>
void visit_er(V& v, ErBlock& b) {
    v.number("f_min_hz", b.f_min_hz, positive());
    v.number("f_max_hz", b.f_max_hz, positive());
    v.integer("f_points", b.f_points, 1, 100000);
    v.require(b.f_min_hz <= b.f_max_hz, "f_min_hz must not exceed f_max_hz");
}

template <class V>
void visit_response(V& v, ResponseBlock& b) {
    v.text("kind", b.kind, {"flat", "dr", "sr"});
    v.number("f_r1_hz", b.f_r1_hz, positive());
    v.number("f_r2_hz", b.f_r2_hz, positive());
    v.number("f_anti_hz", b.f_anti_hz, positive());
    v.number("eta", b.eta, positive());
    v.require(b.f_r1_hz < b.f_anti_hz && b.f_anti_hz < b.f_r2_hz, "need f_r1_hz < f_anti_hz < f_r2_hz");
}

template <class V>
void visit_pair(V& v, PairBlock& b) {
    v.number("f_carrier_hz", b.f_carrier_hz, non_negative());
    v.number("f_audio_hz", b.f_audio_hz, positive());
    v.numbers("f_audio_grid_hz", b.f_audio_grid_hz, positive());
    v.number("velocity_carrier_m_s", b.velocity_carrier_m_s, any());
    v.number("velocity_sideband_m_s", b.velocity_sideband_m_s, any());
    v.block("response", b.response, [](auto& w, ResponseBlock& r) { visit_response(w, r); });
}

template <class V>
void visit_solver(V& v, SolverBlock& b) {
    v.number("truncation_db", b.truncation_db, positive());
    v.number("beam_radii", b.beam_radii, positive());
    v.number("refine", b.refine, within(1e-3, 10.0));
    v.number("max_growth", b.max_growth, positive());
    v.integer("order", b.order, 1, 32);
    v.number("z_max_m", b.z_max_m, non_negative());
    v.number("r_max_m", b.r_max_m, non_negative());
    v.boolean("warnings_as_errors", b.warnings_as_errors);
}

template <class V>
void visit_audio(V& v, AudioBlock& b) {
    v.number("z_min_m", b.z_min_m, positive());
    v.number("z_max_m", b.z_max_m, positive());
    v.integer("z_points", b.z_points, 3, 100000);
    v.number("range_m", b.range_m, non_negative());
    v.number("theta_max_deg", b.theta_max_deg, within(1e-6, 90.0));
    v.integer("theta_points", b.theta_points, 2, 100000);
    v.number("observation_m", b.observation_m, non_negative());
    v.require(b.z_min_m < b.z_max_m, "z_min_m must be below z_max_m");
}

template <class V>
void visit_contour(V& v, ContourBlock& b) {
    v.numbers("f_u2_hz", b.f_u2_hz, positive());
    v.numbers("d_uc_m", b.d_uc_m, positive());
    v.number("velocity_m_s", b.velocity_m_s, any());
    v.number("f_audio_hz", b.f_audio_hz, positive());
}

template <class V>
void visit_design(V& v, DesignBlock& b) {
    v.number("d_uc_m", b.d_uc_m, positive());
    v.number("f_u0_hz", b.f_u0_hz, positive());
    v.integer("mode_m", b.mode_m, 1, 64);
    v.text("config", b.config, {"half", "full"});
    v.number("r_piezo_m", b.r_piezo_m, positive());
    v.number("l_piezo_m", b.l_piezo_m, non_negative());
    v.number("r_horn_m", b.r_horn_m, positive());
    v.number("drive_voltage_v", b.drive_voltage_v, positive());
    v.number("horn_step_ratio", b.horn_step_ratio, positive());
}

template <class V>
void visit_optimizer(V& v, OptimizerBlock& b) {
    v.integer("population", b.population, 8, 100000);
    v.integer("generations", b.generations, 1, 100000);
    v.unsigned64("seed", b.seed);
    v.number("crossover_prob", b.crossover_prob, within(0.0, 1.0));
    v.number("eta_c", b.eta_c, non_negative());
    v.number("eta_m", b.eta_m, non_negative());
    v.number("mutation_prob", b.mutation_prob, within(0.0, 1.0));
    v.number("f_dist_min_hz", b.f_dist_min_hz, non_negative());
    v.number("f_dist_max_hz", b.f_dist_max_hz, positive());
    v.require(b.population % 2 == 0, "population must be even");
    v.require(b.f_dist_min_hz < b.f_dist_max_hz, "f_dist_min_hz must be below f_dist_max_hz");
}

template <class V>
void visit_sweep(V& v, SweepBlock& b) {
    v.numbers("d_uc_m", b.d_uc_m, positive());
    v.numbers("f_u0_hz", b.f_u0_hz, positive());
    v.integers("mode_m", b.mode_m, 1, 64);
    v.texts("config", b.config, {"half", "full"});
    v.numbers("r_piezo_m", b.r_piezo_m, positive());
    v.numbers("r_horn_m", b.r_horn_m, positive());
    v.integer("population", b.population, 8, 100000);
    v.integer("generations", b.generations, 1, 100000);
    v.boolean("audio", b.audio);
    v.require(b.population % 2 == 0, "population must be even");
}

template <class V>
void visit_cr(V& v, CrBlock& b) {
    v.numbers("modal_frequencies_hz", b.modal_frequencies_hz, positive());
    v.number("audio_min_hz", b.audio_min_hz, non_negative());
    v.number("audio_max_hz", b.audio_max_hz, positive());
    v.number("tolerance_hz", b.tolerance_hz, positive());
    v.numbers("f_audio_grid_hz", b.f_audio_grid_hz, positive());
    v.require(b.audio_min_hz < b.audio_max_hz, "audio_min_hz must be below audio_max_hz");
}

template <class V>
void visit_output(V& v, OutputBlock& b) {
    v.text("directory", b.directory);
    v.text("format", b.format, {"csv", "json", "both"});
}

template <class V, class Block, class Fn>
void optional_block(V& v, const char* key, std::optional<Block>& b, Fn fn, bool reading) {
    if (reading) {
        Block tmp;
        bool present = false;
        v.block(key, tmp, [&](auto& w, Block& x) {
            present = true;
            fn(w, x);
        });
        if (present) b = std::move(tmp);
    } else if (b) {
        v.block(key, *b, fn);
    }
}

template <class V>
void visit_config(V& v, RunConfig& c, bool reading) {
    v.block("medium", c.medium, [](auto& w, MediumBlock& b) { visit_medium(w, b); });
    optional_block(v, "source", c.source, [](auto& w, SourceBlock& b) { visit_source(w, b); }, reading);
    v.block("field", c.field, [](auto& w, FieldBlock& b) { visit_field(w, b); });
    v.block("er", c.er, [](auto& w, ErBlock& b) { visit_er(w, b); });
    optional_block(v, "pair", c.pair, [](auto& w, PairBlock& b) { visit_pair(w, b); }, reading);
    v.block("solver", c.solver, [](auto& w, SolverBlock& b) { visit_solver(w, b); });
    v.block("audio", c.audio, [](auto& w, AudioBlock& b) { visit_audio(w, b); });
    optional_block(v, "contour", c.contour, [](auto& w, ContourBlock& b) { visit_contour(w, b); }, reading);
    optional_block(v, "design", c.design, [](auto& w, DesignBlock& b) { visit_design(w, b); }, reading);
    v.block("optimizer", c.optimizer, [](auto& w, OptimizerBlock& b) { visit_optimizer(w, b); });
    optional_block(v, "sweep", c.sweep, [](auto& w, SweepBlock& b) { visit_sweep(w, b); }, reading);
    optional_block(v, "cr", c.cr, [](auto& w, CrBlock& b) { visit_cr(w, b); }, reading);
    v.block("output", c.output, [](auto& w, OutputBlock& b) { visit_output(w, b); });
}

std::string line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return std::to_string(line) + ":" + std::to_string(col);
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"pc",          "bp",         "er",     "audio-pc", "audio-bp",
                                                "audio-fr",    "cd-contour", "pareto", "sweep",    "cr-screen"};
    return names;
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        // The library reports the byte just past the offending token.
        const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
        throw ConfigError(origin + ":" + line_column(text, at) + ": parse error: " + e.what());
    }
    if (!doc.is_object()) throw ConfigError(origin + ": the configuration must be a JSON object");
    RunConfig config;
    std::vector<std::string> errors;
    Reader root(doc, "config", errors);
    visit_config(root, config, true);
    root.finish();
    if (!errors.empty()) {
        std::string msg = origin + ": invalid configuration";
        for (const auto& e : errors) msg += "\n  " + e;
        throw ConfigError(msg);
    }
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path + ": cannot open configuration file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

void require_blocks(const RunConfig& c, const std::string& command) {
    if (std::find(command_names().begin(), command_names().end(), command) == command_names().end())
        throw ConfigError("unknown command '" + command + "'");
    std::vector<std::string> missing;
    auto need = [&](bool present, const char* name) {
        if (!present) missing.push_back(name);
    };
    if (command == "pc" || command == "bp" || command == "er" || command.rfind("audio-", 0) == 0)
        need(c.source.has_value(), "source");
    if (command.rfind("audio-", 0) == 0) need(c.pair.has_value(), "pair");
    if (command == "er" && c.source && c.source->kind != "plate")
        missing.push_back("source (kind must be \"plate\" for er)");
    if (command == "cd-contour") need(c.contour.has_value(), "contour");
    if (command == "pareto") need(c.design.has_value(), "design");
    if (command == "sweep") need(c.sweep.has_value(), "sweep");
    if (command == "cr-screen") need(c.cr.has_value(), "cr");
    if (missing.empty()) return;
    std::string msg = "command '" + command + "' needs missing configuration blocks:";
    for (const auto& m : missing) msg += "\n  " + m;
    throw ConfigError(msg);
}

nlohmann::ordered_json to_json(const RunConfig& config) {
    RunConfig copy = config;
    ordered out = ordered::object();
    Writer w(out);
    visit_config(w, copy, false);
    return out;
}

std::uint64_t config_hash(const RunConfig& config) {
    const std::string s = to_json(config).dump();
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace sppal::cli
