#include "sppal/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <tuple>

#include "sppal/errors.hpp"
#include "sppal/parallel.hpp"

namespace sppal {
namespace {

constexpr double kSearchStep = 10.0;  // Hz

DesignPoint penalty(const DesignModel& model, const std::vector<double>& x, std::string note) {
    DesignPoint p;
    p.params = model.params;
    p.x = x;
    p.objectives = {0.0, model.band_width()};
    p.penalized = true;
    p.note = std::move(note);
    return p;
}

// Non-dominated fronts as index lists, best first.
std::vector<std::vector<std::size_t>> non_dominated_sort(const std::vector<Candidate>& pop) {
    const std::size_t n = pop.size();
    std::vector<std::vector<std::size_t>> dominated(n);
    std::vector<int> count(n, 0);
    std::vector<std::vector<std::size_t>> fronts(1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (dominates(pop[i].score, pop[j].score))
                dominated[i].push_back(j);
            else if (dominates(pop[j].score, pop[i].score))
                ++count[i];
        }
        if (count[i] == 0) fronts[0].push_back(i);
    }
    while (true) {
        std::vector<std::size_t> next;
        for (std::size_t i : fronts.back())
            for (std::size_t j : dominated[i])
                if (--count[j] == 0) next.push_back(j);
        if (next.empty()) break;
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(next));
    }
    return fronts;
}

void crowding(const std::vector<Candidate>& pop, const std::vector<std::size_t>& front, std::vector<double>& dist) {
    const double inf = std::numeric_limits<double>::infinity();
    for (std::size_t i : front) dist[i] = 0.0;
    if (front.size() <= 2) {
        for (std::size_t i : front) dist[i] = inf;
        return;
    }
    for (int m = 0; m < 2; ++m) {
        std::vector<std::size_t> order = front;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return pop[a].score.f[m] < pop[b].score.f[m]; });
        const double lo = pop[order.front()].score.f[m];
        const double hi = pop[order.back()].score.f[m];
        dist[order.front()] = inf;
        dist[order.back()] = inf;
        if (hi <= lo) continue;
        for (std::size_t k = 1; k + 1 < order.size(); ++k)
            dist[order[k]] += (pop[order[k + 1]].score.f[m] - pop[order[k - 1]].score.f[m]) / (hi - lo);
    }
}

struct Ranked {
    std::vector<int> rank;
    std::vector<double> crowd;
};

Ranked rank_population(const std::vector<Candidate>& pop) {
    Ranked r{std::vector<int>(pop.size(), 0), std::vector<double>(pop.size(), 0.0)};
    const auto fronts = non_dominated_sort(pop);
    for (std::size_t k = 0; k < fronts.size(); ++k) {
        for (std::size_t i : fronts[k]) r.rank[i] = static_cast<int>(k);
        crowding(pop, fronts[k], r.crowd);
    }
    return r;
}

double front_hypervolume(const std::vector<Candidate>& pop, std::array<double, 2> ref) {
    const auto fronts = non_dominated_sort(pop);
    std::vector<std::array<double, 2>> pts;
    for (std::size_t i : fronts[0])
        if (!pop[i].score.penalized) pts.push_back(pop[i].score.f);
    return hypervolume_2d(std::move(pts), ref);
}

// Indices of at most k points of one non-dominated front with the largest joint hypervolume.
// Exact dynamic programme over the front sorted by the first objective.
std::vector<std::size_t> best_hypervolume_subset(const std::vector<Candidate>& pop, std::vector<std::size_t> front,
                                                 std::size_t k, std::array<double, 2> ref) {
    std::erase_if(front, [&](std::size_t i) {
        const auto& f = pop[i].score.f;
        return pop[i].score.penalized || !(f[0] < ref[0] && f[1] < ref[1]);
    });
    std::stable_sort(front.begin(), front.end(), [&](std::size_t a, std::size_t b) {
        return pop[a].score.f < pop[b].score.f;
    });
    const std::size_t n = front.size();
    k = std::min(k, n);
    if (k == n) return front;
    auto x = [&](std::size_t j) { return pop[front[j]].score.f[0]; };
    auto y = [&](std::size_t j) { return pop[front[j]].score.f[1]; };
    const double none = -std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> best(k + 1, std::vector<double>(n, none));
    std::vector<std::vector<std::size_t>> prev(k + 1, std::vector<std::size_t>(n, n));
    for (std::size_t j = 0; j < n; ++j) best[1][j] = (ref[0] - x(j)) * (ref[1] - y(j));
    for (std::size_t c = 2; c <= k; ++c)
        for (std::size_t j = c - 1; j < n; ++j)
            for (std::size_t i = c - 2; i < j; ++i) {
                if (best[c - 1][i] == none) continue;
                const double v = best[c - 1][i] + (ref[0] - x(j)) * (y(i) - y(j));
                if (v > best[c][j]) {
                    best[c][j] = v;
                    prev[c][j] = i;
                }
            }
    std::size_t last = 0;
    for (std::size_t j = 1; j < n; ++j)
        if (best[k][j] > best[k][last]) last = j;
    std::vector<std::size_t> chosen;
    for (std::size_t c = k, j = last; c >= 1; --c) {
        chosen.push_back(front[j]);
        j = prev[c][j];
    }
    return chosen;
}

class Variation {
public:
    Variation(const std::vector<std::pair<double, double>>& bounds, const Nsga2Config& cfg)
        : bounds_(bounds), cfg_(cfg), rng_(cfg.seed),
          pm_(cfg.mutation_prob > 0.0 ? cfg.mutation_prob : 1.0 / static_cast<double>(bounds.size())) {}

    double uniform() { return unit_(rng_); }
    std::size_t index(std::size_t n) { return std::min(n - 1, static_cast<std::size_t>(uniform() * n)); }

    std::vector<double> random_point() {
        std::vector<double> x(bounds_.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] = bounds_[i].first + uniform() * (bounds_[i].second - bounds_[i].first);
        return x;
    }

    // Bounded simulated binary crossover.
    void crossover(std::vector<double>& a, std::vector<double>& b) {
        if (uniform() > cfg_.crossover_prob) return;
        const double e = cfg_.eta_c + 1.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (uniform() > 0.5) continue;
            const double lb = bounds_[i].first, ub = bounds_[i].second;
            if (std::abs(a[i] - b[i]) <= 1e-14 * (ub - lb)) continue;
            const double y1 = std::min(a[i], b[i]), y2 = std::max(a[i], b[i]);
            const double u = uniform();
            auto spread = [&](double beta) {
                const double alpha = 2.0 - std::pow(beta, -e);
                return u <= 1.0 / alpha ? std::pow(u * alpha, 1.0 / e) : std::pow(1.0 / (2.0 - u * alpha), 1.0 / e);
            };
            const double bq1 = spread(1.0 + 2.0 * (y1 - lb) / (y2 - y1));
            const double bq2 = spread(1.0 + 2.0 * (ub - y2) / (y2 - y1));
            double c1 = std::clamp(0.5 * ((y1 + y2) - bq1 * (y2 - y1)), lb, ub);
            double c2 = std::clamp(0.5 * ((y1 + y2) + bq2 * (y2 - y1)), lb, ub);
            if (uniform() <= 0.5) std::swap(c1, c2);
            a[i] = c1;
            b[i] = c2;
        }
    }

    // Bounded polynomial mutation.
    void mutate(std::vector<double>& x) {
        const double e = cfg_.eta_m + 1.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (uniform() > pm_) continue;
            const double lb = bounds_[i].first, ub = bounds_[i].second;
            const double span = ub - lb;
            const double d1 = (x[i] - lb) / span, d2 = (ub - x[i]) / span;
            const double u = uniform();
            double dq;
            if (u < 0.5) {
                const double v = 2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - d1, e);
                dq = std::pow(v, 1.0 / e) - 1.0;
            } else {
                const double v = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(1.0 - d2, e);
                dq = 1.0 - std::pow(v, 1.0 / e);
            }
            x[i] = std::clamp(x[i] + dq * span, lb, ub);
        }
    }

private:
    const std::vector<std::pair<double, double>>& bounds_;
    const Nsga2Config& cfg_;
    std::mt19937_64 rng_;
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
    double pm_;
};

void evaluate_all(const Evaluator& evaluate, std::vector<Candidate>& pop, std::size_t from) {
    parallel_for(pop.size() - from, [&](std::size_t k) { pop[from + k].score = evaluate(pop[from + k].x); });
}

std::vector<double> search_band(double f0) {
    const double lo = 0.9 * f0;
    const auto n = static_cast<std::size_t>(std::floor(0.2 * f0 / kSearchStep + 1e-9)) + 1;
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = lo + kSearchStep * static_cast<double>(i);
    return f;
}

double er_factor(const DesignModel& model, const Medium& medium, double f, const std::optional<double>& er_db) {
    if (er_db) return std::isinf(*er_db) && *er_db < 0.0 ? 0.0 : std::pow(10.0, *er_db / 20.0);
    return equivalence_ratio(model.plate_profile, medium, f, model.params.d_uc).factor();
}

}  // namespace

DesignModel make_design_model(const DesignParams& params, const Medium& medium) {
    detail::require(params.d_uc > 0.0 && params.f_u0 > 0.0, "critical distance and frequency must be positive");
    detail::require(params.drive_voltage > 0.0, "drive voltage must be positive");
    DesignModel m;
    m.params = params;
    m.geometry.config = params.config;
    m.geometry.r_piezo = params.r_piezo;
    m.geometry.l_piezo =
        params.l_piezo > 0.0 ? params.l_piezo : params.materials.piezo.v3E() / params.f_u0 / 6.0;
    m.params.l_piezo = m.geometry.l_piezo;
    m.geometry.r_horn = params.r_horn;
    m.geometry.f_design = params.f_u0;
    m.geometry.materials = params.materials;

    m.plate = size_plate_for(params.f_u0, params.d_uc, params.mode_m, params.plate_material, medium);
    if (params.r_horn >= m.plate.radius_a) throw InfeasibleDesign("horn end is wider than the plate");
    m.mode = plate_mode_shape(m.plate);
    m.plate_profile = stepped_profile(m.mode, 1.0, params.step_policy,
                                      radial_grid(m.plate.radius_a, params.f_u0, medium, m.mode.nodal_radii));
    m.er = equivalence_ratio(m.plate_profile, medium, params.f_u0, params.d_uc);
    m.bounds = langevin_initial_lengths(m.geometry);
    build_stack(m.geometry, m.bounds.x0, params.drive_voltage);  // band checks
    m.freqs = search_band(params.f_u0);
    m.load = plate_load_impedance(m.plate, m.mode, m.er, medium, m.freqs);
    return m;
}

DesignPoint evaluate_design(const DesignModel& model, const std::vector<double>& x) {
    const auto& b = model.bounds;
    if (x.size() != b.x0.size()) throw DomainError("segment length count does not match the configuration");
    for (std::size_t i = 0; i < x.size(); ++i)
        if (!(x[i] >= b.lower[i] && x[i] <= b.upper[i])) throw DomainError("segment length outside its bounds");
    DesignPoint p;
    p.params = model.params;
    p.x = x;
    try {
        const TransducerSpec spec = build_stack(model.geometry, x, model.params.drive_voltage);
        const Frf frf = frf_transfer_matrix(spec, model.load, model.freqs);
        p.features = extract_dr_features(frf);
        p.objectives = objectives(p.features);
    } catch (const NoDualResonance& e) {
        return penalty(model, x, std::string("no dual resonance: ") + e.what());
    } catch (const Error& e) {
        return penalty(model, x, std::string("infeasible: ") + e.what());
    }
    if (!std::isfinite(p.objectives.f1) || !std::isfinite(p.objectives.f2))
        return penalty(model, x, "non-finite objectives");
    return p;
}

DesignPoint evaluate_design(const DesignParams& params, const Medium& medium, const std::vector<double>& x) {
    DesignModel model;
    try {
        model = make_design_model(params, medium);
    } catch (const InfeasibleDesign& e) {
        DesignPoint p;
        p.params = params;
        p.x = x;
        const double f0 = params.f_u0 > 0.0 ? params.f_u0 : 0.0;
        p.objectives = {0.0, 0.2 * f0};
        p.penalized = true;
        p.note = std::string("infeasible: ") + e.what();
        return p;
    }
    return evaluate_design(model, x);
}

bool dominates(const Score& a, const Score& b) {
    if (a.penalized != b.penalized) return !a.penalized;
    return a.f[0] <= b.f[0] && a.f[1] <= b.f[1] && (a.f[0] < b.f[0] || a.f[1] < b.f[1]);
}

double hypervolume_2d(std::vector<std::array<double, 2>> points, std::array<double, 2> reference) {
    std::erase_if(points, [&](const auto& p) { return !(p[0] < reference[0] && p[1] < reference[1]); });
    std::sort(points.begin(), points.end());
    double volume = 0.0;
    double ceiling = reference[1];
    for (const auto& p : points) {
        if (p[1] >= ceiling) continue;
        volume += (reference[0] - p[0]) * (ceiling - p[1]);
        ceiling = p[1];
    }
    return volume;
}

Nsga2Result nsga2(const Evaluator& evaluate, const std::vector<std::pair<double, double>>& bounds,
                  const Nsga2Config& config) {
    detail::require(config.population >= 8 && config.population % 2 == 0, "population must be even and at least 8");
    detail::require(config.generations >= 1, "at least one generation is required");
    detail::require(!bounds.empty(), "at least one variable is required");
    for (const auto& [lo, hi] : bounds) detail::require(lo < hi, "each bound must satisfy lower < upper");
    const auto n_pop = static_cast<std::size_t>(config.population);

    Variation var(bounds, config);
    Nsga2Result out;
    std::vector<Candidate> pop;
    for (const auto& s : config.seeds) {
        if (pop.size() == n_pop) break;
        detail::require(s.size() == bounds.size(), "seed point has the wrong dimension");
        std::vector<double> x = s;
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], bounds[i].first, bounds[i].second);
        pop.push_back({std::move(x), {}});
    }
    while (pop.size() < n_pop) pop.push_back({var.random_point(), {}});
    evaluate_all(evaluate, pop, 0);
    out.evaluations = pop.size();
    if (config.reference) out.hypervolume.push_back(front_hypervolume(pop, *config.reference));

    Ranked ranked = rank_population(pop);
    for (int gen = 0; gen < config.generations; ++gen) {
        auto tournament = [&] {
            const std::size_t a = var.index(n_pop), b = var.index(n_pop);
            if (ranked.rank[a] != ranked.rank[b]) return ranked.rank[a] < ranked.rank[b] ? a : b;
            if (ranked.crowd[a] != ranked.crowd[b]) return ranked.crowd[a] > ranked.crowd[b] ? a : b;
            return std::min(a, b);
        };
        std::vector<Candidate> merged = pop;
        while (merged.size() < 2 * n_pop) {
            std::vector<double> c1 = pop[tournament()].x;
            std::vector<double> c2 = pop[tournament()].x;
            var.crossover(c1, c2);
            var.mutate(c1);
            var.mutate(c2);
            merged.push_back({std::move(c1), {}});
            merged.push_back({std::move(c2), {}});
        }
        evaluate_all(evaluate, merged, n_pop);
        out.evaluations += n_pop;

        // Elitist survival: whole fronts first, the split front by crowding distance.
        const auto fronts = non_dominated_sort(merged);
        std::vector<double> crowd(merged.size(), 0.0);
        std::vector<Candidate> next;
        next.reserve(n_pop);
        for (const auto& front : fronts) {
            crowding(merged, front, crowd);
            if (next.size() + front.size() <= n_pop) {
                for (std::size_t i : front) next.push_back(merged[i]);
                continue;
            }
            std::vector<std::size_t> order;
            if (config.reference && next.empty()) {
                // An overflowing first front keeps its best-hypervolume subset, so the front never loses volume.
                order = best_hypervolume_subset(merged, front, n_pop, *config.reference);
                std::sort(order.begin(), order.end());
            }
            std::vector<std::size_t> rest;
            for (std::size_t i : front)
                if (std::find(order.begin(), order.end(), i) == order.end()) rest.push_back(i);
            std::stable_sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) { return crowd[a] > crowd[b]; });
            order.insert(order.end(), rest.begin(), rest.end());
            for (std::size_t k = 0; next.size() < n_pop; ++k) next.push_back(merged[order[k]]);
            break;
        }
        pop = std::move(next);
        ranked = rank_population(pop);
        if (config.reference) out.hypervolume.push_back(front_hypervolume(pop, *config.reference));
    }

    out.population = pop;
    for (std::size_t i = 0; i < pop.size(); ++i)
        if (ranked.rank[i] == 0) out.front.push_back(pop[i]);
    return out;
}

ParetoFront optimize_design(const DesignModel& model, const Nsga2Config& config) {
    std::vector<std::pair<double, double>> bounds;
    for (std::size_t i = 0; i < model.bounds.x0.size(); ++i) bounds.emplace_back(model.bounds.lower[i], model.bounds.upper[i]);
    Nsga2Config cfg = config;
    cfg.seeds.insert(cfg.seeds.begin(), model.bounds.x0);
    cfg.reference = std::array<double, 2>{0.0, model.band_width()};
    const Evaluator eval = [&](const std::vector<double>& x) {
        const DesignPoint p = evaluate_design(model, x);
        return Score{{p.objectives.f1, p.objectives.f2}, p.penalized};
    };
    const Nsga2Result r = nsga2(eval, bounds, cfg);

    ParetoFront front;
    front.hypervolume = r.hypervolume;
    std::vector<Candidate> unique;
    for (const Candidate& c : r.front) {
        const bool seen = std::any_of(unique.begin(), unique.end(), [&](const Candidate& u) {
            return u.score.f == c.score.f && u.score.penalized == c.score.penalized;
        });
        if (!seen) unique.push_back(c);
    }
    for (const Candidate& c : unique) front.points.push_back(evaluate_design(model, c.x));
    for (const Candidate& c : r.population) front.population.push_back(evaluate_design(model, c.x));
    std::stable_sort(front.points.begin(), front.points.end(), [](const DesignPoint& a, const DesignPoint& b) {
        return a.objectives.f2 < b.objectives.f2;
    });
    return front;
}

std::optional<DesignPoint> select_knee(const ParetoFront& front, std::pair<double, double> window) {
    auto pick = [&](const std::vector<DesignPoint>& points) {
        std::optional<DesignPoint> best;
        for (const DesignPoint& p : points) {
            if (p.penalized || !(p.f_dist() > window.first && p.f_dist() < window.second)) continue;
            if (!best || p.objectives.f1 < best->objectives.f1 ||
                (p.objectives.f1 == best->objectives.f1 && p.objectives.f2 < best->objectives.f2))
                best = p;
        }
        return best;
    };
    std::optional<DesignPoint> best = pick(front.points);
    return best ? best : pick(front.population);
}

AudioResponse audio_frequency_response(const VelocityResponse& velocity, double radius_a, double f_carrier,
                                       const std::vector<double>& f_audio, double z_obs, const Medium& medium,
                                       const VolumeGridOptions& opts) {
    detail::require(z_obs > 0.0, "observation distance must be positive");
    AudioResponse out;
    out.f_audio = f_audio;
    const cplx v_carrier = velocity(f_carrier);
    for (double fa : f_audio) {
        const auto [f1, f2] = lsb_am_pair(f_carrier, fa);
        const PrimaryPair pair = make_primary_pair(f1, f2, piston_profile({radius_a, velocity(f1)}),
                                                   piston_profile({radius_a, v_carrier}));
        const VolumeGrid grid = make_volume_grid(pair, medium, opts);
        const AudioSample s = quasilinear_pressure(pair, medium, FieldPoint{0.0, z_obs}, grid);
        out.spl.push_back(spl_db(s.pressure));
        out.tail_fraction.push_back(s.tail_fraction);
    }
    return out;
}

AudioCapability audio_capability(const DesignModel& model, const DesignPoint& design, const Medium& medium,
                                 const AudioCapabilityOptions& opts) {
    if (design.penalized) throw DomainError("audio capability needs a design with a dual resonance");
    const TransducerSpec spec = build_stack(model.geometry, design.x, model.params.drive_voltage);
    const VelocityResponse velocity = [&](double f) {
        const auto load = plate_load_impedance(model.plate, model.mode, model.er, medium, {f});
        const cplx v = frf_transfer_matrix(spec, load, {f}).center_velocity[0];
        return v * er_factor(model, medium, f, opts.er_db);
    };

    AudioCapability out;
    std::tie(out.f_sideband, out.f_carrier) = lsb_am_pair(design.features.f_r2, opts.f_audio);
    out.v_carrier = velocity(out.f_carrier);
    out.v_sideband = velocity(out.f_sideband);
    const double a = model.plate.radius_a;
    const PrimaryPair pair = make_primary_pair(out.f_sideband, out.f_carrier, piston_profile({a, out.v_sideband}),
                                               piston_profile({a, out.v_carrier}));
    std::vector<double> z = opts.z_grid;
    if (z.empty()) {
        const int n = 40;
        for (int i = 0; i < n; ++i) z.push_back(model.params.d_uc * (0.2 + 3.8 * i / (n - 1.0)));
    }
    out.curve = audio_propagation_curve(pair, medium, z, opts.grid);
    const AudioCd cd = find_audio_cd(out.curve.curve);
    out.d_ac = cd.distance;
    out.l_pa_c = cd.spl;
    out.warning = cd.boundary_warning || out.curve.truncation_warning();
    if (!opts.f_audio_grid.empty()) {
        out.response =
            audio_frequency_response(velocity, a, out.f_carrier, opts.f_audio_grid, out.d_ac, medium, opts.grid);
        for (double t : out.response.tail_fraction) out.warning = out.warning || t > 0.01;
    }
    return out;
}

std::size_t SweepGrid::size() const {
    return d_uc.size() * f_u0.size() * mode_m.size() * config.size() * r_piezo.size() * r_horn.size();
}

DesignParams SweepGrid::cell(std::size_t index, const DesignParams& base) const {
    detail::require(index < size(), "sweep cell index out of range");
    DesignParams p = base;
    auto take = [&](std::size_t n) {
        const std::size_t i = index % n;
        index /= n;
        return i;
    };
    p.r_horn = r_horn[take(r_horn.size())];
    p.r_piezo = r_piezo[take(r_piezo.size())];
    p.config = config[take(config.size())];
    p.mode_m = mode_m[take(mode_m.size())];
    p.f_u0 = f_u0[take(f_u0.size())];
    p.d_uc = d_uc[take(d_uc.size())];
    return p;
}

SweepGrid default_sweep_grid() {
    return SweepGrid{{0.30, 0.35, 0.40, 0.45},
                     {40e3, 50e3, 60e3, 75e3, 90e3},
                     {6, 8},
                     {XdcrConfig::Half, XdcrConfig::Full},
                     piezo_radius_catalog(),
                     horn_end_radius_catalog()};
}

std::vector<SweepRow> design_sweep(const SweepGrid& grid, const Medium& medium, const SweepOptions& options) {
    std::vector<SweepRow> rows(grid.size());
    parallel_for(rows.size(), [&](std::size_t i) {
        SweepRow& row = rows[i];
        row.cell = i;
        row.params = grid.cell(i, options.base);
        DesignModel model;
        try {
            model = make_design_model(row.params, medium);
        } catch (const Error& e) {
            row.status = std::string("infeasible: ") + e.what();
            return;
        }
        row.params = model.params;
        Nsga2Config cfg = options.nsga;
        cfg.seed = options.nsga.seed + i;
        const ParetoFront front = optimize_design(model, cfg);
        std::optional<DesignPoint> knee = select_knee(front, options.f_dist_window);
        if (!knee) {
            row.status = "no design in the f_dist window";
            return;
        }
        row.status = "ok";
        if (options.audio) {
            try {
                const AudioCapability ac = audio_capability(model, *knee, medium, options.audio_options);
                knee->l_pa_c = ac.l_pa_c;
                knee->d_ac = ac.d_ac;
                row.warning = ac.warning;
            } catch (const Error& e) {
                row.status = std::string("audio failed: ") + e.what();
                row.warning = true;
            }
        }
        row.design = std::move(knee);
    });
    return rows;
}

std::string to_string(XdcrConfig config) { return config == XdcrConfig::Full ? "full" : "half"; }

XdcrConfig xdcr_config_from_string(const std::string& name) {
    if (name == "half") return XdcrConfig::Half;
    if (name == "full") return XdcrConfig::Full;
    throw DomainError("transducer configuration must be \"half\" or \"full\": " + name);
}

}  // namespace sppal
