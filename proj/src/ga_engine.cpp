#include "imcdse/ga_engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <unordered_map>

#include "imcdse/errors.hpp"
#include "imcdse/parallel.hpp"

namespace imcdse {

std::vector<PhaseConfig> default_phases(int g) {
    return {
        {"exploration", 1.0, 3.0, 1.0, 3.0, g},
        {"transition", 0.9, 7.0, 0.5, 7.0, g},
        {"convergence", 1.0, 15.0, 0.2, 15.0, g},
        {"finetuning", 1.0, 25.0, 0.05, 25.0, g},
    };
}

std::vector<PhaseConfig> baseline_phase(int g, std::size_t n_genes) {
    const double p_m = 1.0 / static_cast<double>(std::max<std::size_t>(1, n_genes));
    return {{"baseline", 0.9, 15.0, p_m, 20.0, 4 * g}};
}

std::pair<std::vector<double>, std::vector<double>>
sbx_crossover(const std::vector<double>& a, const std::vector<double>& b,
              double eta_c, double p_c, Rng& rng) {
    if (a.size() != b.size())
        throw LengthMismatch("sbx over unequal parent lengths");
    std::vector<double> c1 = a;
    std::vector<double> c2 = b;
    if (rng.uniform() < p_c) {
        const double exponent = 1.0 / (eta_c + 1.0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double u = rng.uniform();
            const double beta =
                u <= 0.5 ? std::pow(2.0 * u, exponent)
                         : std::pow(1.0 / (2.0 * (1.0 - u)), exponent);
            c1[i] = 0.5 * ((1.0 + beta) * a[i] + (1.0 - beta) * b[i]);
            c2[i] = 0.5 * ((1.0 - beta) * a[i] + (1.0 + beta) * b[i]);
        }
    }
    return {std::move(c1), std::move(c2)};
}

namespace {

std::vector<double> mutate_masked(const SearchSpace& space,
                                  const std::vector<double>& x, double eta_m,
                                  double p_m, double per_gene_prob, Rng& rng,
                                  const std::vector<bool>* active) {
    std::vector<double> out = x;
    if (rng.uniform() >= p_m)
        return out;
    const double exponent = 1.0 / (eta_m + 1.0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (active && !(*active)[i])
            continue;
        if (rng.uniform() >= per_gene_prob)
            continue;
        const std::size_t n = space.domains[i].size();
        if (n < 2)
            continue; // single-option gene has zero range
        const double lo = 0.5;
        const double hi = static_cast<double>(n) - 0.5;
        double y = std::clamp(out[i], lo, hi);
        const double d1 = (y - lo) / (hi - lo);
        const double d2 = (hi - y) / (hi - lo);
        const double u = rng.uniform();
        double dq;
        if (u <= 0.5) {
            const double val =
                2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - d1, eta_m + 1.0);
            dq = std::pow(val, exponent) - 1.0;
        } else {
            const double val = 2.0 * (1.0 - u) +
                               2.0 * (u - 0.5) * std::pow(1.0 - d2, eta_m + 1.0);
            dq = 1.0 - std::pow(val, exponent);
        }
        y += dq * (hi - lo);
        out[i] = std::clamp(y, lo, hi);
    }
    return out;
}

} // namespace

std::vector<double> polynomial_mutation(const SearchSpace& space,
                                        const std::vector<double>& x,
                                        double eta_m, double p_m,
                                        double per_gene_prob, Rng& rng) {
    if (x.size() != space.domains.size())
        throw LengthMismatch("mutation vector length does not match space");
    return mutate_masked(space, x, eta_m, p_m, per_gene_prob, rng, nullptr);
}

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string gene_key(const DesignPoint& p) {
    return {reinterpret_cast<const char*>(p.gene.data()), p.gene.size()};
}

void check_inputs(const SearchSpace& space,
                  const std::vector<Workload>& workloads,
                  const ObjectiveSpec& objective) {
    space.validate();
    objective.validate();
    if (workloads.empty())
        throw ZeroWorkload("no workloads given");
    std::set<std::string> names;
    for (const auto& w : workloads)
        if (!names.insert(w.name).second)
            throw SchemaError("duplicate workload name: " + w.name);
}

// One search run: population state, scoring through the shared cache, the
// generation loop, and result assembly.
class Engine {
  public:
    Engine(const SearchSpace& space, const std::vector<Workload>& workloads,
           const ObjectiveSpec& objective, const ModelCoefficients& coeffs,
           const GaSettings& settings)
        : space_(space), workloads_(workloads), objective_(objective),
          coeffs_(coeffs), settings_(settings), cache_(settings.cache_enabled),
          rng_(settings.seed) {
        check_inputs(space, workloads, objective);
        coeffs.validate();
        if (settings.p_ga == 0)
            throw ConfigError("population size must be at least 1");
    }

    Rng& rng() { return rng_; }
    EvalCache& cache() { return cache_; }

    std::uint64_t eval_count() const {
        return cache_.miss_count() + uncached_calls_;
    }

    JointScore score_one(const DesignPoint& p) {
        const HardwareConfig cfg = decode(space_, p);
        std::vector<std::optional<HwMetrics>> metrics;
        metrics.reserve(workloads_.size());
        for (const auto& w : workloads_) {
            if (cache_.enabled()) {
                metrics.push_back(cache_.evaluate(space_, p, w, coeffs_));
            } else {
                metrics.push_back(try_evaluate(cfg, w, space_.mode, coeffs_));
                ++uncached_calls_;
            }
        }
        return joint_score(metrics, chip_area_mm2(cfg, coeffs_), cfg.tech_nm,
                           cfg, workloads_, objective_);
    }

    void score_population(const std::vector<DesignPoint>& pop,
                          std::vector<JointScore>& out) {
        out.resize(pop.size());
        if (cache_.enabled())
            prefetch_evaluations(cache_, space_, pop, workloads_, coeffs_,
                                 settings_.threads);
        std::uint64_t direct_calls = 0;
        parallel_for(pop.size(), settings_.threads, [&](std::size_t i) {
            const HardwareConfig cfg = decode(space_, pop[i]);
            std::vector<std::optional<HwMetrics>> metrics;
            metrics.reserve(workloads_.size());
            for (const auto& w : workloads_)
                metrics.push_back(
                    cache_.enabled()
                        ? cache_.evaluate(space_, pop[i], w, coeffs_)
                        : try_evaluate(cfg, w, space_.mode, coeffs_));
            out[i] = joint_score(metrics, chip_area_mm2(cfg, coeffs_),
                                 cfg.tech_nm, cfg, workloads_, objective_);
        });
        if (!cache_.enabled())
            direct_calls = pop.size() * workloads_.size();
        uncached_calls_ += direct_calls;
        for (std::size_t i = 0; i < pop.size(); ++i)
            archive_insert(pop[i], out[i]);
    }

    void archive_insert(const DesignPoint& p, const JointScore& s) {
        if (archive_index_.emplace(gene_key(p), archive_.size()).second)
            archive_.push_back({p, s});
    }

    // capacity-filtered random point for weight-stationary spaces; plain
    // random elsewhere or after the attempt budget
    DesignPoint random_feasible(std::uint64_t attempts) {
        if (space_.mode != SystemMode::WeightStationary)
            return space_.random_point(rng_);
        std::size_t largest = 0;
        for (std::size_t i = 1; i < workloads_.size(); ++i)
            if (required_cells(workloads_[i], 1) >
                required_cells(workloads_[largest], 1))
                largest = i;
        for (std::uint64_t k = 0; k < attempts; ++k) {
            DesignPoint p = space_.random_point(rng_);
            const HardwareConfig cfg = decode(space_, p);
            if (cell_capacity(cfg) >=
                required_cells(workloads_[largest], cfg.bits_per_cell))
                return p;
        }
        return space_.random_point(rng_);
    }

    // runs the phase schedule on an already scored population
    void evolve(std::vector<DesignPoint>& pop, std::vector<JointScore>& scores,
                const std::vector<PhaseConfig>& phases,
                std::vector<GenerationStat>& history, int& generation,
                const std::vector<bool>* active_mask = nullptr) {
        const std::size_t p_ga = pop.size();
        int identical_streak = 0;
        for (const auto& phase : phases) {
            const double per_gene =
                1.0 / static_cast<double>(active_gene_count(active_mask));
            for (int g = 0; g < phase.generations; ++g) {
                std::vector<std::size_t> order = sorted_order(scores);
                std::vector<std::size_t> rank_pos(p_ga);
                for (std::size_t r = 0; r < p_ga; ++r)
                    rank_pos[order[r]] = r;

                std::vector<DesignPoint> next;
                next.reserve(p_ga);
                next.push_back(pop[order[0]]); // top-1 elitism
                while (next.size() < p_ga) {
                    const DesignPoint& pa = pop[tournament(rank_pos)];
                    const DesignPoint& pb = pop[tournament(rank_pos)];
                    auto [c1, c2] = sbx_crossover(to_real(pa), to_real(pb),
                                                  phase.eta_c, phase.p_c, rng_);
                    c1 = mutate_masked(space_, c1, phase.eta_m, phase.p_m,
                                       per_gene, rng_, active_mask);
                    c2 = mutate_masked(space_, c2, phase.eta_m, phase.p_m,
                                       per_gene, rng_, active_mask);
                    next.push_back(from_real(space_, c1));
                    if (next.size() < p_ga)
                        next.push_back(from_real(space_, c2));
                }

                // stall guard for degenerate spaces: after 2*G identical
                // generations, refresh one slot per generation
                if (all_identical(pop)) {
                    ++identical_streak;
                    if (phase.generations > 0 &&
                        identical_streak >= 2 * phase.generations &&
                        p_ga > 1 && !active_mask) {
                        next.back() = random_feasible(100);
                        ++degenerate_injections_;
                    }
                } else {
                    identical_streak = 0;
                }

                pop = std::move(next);
                score_population(pop, scores);
                ++generation;
                history.push_back(make_stat(generation, phase.name, scores));
            }
        }
    }

    GenerationStat make_stat(int generation, const std::string& phase,
                             const std::vector<JointScore>& scores) {
        GenerationStat stat;
        stat.generation = generation;
        stat.phase = phase;
        const auto order = sorted_order(scores);
        stat.best_score = scores[order[0]].value;
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& s : scores)
            if (std::isfinite(s.value)) {
                sum += s.value;
                ++n;
            }
        stat.mean_score =
            n > 0 ? sum / static_cast<double>(n)
                  : std::numeric_limits<double>::infinity();
        stat.evals = eval_count();
        return stat;
    }

    RunResult finish(std::vector<GenerationStat> history,
                     const std::vector<PhaseConfig>& schedule,
                     std::uint64_t sampling_evals, double sampling_seconds,
                     double search_seconds, std::uint64_t sampling_draws) {
        RunResult result;
        const auto order = archive_order();
        result.best = archive_[order[0]];
        for (std::size_t i = 0; i < order.size() && result.top_k.size() < 5; ++i)
            result.top_k.push_back(archive_[order[i]]);
        result.history = std::move(history);
        result.eval_count = eval_count();
        result.sampling_evals = sampling_evals;
        result.sampling_seconds = sampling_seconds;
        result.search_seconds = search_seconds;
        result.seed = settings_.seed;
        result.phase_schedule = schedule;
        result.sampling_draws = sampling_draws;
        result.degenerate_injections = degenerate_injections_;
        if (settings_.keep_archive)
            result.archive = archive_;
        return result;
    }

    std::size_t active_gene_count(const std::vector<bool>* mask) const {
        if (!mask)
            return std::max<std::size_t>(1, space_.num_genes());
        std::size_t n = 0;
        for (bool b : *mask)
            n += b;
        return std::max<std::size_t>(1, n);
    }

  private:
    std::size_t tournament(const std::vector<std::size_t>& rank_pos) {
        const std::size_t a = rng_.uniform_index(rank_pos.size());
        const std::size_t b = rng_.uniform_index(rank_pos.size());
        return rank_pos[a] <= rank_pos[b] ? a : b;
    }

    static std::vector<std::size_t>
    sorted_order(const std::vector<JointScore>& scores) {
        std::vector<std::size_t> order(scores.size());
        for (std::size_t i = 0; i < order.size(); ++i)
            order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) {
                             return score_less(scores[a], scores[b]);
                         });
        return order;
    }

    static bool all_identical(const std::vector<DesignPoint>& pop) {
        for (std::size_t i = 1; i < pop.size(); ++i)
            if (!(pop[i] == pop[0]))
                return false;
        return true;
    }

    std::vector<std::size_t> archive_order() const {
        std::vector<std::size_t> order(archive_.size());
        for (std::size_t i = 0; i < order.size(); ++i)
            order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) {
                             return score_less(archive_[a].score,
                                               archive_[b].score);
                         });
        return order;
    }

    const SearchSpace& space_;
    const std::vector<Workload>& workloads_;
    const ObjectiveSpec& objective_;
    const ModelCoefficients& coeffs_;
    GaSettings settings_;
    EvalCache cache_;
    Rng rng_;
    std::uint64_t uncached_calls_ = 0;
    int degenerate_injections_ = 0;
    std::vector<ScoredDesign> archive_;
    std::unordered_map<std::string, std::size_t> archive_index_;
};

} // namespace

RunResult run_joint(const SearchSpace& space,
                    const std::vector<Workload>& workloads,
                    const ObjectiveSpec& objective,
                    const ModelCoefficients& coeffs,
                    const std::vector<PhaseConfig>& phases,
                    const GaSettings& settings) {
    Engine engine(space, workloads, objective, coeffs, settings);

    SamplingParams sampling_params;
    sampling_params.p_h = settings.p_h;
    sampling_params.p_e = settings.p_e;
    sampling_params.p_ga = settings.p_ga;
    sampling_params.threads = settings.threads;

    const auto t0 = clock_type::now();
    SamplingResult sampling =
        initial_population(space, workloads, objective, coeffs,
                           sampling_params, engine.rng(), &engine.cache());
    for (std::size_t i = 0; i < sampling.c2.points.size(); ++i)
        engine.archive_insert(sampling.c2.points[i], sampling.c2_scores[i]);
    const std::uint64_t sampling_evals = engine.eval_count();
    const double sampling_seconds = seconds_since(t0);

    std::vector<DesignPoint> pop = sampling.elite.points;
    std::vector<JointScore> scores = sampling.elite_scores;

    std::vector<GenerationStat> history;
    history.push_back(engine.make_stat(0, "sampling", scores));

    const auto t1 = clock_type::now();
    int generation = 0;
    engine.evolve(pop, scores, phases, history, generation);
    const double search_seconds = seconds_since(t1);

    return engine.finish(std::move(history), phases, sampling_evals,
                         sampling_seconds, search_seconds,
                         sampling.draw_count);
}

RunResult run_baseline_ga(const SearchSpace& space,
                          const std::vector<Workload>& workloads,
                          const ObjectiveSpec& objective,
                          const ModelCoefficients& coeffs,
                          const GaSettings& settings) {
    Engine engine(space, workloads, objective, coeffs, settings);
    const auto schedule =
        baseline_phase(settings.generations, space.num_genes());

    const auto t0 = clock_type::now();
    std::vector<DesignPoint> pop;
    pop.reserve(settings.p_ga);
    for (std::size_t i = 0; i < settings.p_ga; ++i)
        pop.push_back(engine.random_feasible(100));
    std::vector<JointScore> scores;
    engine.score_population(pop, scores);
    const std::uint64_t sampling_evals = engine.eval_count();
    const double sampling_seconds = seconds_since(t0);

    std::vector<GenerationStat> history;
    history.push_back(engine.make_stat(0, "random-init", scores));

    const auto t1 = clock_type::now();
    int generation = 0;
    engine.evolve(pop, scores, schedule, history, generation);
    const double search_seconds = seconds_since(t1);

    return engine.finish(std::move(history), schedule, sampling_evals,
                         sampling_seconds, search_seconds, settings.p_ga);
}

RunResult run_separate(const SearchSpace& space, const Workload& workload,
                       const ObjectiveSpec& objective,
                       const ModelCoefficients& coeffs,
                       const std::vector<PhaseConfig>& phases,
                       const GaSettings& settings) {
    return run_joint(space, {workload}, objective, coeffs, phases, settings);
}

std::size_t largest_workload_index(const std::vector<Workload>& workloads,
                                   SystemMode mode) {
    if (workloads.empty())
        throw ZeroWorkload("no workloads given");
    std::size_t best = 0;
    for (std::size_t i = 1; i < workloads.size(); ++i) {
        const std::uint64_t a =
            mode == SystemMode::WeightSwapping
                ? largest_layer_cells(workloads[i], 1)
                : required_cells(workloads[i], 1);
        const std::uint64_t b =
            mode == SystemMode::WeightSwapping
                ? largest_layer_cells(workloads[best], 1)
                : required_cells(workloads[best], 1);
        if (a > b)
            best = i;
    }
    return best;
}

RunResult run_largest(const SearchSpace& space,
                      const std::vector<Workload>& workloads,
                      const ObjectiveSpec& objective,
                      const ModelCoefficients& coeffs,
                      const std::vector<PhaseConfig>& phases,
                      const GaSettings& settings) {
    const std::size_t idx = largest_workload_index(workloads, space.mode);
    RunResult result = run_separate(space, workloads[idx], objective, coeffs,
                                    phases, settings);

    // winner judged on the full set
    Engine rescorer(space, workloads, objective, coeffs, settings);
    result.best.score = rescorer.score_one(result.best.point);
    for (auto& entry : result.top_k)
        entry.score = rescorer.score_one(entry.point);
    return result;
}

StagePartition sequential_stages() {
    namespace names = domain_names;
    return {
        {"device", {names::bits_per_cell}},
        {"circuit", {names::xbar_rows, names::xbar_cols}},
        {"architecture",
         {names::crossbars_per_tile, names::tiles_per_router,
          names::tile_groups_per_chip, names::glb_bytes}},
        {"system", {names::v_op, names::t_cycle_ns, names::tech_nm}},
    };
}

RunResult run_sequential(const SearchSpace& space,
                         const std::vector<Workload>& workloads,
                         const ObjectiveSpec& objective,
                         const ModelCoefficients& coeffs,
                         SequentialStart start, const GaSettings& settings) {
    return run_sequential(space, workloads, objective, coeffs, start, settings,
                          sequential_stages());
}

RunResult run_sequential(const SearchSpace& space,
                         const std::vector<Workload>& workloads,
                         const ObjectiveSpec& objective,
                         const ModelCoefficients& coeffs,
                         SequentialStart start, const GaSettings& settings,
                         const StagePartition& stage_order) {
    Engine engine(space, workloads, objective, coeffs, settings);

    DesignPoint base = start == SequentialStart::MaxConfig
                           ? space.max_point()
                           : space.median_point();

    std::vector<GenerationStat> history;
    std::vector<PhaseConfig> schedule;
    int generation = 0;
    const auto t0 = clock_type::now();

    for (const auto& [stage_name, stage_domains] : stage_order) {
        std::vector<bool> mask(space.num_genes(), false);
        std::size_t active = 0;
        for (const auto& dname : stage_domains)
            if (auto idx = space.domain_index(dname)) {
                mask[*idx] = true;
                ++active;
            }
        if (active == 0)
            continue; // stage absent from this space

        PhaseConfig phase;
        phase.name = stage_name;
        phase.p_c = 0.9;
        phase.eta_c = 15.0;
        phase.p_m = 1.0 / static_cast<double>(active);
        phase.eta_m = 20.0;
        phase.generations = settings.generations;
        schedule.push_back(phase);

        // stage population: the carried base plus random fills over the
        // active genes, everything else frozen
        std::vector<DesignPoint> pop;
        pop.reserve(settings.p_ga);
        pop.push_back(base);
        while (pop.size() < settings.p_ga) {
            DesignPoint p = base;
            for (std::size_t i = 0; i < mask.size(); ++i)
                if (mask[i])
                    p.gene[i] = static_cast<std::uint8_t>(
                        engine.rng().uniform_index(space.domains[i].size()));
            pop.push_back(std::move(p));
        }
        std::vector<JointScore> scores;
        engine.score_population(pop, scores);
        history.push_back(engine.make_stat(generation, stage_name + "-init",
                                           scores));

        engine.evolve(pop, scores, {phase}, history, generation, &mask);

        // carry the stage winner forward
        std::size_t best = 0;
        for (std::size_t i = 1; i < pop.size(); ++i)
            if (score_less(scores[i], scores[best]))
                best = i;
        base = pop[best];
    }

    const double search_seconds = seconds_since(t0);
    return engine.finish(std::move(history), schedule, 0, 0.0, search_seconds,
                         0);
}

} // namespace imcdse
