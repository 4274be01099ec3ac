#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "imcdse/diversity.hpp"
#include "imcdse/evaluator.hpp"
#include "imcdse/objective.hpp"
#include "imcdse/rng.hpp"
#include "imcdse/search_space.hpp"
#include "imcdse/workload.hpp"

namespace imcdse {

// Crossover/mutation schedule for one search phase.
struct PhaseConfig {
    std::string name;
    double p_c = 1.0;   // crossover probability per pair
    double eta_c = 3.0; // SBX distribution index
    double p_m = 1.0;   // mutation probability per individual
    double eta_m = 3.0; // polynomial mutation distribution index
    int generations = 10;
};

// Exploration / Transition / Convergence / Finetuning schedule with the
// standard constants; g generations each.
std::vector<PhaseConfig> default_phases(int g = 10);

// Single-phase schedule used by the plain GA baseline: fixed moderate
// constants and a 4*g generation budget to match the four-phase run.
std::vector<PhaseConfig> baseline_phase(int g, std::size_t n_genes);

// --- variation operators (exposed for testing) ---------------------------

// Simulated binary crossover on gene-center real vectors. With probability
// p_c the pair recombines per gene with spread index eta_c; otherwise the
// children are copies of the parents.
std::pair<std::vector<double>, std::vector<double>>
sbx_crossover(const std::vector<double>& a, const std::vector<double>& b,
              double eta_c, double p_c, Rng& rng);

// Bounded polynomial mutation. The individual mutates with probability p_m;
// inside a mutated individual each gene perturbs with probability
// per_gene_prob within [0.5, n_options - 0.5]. Single-option genes never
// move.
std::vector<double> polynomial_mutation(const SearchSpace& space,
                                        const std::vector<double>& x,
                                        double eta_m, double p_m,
                                        double per_gene_prob, Rng& rng);

// --- run results ----------------------------------------------------------

struct GenerationStat {
    int generation = 0; // 0 is the sampling stage
    std::string phase;
    double best_score = 0.0;
    double mean_score = 0.0;     // mean over members with finite scores
    std::uint64_t evals = 0;     // cumulative evaluator calls (cache misses)
};

struct ScoredDesign {
    DesignPoint point;
    JointScore score;
};

struct RunResult {
    ScoredDesign best;
    std::vector<ScoredDesign> top_k; // best 5 distinct designs, ascending
    std::vector<GenerationStat> history;
    std::uint64_t eval_count = 0;    // total evaluator calls
    std::uint64_t sampling_evals = 0; // spent before the evolution stage
    double sampling_seconds = 0.0;
    double search_seconds = 0.0;
    std::uint64_t seed = 0;
    std::vector<PhaseConfig> phase_schedule;
    std::uint64_t sampling_draws = 0;
    int degenerate_injections = 0;
    // every distinct design evaluated during the run, insertion order
    std::vector<ScoredDesign> archive;
};

struct GaSettings {
    std::size_t p_h = 1000;
    std::size_t p_e = 500;
    std::size_t p_ga = 40;
    int generations = 10; // G, per phase
    std::uint64_t seed = 1;
    int threads = 1;
    bool cache_enabled = true;
    bool keep_archive = true;
};

// The four-phase joint search over all workloads: diversity-based initial
// sampling, then per phase G generations of evaluate, sort, tournament
// selection, SBX, polynomial mutation, with top-1 elitism.
RunResult run_joint(const SearchSpace& space,
                    const std::vector<Workload>& workloads,
                    const ObjectiveSpec& objective,
                    const ModelCoefficients& coeffs,
                    const std::vector<PhaseConfig>& phases,
                    const GaSettings& settings);

// Plain single-phase GA with a purely random feasible initial population of
// P_GA and the evolution budget of the four-phase run.
RunResult run_baseline_ga(const SearchSpace& space,
                          const std::vector<Workload>& workloads,
                          const ObjectiveSpec& objective,
                          const ModelCoefficients& coeffs,
                          const GaSettings& settings);

// Joint search restricted to one workload.
RunResult run_separate(const SearchSpace& space, const Workload& workload,
                       const ObjectiveSpec& objective,
                       const ModelCoefficients& coeffs,
                       const std::vector<PhaseConfig>& phases,
                       const GaSettings& settings);

// Which workload counts as largest: total cell footprint when weights stay
// resident, single-layer footprint when weights swap.
std::size_t largest_workload_index(const std::vector<Workload>& workloads,
                                   SystemMode mode);

// Optimizes for the largest workload only, then re-scores the winner on the
// full set.
RunResult run_largest(const SearchSpace& space,
                      const std::vector<Workload>& workloads,
                      const ObjectiveSpec& objective,
                      const ModelCoefficients& coeffs,
                      const std::vector<PhaseConfig>& phases,
                      const GaSettings& settings);

enum class SequentialStart { MaxConfig, MedianConfig };

using StagePartition =
    std::vector<std::pair<std::string, std::vector<std::string>>>;

// Standard stage partition, in optimization order: device, circuit,
// architecture, system. Stages whose domains are absent from a space are
// skipped.
StagePartition sequential_stages();

// Stage-wise ablation baseline: the stage_order groups are optimized one at
// a time with the other genes frozen, starting from the all-max or
// all-median configuration.
RunResult run_sequential(const SearchSpace& space,
                         const std::vector<Workload>& workloads,
                         const ObjectiveSpec& objective,
                         const ModelCoefficients& coeffs,
                         SequentialStart start, const GaSettings& settings,
                         const StagePartition& stage_order);
RunResult run_sequential(const SearchSpace& space,
                         const std::vector<Workload>& workloads,
                         const ObjectiveSpec& objective,
                         const ModelCoefficients& coeffs,
                         SequentialStart start, const GaSettings& settings);

} // namespace imcdse
