#pragma once

#include <cstdint>
#include <vector>

#include "imcdse/evaluator.hpp"
#include "imcdse/hamming.hpp"
#include "imcdse/objective.hpp"
#include "imcdse/rng.hpp"
#include "imcdse/search_space.hpp"

namespace imcdse {

enum class PoolStage { C1_Random, C2_Diverse, P_GA_Elite };

struct CandidatePool {
    std::vector<DesignPoint> points;
    PoolStage stage = PoolStage::C1_Random;
};

// Count of differing genes. Throws LengthMismatch.
std::uint32_t hamming(const DesignPoint& x, const DesignPoint& y);

// Minimum Hamming distance from x to any member. Throws EmptySet.
std::uint32_t min_distance(const DesignPoint& x,
                           const std::vector<DesignPoint>& set);

// Farthest-point subset selection: starts from c1[0], then repeatedly adds
// the candidate with the largest distance to its nearest selected member.
// Ties break toward the lowest original index. Throws PoolTooSmall when
// p_e exceeds the pool.
CandidatePool greedy_select(const CandidatePool& c1, std::size_t p_e);

// d_min value of each successive greedy pick (first entry is for pick #2);
// used by tests for the non-increasing property.
std::vector<std::uint32_t> greedy_select_trace(const CandidatePool& c1,
                                               std::size_t p_e);

// Mean Hamming distance over all unordered pairs.
double mean_pairwise_distance(const std::vector<DesignPoint>& points);

struct SamplingResult {
    CandidatePool elite;                  // P_GA members, best score first
    std::vector<JointScore> elite_scores; // aligned with elite.points
    CandidatePool c1;
    CandidatePool c2;
    std::vector<JointScore> c2_scores; // aligned with c2.points
    std::uint64_t draw_count = 0;      // random draws spent building C1
    double seconds = 0.0;
};

struct SamplingParams {
    std::size_t p_h = 1000;
    std::size_t p_e = 500;
    std::size_t p_ga = 40;
    int threads = 1;
    // weight-stationary C1 keeps only candidates whose raw cell capacity
    // covers the largest workload; give up after attempt_factor * p_h draws
    std::uint64_t attempt_factor = 100;
    // when true, an exhausted budget falls back to unfiltered random points
    // instead of throwing (used by the sequential baseline stages)
    bool lenient = false;
};

// The full initial-sampling pipeline: C1 random (capacity-filtered in
// weight-stationary mode), C2 by greedy farthest-point selection, then the
// P_GA lowest-scoring feasible members of C2 as the elite population.
SamplingResult initial_population(const SearchSpace& space,
                                  const std::vector<Workload>& workloads,
                                  const ObjectiveSpec& objective,
                                  const ModelCoefficients& coeffs,
                                  const SamplingParams& params, Rng& rng,
                                  EvalCache* cache = nullptr);

} // namespace imcdse
