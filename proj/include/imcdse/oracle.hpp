#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "imcdse/evaluator.hpp"
#include "imcdse/objective.hpp"
#include "imcdse/search_space.hpp"
#include "imcdse/workload.hpp"

namespace imcdse {

// Exhaustive evaluation of a small space: the ground truth the search
// results are judged against.
struct Landscape {
    std::vector<DesignPoint> points; // enumeration order
    std::vector<JointScore> scores;  // aligned with points
    std::optional<std::size_t> global_min; // absent when nothing is feasible
    std::uint64_t feasible_count = 0;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 100000;

// Evaluates every point of the space. Throws SpaceTooLarge past the cap.
Landscape exhaustive(const SearchSpace& space,
                     const std::vector<Workload>& workloads,
                     const ObjectiveSpec& objective,
                     const ModelCoefficients& coeffs,
                     std::uint64_t cap = kDefaultEnumerationCap,
                     int threads = 1);

// 1 + number of feasible entries strictly better than the design's score;
// tied scores share a rank. Throws NotInLandscape.
std::uint64_t rank_of(const DesignPoint& design, const Landscape& landscape);

} // namespace imcdse
