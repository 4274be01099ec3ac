#include "imcdse/oracle.hpp"

#include <algorithm>

#include "imcdse/errors.hpp"
#include "imcdse/parallel.hpp"

namespace imcdse {

Landscape exhaustive(const SearchSpace& space,
                     const std::vector<Workload>& workloads,
                     const ObjectiveSpec& objective,
                     const ModelCoefficients& coeffs, std::uint64_t cap,
                     int threads) {
    space.validate();
    objective.validate();
    if (workloads.empty())
        throw ZeroWorkload("no workloads given");
    const std::uint64_t n = space_size(space);
    if (n > cap)
        throw SpaceTooLarge("space of " + std::to_string(n) +
                            " points exceeds the enumeration cap of " +
                            std::to_string(cap));

    Landscape land;
    land.points.resize(n);
    land.scores.resize(n);
    parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
        const DesignPoint p = space.point_at(i);
        const HardwareConfig cfg = decode(space, p);
        std::vector<std::optional<HwMetrics>> metrics;
        metrics.reserve(workloads.size());
        for (const auto& w : workloads)
            metrics.push_back(try_evaluate(cfg, w, space.mode, coeffs));
        land.points[i] = p;
        land.scores[i] = joint_score(metrics, chip_area_mm2(cfg, coeffs),
                                     cfg.tech_nm, cfg, workloads, objective);
    });

    for (std::uint64_t i = 0; i < n; ++i) {
        if (!land.scores[i].feasible)
            continue;
        ++land.feasible_count;
        if (!land.global_min ||
            score_less(land.scores[i], land.scores[*land.global_min]))
            land.global_min = i;
    }
    return land;
}

std::uint64_t rank_of(const DesignPoint& design, const Landscape& landscape) {
    const JointScore* own = nullptr;
    for (std::size_t i = 0; i < landscape.points.size(); ++i)
        if (landscape.points[i] == design) {
            own = &landscape.scores[i];
            break;
        }
    if (!own)
        throw NotInLandscape("design is not part of the landscape");
    std::uint64_t better = 0;
    for (const auto& s : landscape.scores)
        if (s.feasible && score_less(s, *own))
            ++better;
    return better + 1;
}

} // namespace imcdse
