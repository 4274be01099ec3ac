#include "imcdse/pareto.hpp"

#include <algorithm>

#include "imcdse/errors.hpp"

namespace imcdse {

bool dominates(const TradePoint& a, const TradePoint& b) {
    if (a.edap > b.edap || a.cost > b.cost)
        return false;
    return a.edap < b.edap || a.cost < b.cost;
}

std::vector<TradePoint> pareto_front(const std::vector<TradePoint>& points) {
    if (points.empty())
        throw EmptyInput("pareto_front over empty input");

    std::vector<const TradePoint*> front;
    for (const auto& p : points) {
        bool dominated = false;
        for (const auto& q : points)
            if (dominates(q, p)) {
                dominated = true;
                break;
            }
        if (dominated)
            continue;
        // collapse exact duplicates on both axes to one representative,
        // keeping the lexicographically smallest gene
        bool replaced_dup = false;
        for (auto& kept : front) {
            if (kept->edap == p.edap && kept->cost == p.cost) {
                if (p.design.gene < kept->design.gene)
                    kept = &p;
                replaced_dup = true;
                break;
            }
        }
        if (!replaced_dup)
            front.push_back(&p);
    }

    std::vector<TradePoint> out;
    out.reserve(front.size());
    for (const auto* p : front)
        out.push_back(*p);
    std::stable_sort(out.begin(), out.end(),
                     [](const TradePoint& a, const TradePoint& b) {
                         if (a.cost != b.cost)
                             return a.cost < b.cost;
                         return a.edap < b.edap;
                     });
    return out;
}

TechSweepResult tech_sweep(const SearchSpace& space,
                           const std::vector<Workload>& workloads,
                           const ObjectiveSpec& objective,
                           const ModelCoefficients& coeffs,
                           const std::vector<PhaseConfig>& phases,
                           const GaSettings& settings) {
    if (!space.find_domain(domain_names::tech_nm))
        throw ConfigError("tech sweep needs a technology-node domain");
    GaSettings sweep_settings = settings;
    sweep_settings.keep_archive = true; // trade points come from the archive
    TechSweepResult result;
    result.run =
        run_joint(space, workloads, objective, coeffs, phases, sweep_settings);

    // every feasible evaluated design becomes a trade point; EDAP uses the
    // max aggregation regardless of the search objective so the axis is
    // comparable across runs
    for (const auto& entry : result.run.archive) {
        if (!entry.score.feasible)
            continue;
        double e_max = 0.0, l_max = 0.0;
        bool complete = true;
        for (const auto& m : entry.score.per_workload) {
            if (!m) {
                complete = false;
                break;
            }
            e_max = std::max(e_max, m->energy_mj);
            l_max = std::max(l_max, m->latency_ms);
        }
        if (!complete)
            continue;
        const HardwareConfig cfg = decode(space, entry.point);
        TradePoint tp;
        tp.design = entry.point;
        tp.edap = e_max * l_max * entry.score.area_mm2;
        tp.cost = fabrication_cost(entry.score.area_mm2, cfg.tech_nm);
        tp.tech_nm = cfg.tech_nm;
        result.points.push_back(std::move(tp));
    }
    if (!result.points.empty())
        result.front = pareto_front(result.points);
    return result;
}

} // namespace imcdse
