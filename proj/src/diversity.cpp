#include "imcdse/diversity.hpp"

#include <algorithm>
#include <chrono>
#include <limits>

#include "imcdse/errors.hpp"
#include "imcdse/parallel.hpp"

namespace imcdse {

std::uint32_t hamming(const DesignPoint& x, const DesignPoint& y) {
    if (x.gene.size() != y.gene.size())
        throw LengthMismatch("hamming over unequal gene lengths");
    std::uint32_t d = 0;
    for (std::size_t i = 0; i < x.gene.size(); ++i)
        d += x.gene[i] != y.gene[i];
    return d;
}

std::uint32_t min_distance(const DesignPoint& x,
                           const std::vector<DesignPoint>& set) {
    if (set.empty())
        throw EmptySet("min_distance over empty set");
    std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
    for (const auto& y : set)
        best = std::min(best, hamming(x, y));
    return best;
}

namespace {

// Shared farthest-point walk. Keeps one running d_min per candidate and
// refreshes it with a single kernel sweep per added point.
std::vector<std::size_t> greedy_order(const CandidatePool& c1, std::size_t p_e,
                                      std::vector<std::uint32_t>* trace) {
    if (p_e > c1.points.size())
        throw PoolTooSmall("cannot select " + std::to_string(p_e) +
                           " from a pool of " +
                           std::to_string(c1.points.size()));
    std::vector<std::size_t> picked;
    if (p_e == 0)
        return picked;

    const PackedPool packed = pack_pool(c1.points);
    const std::size_t n = c1.points.size();
    std::vector<std::uint16_t> dist(n);
    std::vector<std::uint32_t> d_min(
        n, std::numeric_limits<std::uint32_t>::max());
    std::vector<bool> taken(n, false);

    picked.push_back(0); // seeded with the first candidate
    taken[0] = true;
    while (picked.size() < p_e) {
        hamming_to_all(c1.points[picked.back()], packed, dist);
        for (std::size_t i = 0; i < n; ++i)
            d_min[i] = std::min(d_min[i], static_cast<std::uint32_t>(dist[i]));
        std::size_t best = n;
        std::uint32_t best_d = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (taken[i])
                continue;
            if (best == n || d_min[i] > best_d) { // ties keep the lowest index
                best = i;
                best_d = d_min[i];
            }
        }
        picked.push_back(best);
        taken[best] = true;
        if (trace)
            trace->push_back(best_d);
    }
    return picked;
}

} // namespace

CandidatePool greedy_select(const CandidatePool& c1, std::size_t p_e) {
    CandidatePool out;
    out.stage = PoolStage::C2_Diverse;
    for (std::size_t i : greedy_order(c1, p_e, nullptr))
        out.points.push_back(c1.points[i]);
    return out;
}

std::vector<std::uint32_t> greedy_select_trace(const CandidatePool& c1,
                                               std::size_t p_e) {
    std::vector<std::uint32_t> trace;
    greedy_order(c1, p_e, &trace);
    return trace;
}

double mean_pairwise_distance(const std::vector<DesignPoint>& points) {
    if (points.size() < 2)
        return 0.0;
    const PackedPool packed = pack_pool(points);
    std::vector<std::uint16_t> dist;
    double sum = 0.0;
    std::uint64_t pairs = 0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        hamming_to_all(points[i], packed, dist);
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            sum += dist[j];
            ++pairs;
        }
    }
    return sum / static_cast<double>(pairs);
}

SamplingResult initial_population(const SearchSpace& space,
                                  const std::vector<Workload>& workloads,
                                  const ObjectiveSpec& objective,
                                  const ModelCoefficients& coeffs,
                                  const SamplingParams& params, Rng& rng,
                                  EvalCache* cache) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();

    if (workloads.empty())
        throw ZeroWorkload("no workloads given");
    if (params.p_e > params.p_h || params.p_ga > params.p_e)
        throw ConfigError("population sizes must satisfy p_ga <= p_e <= p_h");

    SamplingResult result;

    // capacity bar in weight-stationary mode: the largest workload must fit,
    // judged with each candidate's own bits-per-cell setting
    const bool filter = space.mode == SystemMode::WeightStationary;
    std::size_t largest = 0;
    for (std::size_t i = 1; i < workloads.size(); ++i)
        if (required_cells(workloads[i], 1) >
            required_cells(workloads[largest], 1))
            largest = i;

    result.c1.stage = PoolStage::C1_Random;
    const std::uint64_t budget = params.attempt_factor * params.p_h;
    while (result.c1.points.size() < params.p_h) {
        if (result.draw_count >= budget) {
            if (params.lenient) {
                while (result.c1.points.size() < params.p_h)
                    result.c1.points.push_back(space.random_point(rng));
                break;
            }
            throw SamplingExhausted(
                "no " + std::to_string(params.p_h) +
                " capacity-feasible samples within " + std::to_string(budget) +
                " draws; the space looks over-constrained");
        }
        DesignPoint p = space.random_point(rng);
        ++result.draw_count;
        if (filter) {
            const HardwareConfig cfg = decode(space, p);
            if (cell_capacity(cfg) <
                required_cells(workloads[largest], cfg.bits_per_cell))
                continue;
        }
        result.c1.points.push_back(std::move(p));
    }

    result.c2 = greedy_select(result.c1, params.p_e);

    // score every diverse candidate on every workload; parallel across
    // candidates, merged in candidate order
    if (cache)
        prefetch_evaluations(*cache, space, result.c2.points, workloads, coeffs,
                             params.threads);
    result.c2_scores.resize(result.c2.points.size());
    parallel_for(result.c2.points.size(), params.threads, [&](std::size_t i) {
        const DesignPoint& p = result.c2.points[i];
        const HardwareConfig cfg = decode(space, p);
        std::vector<std::optional<HwMetrics>> metrics;
        metrics.reserve(workloads.size());
        for (const auto& w : workloads) {
            metrics.push_back(cache
                                  ? cache->evaluate(space, p, w, coeffs)
                                  : try_evaluate(cfg, w, space.mode, coeffs));
        }
        result.c2_scores[i] = joint_score(metrics, chip_area_mm2(cfg, coeffs),
                                          cfg.tech_nm, cfg, workloads,
                                          objective);
    });

    std::vector<std::size_t> order(result.c2.points.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                         return score_less(result.c2_scores[a],
                                           result.c2_scores[b]);
                     });

    result.elite.stage = PoolStage::P_GA_Elite;
    for (std::size_t k = 0; k < params.p_ga; ++k) {
        result.elite.points.push_back(result.c2.points[order[k]]);
        result.elite_scores.push_back(result.c2_scores[order[k]]);
    }

    result.seconds =
        std::chrono::duration<double>(clock::now() - t0).count();
    return result;
}

} // namespace imcdse
