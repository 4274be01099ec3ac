#pragma once

#include <vector>

#include "imcdse/ga_engine.hpp"

namespace imcdse {

// One feasible design on the EDAP-versus-fabrication-cost plane.
struct TradePoint {
    DesignPoint design;
    double edap = 0.0;
    double cost = 0.0;
    int tech_nm = 32;
};

// Weak Pareto dominance: no worse on both axes, strictly better on one.
bool dominates(const TradePoint& a, const TradePoint& b);

// All non-dominated points, sorted by cost ascending. Points identical on
// both axes collapse to the one with the lexicographically smallest gene.
// Throws EmptyInput.
std::vector<TradePoint> pareto_front(const std::vector<TradePoint>& points);

struct TechSweepResult {
    RunResult run;
    std::vector<TradePoint> points; // every feasible evaluated design
    std::vector<TradePoint> front;
};

// Joint search under the cost objective over a space that includes the
// technology node; every feasible evaluated design becomes a trade point.
TechSweepResult tech_sweep(const SearchSpace& space,
                           const std::vector<Workload>& workloads,
                           const ObjectiveSpec& objective,
                           const ModelCoefficients& coeffs,
                           const std::vector<PhaseConfig>& phases,
                           const GaSettings& settings);

} // namespace imcdse
