#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "imcdse/evaluator.hpp"
#include "imcdse/search_space.hpp"
#include "imcdse/workload.hpp"

namespace imcdse {

enum class Aggregation { Max, All, Mean };

Aggregation aggregation_from_string(const std::string& s);
std::string to_string(Aggregation a);

enum class MetricTerm { Energy, Latency, Area, Cost };

// Optional accuracy provider: (config, workload) -> accuracy in (0, 1].
// Deterministic given its own seeding; the default is the constant 1.
using AccuracyHook =
    std::function<double(const HardwareConfig&, const Workload&)>;

struct ObjectiveSpec {
    std::vector<MetricTerm> terms;
    Aggregation aggregation = Aggregation::Max;
    double a_constr_mm2 = 800.0;
    AccuracyHook accuracy_hook; // empty = constant 1

    // Accepts "edap", "edp", "energy", "latency", "area", "ed-cost".
    static ObjectiveSpec from_strings(const std::string& objective,
                                      const std::string& aggregation);
    std::string objective_name() const;
    std::string unit_string() const; // e.g. "mJ*ms*mm^2"
    void validate() const; // non-empty terms; Area and Cost never both
};

// Score of one design across all workloads. Values carry mixed units and are
// only ever compared, never summed across designs.
struct JointScore {
    double value = 0.0;
    bool feasible = false;
    double area_mm2 = 0.0;
    std::vector<std::optional<HwMetrics>> per_workload;
};

// Infeasible designs sort after every feasible one; ties keep their original
// order through stable sorts.
bool score_less(const JointScore& a, const JointScore& b);

// Max -> max, All -> product, Mean -> arithmetic mean. Throws EmptyList.
double aggregate(std::span<const double> values, Aggregation scheme);

// Normalized fabrication cost factor per Table values; 32 nm is 1.
// Throws UnknownTechNode for nodes outside the table.
double cost_factor(int tech_nm);
double fabrication_cost(double area_mm2, int tech_nm);
std::vector<int> known_tech_nodes();

// Combines per-workload metrics into the joint score. Entries without
// metrics mark an infeasible mapping: the score is infinite and infeasible.
// The area term enters directly (never aggregated); the cost term prices the
// same area at the design's node. An accuracy hook divides by the product of
// per-workload accuracies.
JointScore joint_score(const std::vector<std::optional<HwMetrics>>& metrics,
                       double area_mm2, int tech_nm,
                       const HardwareConfig& config,
                       const std::vector<Workload>& workloads,
                       const ObjectiveSpec& spec);

} // namespace imcdse
