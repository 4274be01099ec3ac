#include "imcdse/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "imcdse/errors.hpp"

namespace imcdse {

Aggregation aggregation_from_string(const std::string& s) {
    if (s == "max")
        return Aggregation::Max;
    if (s == "all")
        return Aggregation::All;
    if (s == "mean")
        return Aggregation::Mean;
    throw ConfigError("unknown aggregation scheme: " + s);
}

std::string to_string(Aggregation a) {
    switch (a) {
    case Aggregation::Max: return "max";
    case Aggregation::All: return "all";
    case Aggregation::Mean: return "mean";
    }
    return "max";
}

ObjectiveSpec ObjectiveSpec::from_strings(const std::string& objective,
                                          const std::string& aggregation) {
    ObjectiveSpec spec;
    spec.aggregation = aggregation_from_string(aggregation);
    if (objective == "edap")
        spec.terms = {MetricTerm::Energy, MetricTerm::Latency, MetricTerm::Area};
    else if (objective == "edp")
        spec.terms = {MetricTerm::Energy, MetricTerm::Latency};
    else if (objective == "energy")
        spec.terms = {MetricTerm::Energy};
    else if (objective == "latency")
        spec.terms = {MetricTerm::Latency};
    else if (objective == "area")
        spec.terms = {MetricTerm::Area};
    else if (objective == "ed-cost")
        spec.terms = {MetricTerm::Energy, MetricTerm::Latency, MetricTerm::Cost};
    else
        throw ConfigError("unknown objective: " + objective);
    spec.validate();
    return spec;
}

std::string ObjectiveSpec::objective_name() const {
    const bool e = std::count(terms.begin(), terms.end(), MetricTerm::Energy);
    const bool l = std::count(terms.begin(), terms.end(), MetricTerm::Latency);
    const bool a = std::count(terms.begin(), terms.end(), MetricTerm::Area);
    const bool c = std::count(terms.begin(), terms.end(), MetricTerm::Cost);
    if (e && l && a)
        return "edap";
    if (e && l && c)
        return "ed-cost";
    if (e && l)
        return "edp";
    if (e)
        return "energy";
    if (l)
        return "latency";
    if (a)
        return "area";
    return "custom";
}

std::string ObjectiveSpec::unit_string() const {
    std::string s;
    for (MetricTerm t : terms) {
        if (!s.empty())
            s += "*";
        switch (t) {
        case MetricTerm::Energy: s += "mJ"; break;
        case MetricTerm::Latency: s += "ms"; break;
        case MetricTerm::Area: s += "mm^2"; break;
        case MetricTerm::Cost: s += "cost"; break;
        }
    }
    return s;
}

void ObjectiveSpec::validate() const {
    if (terms.empty())
        throw ConfigError("objective needs at least one metric term");
    const bool has_area =
        std::count(terms.begin(), terms.end(), MetricTerm::Area) > 0;
    const bool has_cost =
        std::count(terms.begin(), terms.end(), MetricTerm::Cost) > 0;
    // cost is already proportional to area; pricing both double-counts it
    if (has_area && has_cost)
        throw ConfigError("objective cannot carry both area and cost terms");
    if (!(a_constr_mm2 > 0.0))
        throw ConfigError("area constraint must be positive");
}

bool score_less(const JointScore& a, const JointScore& b) {
    if (a.feasible != b.feasible)
        return a.feasible;
    return a.value < b.value;
}

double aggregate(std::span<const double> values, Aggregation scheme) {
    if (values.empty())
        throw EmptyList("aggregate over empty list");
    switch (scheme) {
    case Aggregation::Max:
        return *std::max_element(values.begin(), values.end());
    case Aggregation::All: {
        double product = 1.0;
        for (double v : values)
            product *= v;
        return product;
    }
    case Aggregation::Mean: {
        double sum = 0.0;
        for (double v : values)
            sum += v;
        return sum / static_cast<double>(values.size());
    }
    }
    throw EmptyList("unreachable");
}

namespace {

struct CostEntry {
    int tech_nm;
    double alpha;
};

// normalized fabrication cost per mm^2, 32 nm = 1
constexpr CostEntry kCostTable[] = {
    {90, 0.413}, {65, 0.477}, {45, 0.606}, {32, 1.0},
    {22, 1.282}, {14, 1.498}, {10, 2.243}, {7, 3.871},
};

} // namespace

double cost_factor(int tech_nm) {
    for (const auto& e : kCostTable)
        if (e.tech_nm == tech_nm)
            return e.alpha;
    throw UnknownTechNode("no cost factor for " + std::to_string(tech_nm) +
                          " nm");
}

double fabrication_cost(double area_mm2, int tech_nm) {
    return cost_factor(tech_nm) * area_mm2;
}

std::vector<int> known_tech_nodes() {
    std::vector<int> nodes;
    for (const auto& e : kCostTable)
        nodes.push_back(e.tech_nm);
    return nodes;
}

JointScore joint_score(const std::vector<std::optional<HwMetrics>>& metrics,
                       double area_mm2, int tech_nm,
                       const HardwareConfig& config,
                       const std::vector<Workload>& workloads,
                       const ObjectiveSpec& spec) {
    JointScore score;
    score.area_mm2 = area_mm2;
    score.per_workload = metrics;

    bool mappable = !metrics.empty();
    for (const auto& m : metrics)
        if (!m)
            mappable = false;
    score.feasible = mappable && area_mm2 <= spec.a_constr_mm2;

    if (!mappable) {
        score.value = std::numeric_limits<double>::infinity();
        return score;
    }

    std::vector<double> energies, latencies;
    energies.reserve(metrics.size());
    latencies.reserve(metrics.size());
    for (const auto& m : metrics) {
        energies.push_back(m->energy_mj);
        latencies.push_back(m->latency_ms);
    }

    double value = 1.0;
    for (MetricTerm t : spec.terms) {
        switch (t) {
        case MetricTerm::Energy:
            value *= aggregate(energies, spec.aggregation);
            break;
        case MetricTerm::Latency:
            value *= aggregate(latencies, spec.aggregation);
            break;
        case MetricTerm::Area:
            value *= area_mm2;
            break;
        case MetricTerm::Cost:
            value *= fabrication_cost(area_mm2, tech_nm);
            break;
        }
    }
    if (spec.accuracy_hook) {
        double acc_product = 1.0;
        for (const auto& w : workloads) {
            const double acc = spec.accuracy_hook(config, w);
            if (!(acc > 0.0) || acc > 1.0)
                throw Error("accuracy hook returned a value outside (0, 1]");
            acc_product *= acc;
        }
        value /= acc_product;
    }
    score.value = value;
    return score;
}

} // namespace imcdse
