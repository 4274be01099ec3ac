#include "imcdse/run_record.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include "imcdse/errors.hpp"

#include <nlohmann/json.hpp>

namespace imcdse {

namespace {

using nlohmann::json;

json space_json(const SearchSpace& space) {
    json j;
    j["mode"] = to_string(space.mode);
    j["domains"] = json::array();
    for (const auto& d : space.domains)
        j["domains"].push_back({{"name", d.name}, {"options", d.options}});
    json volts = json::object();
    for (const auto& [node, vs] : space.voltage_by_tech)
        volts[std::to_string(node)] = vs;
    j["voltage_by_tech"] = volts;
    return j;
}

json workload_json(const Workload& w) {
    json layers = json::array();
    for (const auto& l : w.layers)
        layers.push_back({{"name", l.name},
                          {"kind", to_string(l.kind)},
                          {"fan_in", l.fan_in},
                          {"fan_out", l.fan_out},
                          {"weight_count", l.weight_count},
                          {"weight_bits", l.weight_bits},
                          {"macs", l.macs},
                          {"in_activations", l.in_activations},
                          {"out_activations", l.out_activations}});
    return {{"name", w.name}, {"layers", layers}};
}

json coeffs_json(const ModelCoefficients& c) {
    return {{"e_cell_pj", c.e_cell_pj},
            {"e_adc_pj", c.e_adc_pj},
            {"e_buf_pj_per_byte", c.e_buf_pj_per_byte},
            {"e_router_pj_per_byte", c.e_router_pj_per_byte},
            {"e_dram_pj_per_byte", c.e_dram_pj_per_byte},
            {"a_cell_um2", c.a_cell_um2},
            {"a_adc_mm2", c.a_adc_mm2},
            {"a_periph_mm2", c.a_periph_mm2},
            {"a_router_mm2", c.a_router_mm2},
            {"a_glb_mm2_per_mib", c.a_glb_mm2_per_mib},
            {"dram_gbps", c.dram_gbps},
            {"t_min_ns", c.t_min_ns},
            {"v_ref", c.v_ref}};
}

json config_json(const HardwareConfig& c) {
    return {{"xbar_rows", c.xbar_rows},
            {"xbar_cols", c.xbar_cols},
            {"crossbars_per_tile", c.crossbars_per_tile},
            {"tiles_per_router", c.tiles_per_router},
            {"tile_groups_per_chip", c.tile_groups_per_chip},
            {"v_op", c.v_op},
            {"t_cycle_ns", c.t_cycle_ns},
            {"glb_bytes", c.glb_bytes},
            {"bits_per_cell", c.bits_per_cell},
            {"tech_nm", c.tech_nm}};
}

json scored_json(const ScoredDesign& d, const SearchSpace& space,
                 const std::vector<Workload>& workloads,
                 const ObjectiveSpec& objective) {
    json j;
    j["gene"] = d.point.gene;
    j["config"] = config_json(decode(space, d.point));
    j["score"] = d.score.value;
    j["unit"] = objective.unit_string();
    j["feasible"] = d.score.feasible;
    j["area_mm2"] = d.score.area_mm2;
    json per = json::array();
    for (std::size_t i = 0; i < d.score.per_workload.size(); ++i) {
        const auto& m = d.score.per_workload[i];
        if (m)
            per.push_back({{"workload", workloads[i].name},
                           {"energy_mj", m->energy_mj},
                           {"latency_ms", m->latency_ms}});
        else
            per.push_back({{"workload", workloads[i].name},
                           {"infeasible", true}});
    }
    j["per_workload"] = per;
    return j;
}

json phases_json(const std::vector<PhaseConfig>& phases) {
    json arr = json::array();
    for (const auto& p : phases)
        arr.push_back({{"name", p.name},
                       {"p_c", p.p_c},
                       {"eta_c", p.eta_c},
                       {"p_m", p.p_m},
                       {"eta_m", p.eta_m},
                       {"generations", p.generations}});
    return arr;
}

} // namespace

nlohmann::json make_config_snapshot(const std::string& command,
                                    const SearchSpace& space,
                                    const std::vector<Workload>& workloads,
                                    const ObjectiveSpec& objective,
                                    const ModelCoefficients& coeffs,
                                    const GaSettings& settings) {
    json j;
    j["command"] = command;
    j["seed"] = settings.seed;
    j["space"] = space_json(space);
    json ws = json::array();
    for (const auto& w : workloads)
        ws.push_back(workload_json(w));
    j["workloads"] = ws;
    j["objective"] = {{"name", objective.objective_name()},
                      {"aggregation", to_string(objective.aggregation)},
                      {"a_constr_mm2", objective.a_constr_mm2},
                      {"unit", objective.unit_string()}};
    j["coefficients"] = coeffs_json(coeffs);
    j["settings"] = {{"p_h", settings.p_h},
                     {"p_e", settings.p_e},
                     {"p_ga", settings.p_ga},
                     {"generations", settings.generations},
                     {"threads", settings.threads},
                     {"cache", settings.cache_enabled}};
    return j;
}

nlohmann::json make_run_record(const std::string& command,
                               const SearchSpace& space,
                               const std::vector<Workload>& workloads,
                               const ObjectiveSpec& objective,
                               const ModelCoefficients& coeffs,
                               const GaSettings& settings,
                               const RunResult& result) {
    json j = make_config_snapshot(command, space, workloads, objective, coeffs,
                                  settings);
    j["seed"] = result.seed;
    j["phases"] = phases_json(result.phase_schedule);

    json r;
    r["best"] = scored_json(result.best, space, workloads, objective);
    json top = json::array();
    for (const auto& d : result.top_k)
        top.push_back(scored_json(d, space, workloads, objective));
    r["top_k"] = top;
    r["eval_count"] = result.eval_count;
    r["sampling_evals"] = result.sampling_evals;
    r["sampling_draws"] = result.sampling_draws;
    r["degenerate_injections"] = result.degenerate_injections;
    json hist = json::array();
    for (const auto& h : result.history)
        hist.push_back({{"generation", h.generation},
                        {"phase", h.phase},
                        {"best_score", h.best_score},
                        {"mean_score", h.mean_score},
                        {"evals", h.evals}});
    r["history"] = hist;
    j["result"] = r;
    return j;
}

nlohmann::json timing_json(const RunResult& result) {
    return {{"sampling_seconds", result.sampling_seconds},
            {"search_seconds", result.search_seconds},
            {"total_seconds",
             result.sampling_seconds + result.search_seconds}};
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write " + path.string());
    out << j.dump(1) << "\n";
}

std::string format_double(double v) {
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    if (std::isnan(v))
        return "nan";
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return {buf, ptr};
}

void write_convergence_csv(const std::filesystem::path& path,
                           const RunResult& result) {
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write " + path.string());
    out << "generation,phase,best_score,mean_score,evals\n";
    for (const auto& h : result.history)
        out << h.generation << "," << h.phase << ","
            << format_double(h.best_score) << ","
            << format_double(h.mean_score) << "," << h.evals << "\n";
}

void write_trade_csv(const std::filesystem::path& path,
                     const SearchSpace& space,
                     const std::vector<TradePoint>& points,
                     const std::vector<TradePoint>& front) {
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write " + path.string());
    out << "edap,cost,tech_nm";
    for (const auto& d : space.domains)
        out << "," << d.name;
    out << ",on_front\n";
    auto on_front = [&](const TradePoint& p) {
        for (const auto& f : front)
            if (f.design == p.design && f.edap == p.edap && f.cost == p.cost)
                return true;
        return false;
    };
    for (const auto& p : points) {
        out << format_double(p.edap) << "," << format_double(p.cost) << ","
            << p.tech_nm;
        for (std::size_t i = 0; i < space.domains.size(); ++i)
            out << ","
                << format_double(space.domains[i].options[p.design.gene[i]]);
        out << "," << (on_front(p) ? 1 : 0) << "\n";
    }
}

void write_landscape_csv(const std::filesystem::path& path,
                         const SearchSpace& space,
                         const Landscape& landscape) {
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write " + path.string());
    out << "index";
    for (const auto& d : space.domains)
        out << "," << d.name;
    out << ",score,feasible,area_mm2\n";
    for (std::size_t i = 0; i < landscape.points.size(); ++i) {
        out << i;
        for (std::size_t g = 0; g < space.domains.size(); ++g)
            out << ","
                << format_double(
                       space.domains[g].options[landscape.points[i].gene[g]]);
        const auto& s = landscape.scores[i];
        out << "," << format_double(s.value) << "," << (s.feasible ? 1 : 0)
            << "," << format_double(s.area_mm2) << "\n";
    }
}

} // namespace imcdse
