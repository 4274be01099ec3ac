#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "imcdse/ga_engine.hpp"
#include "imcdse/oracle.hpp"
#include "imcdse/pareto.hpp"

#include <nlohmann/json_fwd.hpp>

namespace imcdse {

// Full experiment configuration: command, space, workloads, objective,
// coefficients, population sizes, seed. Enough to reproduce a run.
nlohmann::json make_config_snapshot(const std::string& command,
                                    const SearchSpace& space,
                                    const std::vector<Workload>& workloads,
                                    const ObjectiveSpec& objective,
                                    const ModelCoefficients& coeffs,
                                    const GaSettings& settings);

// Deterministic JSON snapshot of a run: the configuration plus the results.
// Wall-clock timing deliberately lives in a separate file so two runs with
// the same seed produce byte-identical records.
nlohmann::json make_run_record(const std::string& command,
                               const SearchSpace& space,
                               const std::vector<Workload>& workloads,
                               const ObjectiveSpec& objective,
                               const ModelCoefficients& coeffs,
                               const GaSettings& settings,
                               const RunResult& result);

nlohmann::json timing_json(const RunResult& result);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

// convergence CSV: generation,phase,best_score,mean_score,evals
void write_convergence_csv(const std::filesystem::path& path,
                           const RunResult& result);

// trade-point CSV: edap,cost,tech_nm,<domain names...>,on_front
void write_trade_csv(const std::filesystem::path& path,
                     const SearchSpace& space,
                     const std::vector<TradePoint>& points,
                     const std::vector<TradePoint>& front);

// landscape CSV: index,<domain names...>,score,feasible,area_mm2
void write_landscape_csv(const std::filesystem::path& path,
                         const SearchSpace& space, const Landscape& landscape);

std::string format_double(double v); // shortest round-trip representation

} // namespace imcdse
