#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "imcdse/search_space.hpp"
#include "imcdse/workload.hpp"

namespace imcdse {

// Hardware metrics for one (design, workload) pair.
struct HwMetrics {
    double energy_mj = 0.0;
    double latency_ms = 0.0;
    double area_mm2 = 0.0;
};

// Coefficients of the analytical performance model. Reference conditions are
// v_ref volts and the 32 nm node; energy scales linearly and area
// quadratically with feature size. Every run record embeds the set in use.
struct ModelCoefficients {
    double e_cell_pj = 0.05;  // per row activation per cell at v_ref, 32 nm
    double e_adc_pj = 1.0;    // per conversion at 32 nm
    double e_buf_pj_per_byte = 1.0;
    double e_router_pj_per_byte = 2.0;
    double e_dram_pj_per_byte = 20.0; // LPDDR4 placeholder
    double a_cell_um2 = 0.25;         // at 32 nm
    double a_adc_mm2 = 0.004;
    double a_periph_mm2 = 0.003; // drivers and buffers, per macro
    double a_router_mm2 = 0.2;
    double a_glb_mm2_per_mib = 0.5;
    double dram_gbps = 25.6; // LPDDR4 placeholder
    double t_min_ns = 1.0;   // fastest cycle at v_ref
    double v_ref = 1.0;

    void validate() const; // all positive, throws SchemaError
};

ModelCoefficients load_coefficients(const std::filesystem::path& path);
ModelCoefficients coefficients_from_json_text(const std::string& text);

// Activations are 8-bit everywhere, applied bit-serially.
inline constexpr int kActivationBits = 8;

// On-chip area in mm^2; workload independent. DRAM is off chip and excluded.
double chip_area_mm2(const HardwareConfig& config,
                     const ModelCoefficients& coeffs);

// Per-evaluation internals surfaced for tests and reports.
struct EvalDetail {
    HwMetrics metrics;
    int swap_rounds = 0;
    std::uint64_t swap_bytes = 0;
    std::uint64_t dram_overflow_bytes = 0; // activation spill past the GLB
};

// Maps the workload onto the configuration and returns energy, latency and
// area. Weight-stationary mode requires every weight to fit on chip and
// throws InfeasibleMapping otherwise; weight-swapping streams weights from
// DRAM in rounds when they do not fit. Throws ZeroWorkload for workloads
// with no weights at all. Pure function of its arguments.
HwMetrics evaluate(const HardwareConfig& config, const Workload& workload,
                   SystemMode mode, const ModelCoefficients& coeffs);
EvalDetail evaluate_detail(const HardwareConfig& config,
                           const Workload& workload, SystemMode mode,
                           const ModelCoefficients& coeffs);

// nullopt instead of InfeasibleMapping; other errors still throw.
std::optional<HwMetrics> try_evaluate(const HardwareConfig& config,
                                      const Workload& workload,
                                      SystemMode mode,
                                      const ModelCoefficients& coeffs);

// Memoizes try_evaluate results on (gene, workload name, mode). Safe for
// concurrent use; inserts are idempotent because evaluation is pure.
// miss_count() is exactly the number of underlying evaluator calls.
class EvalCache {
  public:
    explicit EvalCache(bool enabled = true) : enabled_(enabled) {}

    std::optional<HwMetrics> evaluate(const SearchSpace& space,
                                      const DesignPoint& point,
                                      const Workload& workload,
                                      const ModelCoefficients& coeffs);

    bool contains(const SearchSpace& space, const DesignPoint& point,
                  const Workload& workload) const;
    // records one evaluator call; nullopt marks an infeasible mapping
    void store(const SearchSpace& space, const DesignPoint& point,
               const Workload& workload,
               const std::optional<HwMetrics>& metrics);

    bool enabled() const { return enabled_; }
    std::uint64_t miss_count() const;
    std::uint64_t hit_count() const;

  private:
    static std::string key_of(const SearchSpace& space,
                              const DesignPoint& point,
                              const Workload& workload);

    struct Entry {
        bool feasible;
        HwMetrics metrics;
    };

    bool enabled_;
    mutable std::mutex mutex_;
    std::unordered_map<std::string, Entry> map_;
    std::uint64_t misses_ = 0;
    std::uint64_t hits_ = 0;
};

// Computes every (point, workload) result missing from the cache, in
// parallel, then inserts them in task order. Scoring afterwards is all cache
// hits, so evaluation counts and results never depend on thread scheduling.
void prefetch_evaluations(EvalCache& cache, const SearchSpace& space,
                          const std::vector<DesignPoint>& points,
                          const std::vector<Workload>& workloads,
                          const ModelCoefficients& coeffs, int threads);

} // namespace imcdse
