#include "imcdse/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "imcdse/errors.hpp"
#include "imcdse/parallel.hpp"

#include <nlohmann/json.hpp>

namespace imcdse {

void ModelCoefficients::validate() const {
    const double vals[] = {e_cell_pj,   e_adc_pj,     e_buf_pj_per_byte,
                           e_router_pj_per_byte,      e_dram_pj_per_byte,
                           a_cell_um2,  a_adc_mm2,    a_periph_mm2,
                           a_router_mm2, a_glb_mm2_per_mib,
                           dram_gbps,   t_min_ns,     v_ref};
    for (double v : vals)
        if (!(v > 0.0) || !std::isfinite(v))
            throw SchemaError("model coefficients must all be positive");
}

ModelCoefficients coefficients_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("coefficients JSON: ") + e.what());
    }
    ModelCoefficients c;
    auto read = [&](const char* name, double& field) {
        if (j.contains(name))
            field = j.at(name).get<double>();
    };
    read("e_cell_pj", c.e_cell_pj);
    read("e_adc_pj", c.e_adc_pj);
    read("e_buf_pj_per_byte", c.e_buf_pj_per_byte);
    read("e_router_pj_per_byte", c.e_router_pj_per_byte);
    read("e_dram_pj_per_byte", c.e_dram_pj_per_byte);
    read("a_cell_um2", c.a_cell_um2);
    read("a_adc_mm2", c.a_adc_mm2);
    read("a_periph_mm2", c.a_periph_mm2);
    read("a_router_mm2", c.a_router_mm2);
    read("a_glb_mm2_per_mib", c.a_glb_mm2_per_mib);
    read("dram_gbps", c.dram_gbps);
    read("t_min_ns", c.t_min_ns);
    read("v_ref", c.v_ref);
    c.validate();
    return c;
}

ModelCoefficients load_coefficients(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open coefficients file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return coefficients_from_json_text(ss.str());
}

double chip_area_mm2(const HardwareConfig& config,
                     const ModelCoefficients& coeffs) {
    const double n_xbar = static_cast<double>(config.crossbars_per_tile) *
                          static_cast<double>(config.tiles_per_router) *
                          static_cast<double>(config.tile_groups_per_chip);
    const double n_router = static_cast<double>(config.tile_groups_per_chip);
    const double s = (config.tech_nm / 32.0) * (config.tech_nm / 32.0);
    const double macro =
        static_cast<double>(config.xbar_rows) *
            static_cast<double>(config.xbar_cols) * coeffs.a_cell_um2 * 1e-6 +
        coeffs.a_adc_mm2 + coeffs.a_periph_mm2;
    const double glb_mib = static_cast<double>(config.glb_bytes) / 1048576.0;
    return n_xbar * macro * s + n_router * coeffs.a_router_mm2 * s +
           glb_mib * coeffs.a_glb_mm2_per_mib * s;
}

namespace {

std::uint64_t cells_for(const LayerSpec& l, int bits_per_cell) {
    const std::uint64_t cpw =
        (l.weight_bits + bits_per_cell - 1) / bits_per_cell;
    return l.weight_count * cpw;
}

std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) {
    return (a + b - 1) / b;
}

} // namespace

EvalDetail evaluate_detail(const HardwareConfig& config,
                           const Workload& workload, SystemMode mode,
                           const ModelCoefficients& coeffs) {
    if (workload.layers.empty() || workload.total_weights() == 0)
        throw ZeroWorkload("workload " + workload.name + " carries no weights");

    const int bpc =
        mode == SystemMode::WeightSwapping ? 1 : config.bits_per_cell;
    const std::uint64_t capacity = cell_capacity(config);
    std::uint64_t required = 0;
    for (const auto& l : workload.layers)
        required += cells_for(l, bpc);
    if (mode == SystemMode::WeightStationary && required > capacity)
        throw InfeasibleMapping("workload " + workload.name +
                                " needs " + std::to_string(required) +
                                " cells, capacity " + std::to_string(capacity));

    const double k_tech = config.tech_nm / 32.0;
    const double v_ratio = config.v_op / coeffs.v_ref;
    const double t_eff =
        std::max(config.t_cycle_ns, coeffs.t_min_ns / v_ratio);
    const double rows = static_cast<double>(config.xbar_rows);
    const double cols = static_cast<double>(config.xbar_cols);

    double energy_pj = 0.0;
    double latency_ns = 0.0;
    std::uint64_t overflow_bytes = 0;

    for (const auto& l : workload.layers) {
        if (l.weight_count > 0) {
            const std::uint64_t cpw =
                (l.weight_bits + bpc - 1) / bpc;
            const double folds =
                static_cast<double>(ceil_div(l.fan_in, config.xbar_rows)) *
                static_cast<double>(
                    ceil_div(l.fan_out * cpw, config.xbar_cols));
            const double passes = static_cast<double>(l.macs) /
                                  static_cast<double>(l.weight_count) *
                                  kActivationBits;
            // one ADC per macro serializes the columns; folds run in parallel
            latency_ns += passes * cols * t_eff;
            energy_pj += folds * passes *
                         (rows * coeffs.e_cell_pj * v_ratio * v_ratio * k_tech +
                          cols * coeffs.e_adc_pj * k_tech);
        }
        // 8-bit activations: one byte per element through buffer and router
        const std::uint64_t act_bytes = l.in_activations + l.out_activations;
        energy_pj += static_cast<double>(act_bytes) *
                     (coeffs.e_buf_pj_per_byte + coeffs.e_router_pj_per_byte);
        if (act_bytes > config.glb_bytes) {
            const std::uint64_t excess = act_bytes - config.glb_bytes;
            overflow_bytes += excess;
            energy_pj += static_cast<double>(excess) * coeffs.e_dram_pj_per_byte;
            latency_ns += static_cast<double>(excess) / coeffs.dram_gbps;
        }
    }

    EvalDetail detail;
    if (mode == SystemMode::WeightSwapping && required > capacity) {
        // weights stream per inference: greedy in-order rounds by cell count
        std::uint64_t round_cells = 0;
        int rounds = 0;
        std::uint64_t swap_bytes = 0;
        for (const auto& l : workload.layers) {
            if (l.weight_count == 0)
                continue;
            const std::uint64_t lc = cells_for(l, bpc);
            if (round_cells > 0 && round_cells + lc > capacity) {
                ++rounds;
                round_cells = 0;
            }
            round_cells += lc;
            swap_bytes += ceil_div(l.weight_count * l.weight_bits, 8);
        }
        if (round_cells > 0)
            ++rounds;
        detail.swap_rounds = rounds;
        detail.swap_bytes = swap_bytes;
        energy_pj += static_cast<double>(swap_bytes) * coeffs.e_dram_pj_per_byte;
        latency_ns += static_cast<double>(swap_bytes) / coeffs.dram_gbps;
    }

    detail.dram_overflow_bytes = overflow_bytes;
    detail.metrics.energy_mj = energy_pj * 1e-9;
    detail.metrics.latency_ms = latency_ns * 1e-6;
    detail.metrics.area_mm2 = chip_area_mm2(config, coeffs);
    return detail;
}

HwMetrics evaluate(const HardwareConfig& config, const Workload& workload,
                   SystemMode mode, const ModelCoefficients& coeffs) {
    return evaluate_detail(config, workload, mode, coeffs).metrics;
}

std::optional<HwMetrics> try_evaluate(const HardwareConfig& config,
                                      const Workload& workload,
                                      SystemMode mode,
                                      const ModelCoefficients& coeffs) {
    try {
        return evaluate(config, workload, mode, coeffs);
    } catch (const InfeasibleMapping&) {
        return std::nullopt;
    }
}

std::string EvalCache::key_of(const SearchSpace& space,
                              const DesignPoint& point,
                              const Workload& workload) {
    std::string key;
    key.reserve(point.gene.size() + workload.name.size() + 2);
    key.append(reinterpret_cast<const char*>(point.gene.data()),
               point.gene.size());
    key.push_back(space.mode == SystemMode::WeightStationary ? 'S' : 'W');
    key.push_back('|');
    key.append(workload.name);
    return key;
}

std::optional<HwMetrics> EvalCache::evaluate(const SearchSpace& space,
                                             const DesignPoint& point,
                                             const Workload& workload,
                                             const ModelCoefficients& coeffs) {
    std::string key;
    if (enabled_) {
        key = key_of(space, point, workload);
        std::lock_guard lock(mutex_);
        auto it = map_.find(key);
        if (it != map_.end()) {
            ++hits_;
            if (!it->second.feasible)
                return std::nullopt;
            return it->second.metrics;
        }
    }
    const auto config = decode(space, point);
    auto metrics = try_evaluate(config, workload, space.mode, coeffs);
    {
        std::lock_guard lock(mutex_);
        ++misses_;
        if (enabled_)
            map_[key] = Entry{metrics.has_value(),
                              metrics.value_or(HwMetrics{})};
    }
    return metrics;
}

bool EvalCache::contains(const SearchSpace& space, const DesignPoint& point,
                         const Workload& workload) const {
    if (!enabled_)
        return false;
    std::lock_guard lock(mutex_);
    return map_.count(key_of(space, point, workload)) > 0;
}

void EvalCache::store(const SearchSpace& space, const DesignPoint& point,
                      const Workload& workload,
                      const std::optional<HwMetrics>& metrics) {
    std::lock_guard lock(mutex_);
    ++misses_;
    if (enabled_)
        map_[key_of(space, point, workload)] =
            Entry{metrics.has_value(), metrics.value_or(HwMetrics{})};
}

std::uint64_t EvalCache::miss_count() const {
    std::lock_guard lock(mutex_);
    return misses_;
}

std::uint64_t EvalCache::hit_count() const {
    std::lock_guard lock(mutex_);
    return hits_;
}

void prefetch_evaluations(EvalCache& cache, const SearchSpace& space,
                          const std::vector<DesignPoint>& points,
                          const std::vector<Workload>& workloads,
                          const ModelCoefficients& coeffs, int threads) {
    struct Task {
        const DesignPoint* point;
        const Workload* workload;
    };
    std::vector<Task> tasks;
    std::unordered_map<std::string, bool> planned;
    for (const auto& p : points) {
        std::string gene_key(reinterpret_cast<const char*>(p.gene.data()),
                             p.gene.size());
        for (const auto& w : workloads) {
            if (!planned.emplace(gene_key + "|" + w.name, true).second)
                continue;
            if (cache.contains(space, p, w))
                continue;
            tasks.push_back({&p, &w});
        }
    }
    std::vector<std::optional<HwMetrics>> results(tasks.size());
    parallel_for(tasks.size(), threads, [&](std::size_t i) {
        const auto config = decode(space, *tasks[i].point);
        results[i] =
            try_evaluate(config, *tasks[i].workload, space.mode, coeffs);
    });
    for (std::size_t i = 0; i < tasks.size(); ++i)
        cache.store(space, *tasks[i].point, *tasks[i].workload, results[i]);
}

} // namespace imcdse
