#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "imcdse/rng.hpp"

namespace imcdse {

// One discrete hardware parameter: an ordered set of admissible values.
// Values are plain doubles in the parameter's natural unit (counts, volts,
// ns, bytes, bits, nm).
struct ParamDomain {
    std::string name;
    std::vector<double> options; // non-empty, strictly ascending, positive

    std::size_t size() const { return options.size(); }
};

enum class SystemMode {
    WeightStationary, // RRAM: every weight resident on chip
    WeightSwapping,   // SRAM: weights streamed from DRAM in rounds
};

SystemMode mode_from_string(const std::string& s);
std::string to_string(SystemMode mode);

// Canonical domain names understood by decode(). A space may omit any of
// them; decode() falls back to fixed defaults for missing ones.
namespace domain_names {
inline constexpr const char* xbar_rows = "xbar_rows";
inline constexpr const char* xbar_cols = "xbar_cols";
inline constexpr const char* crossbars_per_tile = "crossbars_per_tile";
inline constexpr const char* tiles_per_router = "tiles_per_router";
inline constexpr const char* tile_groups_per_chip = "tile_groups_per_chip";
inline constexpr const char* v_op = "v_op";
inline constexpr const char* t_cycle_ns = "t_cycle_ns";
inline constexpr const char* glb_bytes = "glb_bytes";
inline constexpr const char* bits_per_cell = "bits_per_cell";
inline constexpr const char* tech_nm = "tech_nm";
} // namespace domain_names

// A point is a vector of option indices, one per domain, in domain order.
// Indices are bytes: domains are capped at 256 options so pools pack into
// flat byte matrices for the distance kernels.
struct DesignPoint {
    std::vector<std::uint8_t> gene;

    bool operator==(const DesignPoint& other) const = default;
};

// Decoded hardware configuration in physical units.
struct HardwareConfig {
    std::uint64_t xbar_rows = 0;
    std::uint64_t xbar_cols = 0;
    std::uint64_t crossbars_per_tile = 0;
    std::uint64_t tiles_per_router = 0;
    std::uint64_t tile_groups_per_chip = 0;
    double v_op = 0.0;      // volts
    double t_cycle_ns = 0.0;
    std::uint64_t glb_bytes = 0;
    int bits_per_cell = 1;
    int tech_nm = 32;
};

struct SearchSpace {
    std::vector<ParamDomain> domains;
    // tech node (nm) -> admissible operating voltages, ascending
    std::map<int, std::vector<double>> voltage_by_tech;
    SystemMode mode = SystemMode::WeightStationary;

    std::size_t num_genes() const { return domains.size(); }
    const ParamDomain* find_domain(const std::string& name) const;
    std::optional<std::size_t> domain_index(const std::string& name) const;

    // Throws SchemaError if any invariant is violated.
    void validate() const;

    bool contains(const DesignPoint& p) const;
    DesignPoint random_point(Rng& rng) const;
    DesignPoint point_at(std::uint64_t flat_index) const; // row-major order
    DesignPoint min_point() const;
    DesignPoint max_point() const;
    DesignPoint median_point() const;
};

// Product of per-domain option counts. Throws ArithmeticOverflow instead of
// wrapping.
std::uint64_t space_size(const SearchSpace& space);

// Maps a point to its hardware configuration. When the space carries a
// voltage_by_tech table, the decoded voltage is clamped to the nearest
// admissible value for the decoded technology node.
HardwareConfig decode(const SearchSpace& space, const DesignPoint& point);

// rows * cols * crossbars_per_tile * tiles_per_router * tile_groups_per_chip
std::uint64_t cell_capacity(const HardwareConfig& config);

// Continuous relaxation used by the crossover/mutation operators: index i
// maps to the cell center i + 0.5; the inverse floors and clamps, so every
// real in [i, i+1) comes back to i.
std::vector<double> to_real(const DesignPoint& point);
DesignPoint from_real(const SearchSpace& space, const std::vector<double>& reals);

// JSON space description: {"mode": ..., "domains": [{"name","options"}...],
// "voltage_by_tech": {"32": [...], ...}}
SearchSpace load_search_space(const std::filesystem::path& path);
SearchSpace search_space_from_json_text(const std::string& text);

} // namespace imcdse
