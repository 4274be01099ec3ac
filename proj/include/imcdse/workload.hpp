#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace imcdse {

enum class LayerKind { Conv, FC, DepthwiseConv, Attention, Other };

LayerKind layer_kind_from_string(const std::string& s);
std::string to_string(LayerKind kind);

// One network layer after im2col-style lowering to a weight matrix of
// fan_in x fan_out. Layers with weight_count == 0 (pooling and the like)
// contribute activation traffic only.
struct LayerSpec {
    std::string name;
    LayerKind kind = LayerKind::FC;
    std::uint64_t weight_count = 0;
    int weight_bits = 8;
    std::uint64_t macs = 0;
    std::uint64_t in_activations = 0;
    std::uint64_t out_activations = 0;
    std::uint64_t fan_in = 0;
    std::uint64_t fan_out = 0;
};

struct Workload {
    std::string name;
    std::vector<LayerSpec> layers;

    std::uint64_t total_weights() const;
    std::uint64_t total_macs() const;
};

// Parses one workload object or an array of them; file order is preserved.
// weight_count and macs are derived when absent (weights = fan_in * fan_out,
// macs = fan_in * out_activations). Throws ParseError / SchemaError.
std::vector<Workload> load_workloads(const std::filesystem::path& path);
std::vector<Workload> workloads_from_json_text(const std::string& text);

// Memory cells needed to hold every weight: each weight occupies
// ceil(weight_bits / bits_per_cell) cells.
std::uint64_t required_cells(const Workload& w, int bits_per_cell);

// Footprint of the single largest layer, same cell arithmetic.
std::uint64_t largest_layer_cells(const Workload& w, int bits_per_cell);

// Deterministic desk-scale test workloads. "mlp" yields `scale` FC layers
// with geometric fan-in/out drawn from {64,128,256,512}; "convstack" yields
// `scale` 3x3 conv layers whose macs are weight_count times the drawn
// spatial size. Same (kind, scale, seed) always yields the same workload.
Workload generate_synthetic(const std::string& kind, int scale,
                            std::uint64_t seed);

} // namespace imcdse
