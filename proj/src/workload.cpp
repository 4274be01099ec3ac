#include "imcdse/workload.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "imcdse/errors.hpp"
#include "imcdse/rng.hpp"

#include <nlohmann/json.hpp>

namespace imcdse {

LayerKind layer_kind_from_string(const std::string& s) {
    if (s == "conv")
        return LayerKind::Conv;
    if (s == "fc")
        return LayerKind::FC;
    if (s == "depthwise_conv")
        return LayerKind::DepthwiseConv;
    if (s == "attention")
        return LayerKind::Attention;
    if (s == "other")
        return LayerKind::Other;
    throw UnknownKind("unknown layer kind: " + s);
}

std::string to_string(LayerKind kind) {
    switch (kind) {
    case LayerKind::Conv: return "conv";
    case LayerKind::FC: return "fc";
    case LayerKind::DepthwiseConv: return "depthwise_conv";
    case LayerKind::Attention: return "attention";
    case LayerKind::Other: return "other";
    }
    return "other";
}

std::uint64_t Workload::total_weights() const {
    std::uint64_t sum = 0;
    for (const auto& l : layers)
        sum += l.weight_count;
    return sum;
}

std::uint64_t Workload::total_macs() const {
    std::uint64_t sum = 0;
    for (const auto& l : layers)
        sum += l.macs;
    return sum;
}

namespace {

std::uint64_t get_count(const nlohmann::json& j, const char* field,
                        const std::string& ctx) {
    const auto& v = j.at(field);
    if (v.is_number_integer() && v.get<std::int64_t>() < 0)
        throw SchemaError(ctx + ": negative " + field);
    if (!v.is_number())
        throw SchemaError(ctx + ": " + field + " must be a number");
    return v.get<std::uint64_t>();
}

LayerSpec parse_layer(const nlohmann::json& j, const std::string& wname) {
    LayerSpec l;
    try {
        l.name = j.at("name").get<std::string>();
        const std::string ctx = wname + "/" + l.name;
        l.kind = layer_kind_from_string(
            j.value("kind", std::string("fc")));
        l.fan_in = get_count(j, "fan_in", ctx);
        l.fan_out = get_count(j, "fan_out", ctx);
        l.weight_bits = static_cast<int>(j.value("weight_bits", 8));
        if (l.weight_bits <= 0)
            throw SchemaError(ctx + ": weight_bits must be positive");
        l.weight_count = j.contains("weight_count")
                             ? get_count(j, "weight_count", ctx)
                             : l.fan_in * l.fan_out;
        if ((l.kind == LayerKind::Conv || l.kind == LayerKind::FC) &&
            l.weight_count != l.fan_in * l.fan_out)
            throw SchemaError(ctx + ": weight_count must equal "
                                    "fan_in * fan_out for conv/fc layers");
        l.in_activations = get_count(j, "in_activations", ctx);
        l.out_activations = get_count(j, "out_activations", ctx);
        // default: one matrix-vector product per output column batch
        l.macs = j.contains("macs") ? get_count(j, "macs", ctx)
                                    : l.fan_in * l.out_activations;
        if (l.weight_count > 0 && l.macs < l.weight_count)
            throw SchemaError(ctx + ": macs below weight count");
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(wname + ": bad layer: " + e.what());
    }
    return l;
}

Workload parse_workload(const nlohmann::json& j) {
    Workload w;
    try {
        w.name = j.at("name").get<std::string>();
        if (!j.contains("layers") || !j.at("layers").is_array() ||
            j.at("layers").empty())
            throw SchemaError(w.name + ": workload needs a non-empty layer list");
        std::set<std::string> names;
        for (const auto& lj : j.at("layers")) {
            LayerSpec l = parse_layer(lj, w.name);
            if (!names.insert(l.name).second)
                throw SchemaError(w.name + ": duplicate layer name " + l.name);
            w.layers.push_back(std::move(l));
        }
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("bad workload: ") + e.what());
    }
    return w;
}

} // namespace

std::vector<Workload> workloads_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("workload JSON: ") + e.what());
    }
    std::vector<Workload> out;
    if (j.is_array()) {
        for (const auto& wj : j)
            out.push_back(parse_workload(wj));
    } else {
        out.push_back(parse_workload(j));
    }
    return out;
}

std::vector<Workload> load_workloads(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open workload file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return workloads_from_json_text(ss.str());
    } catch (ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    } catch (SchemaError& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
}

namespace {

std::uint64_t cells_per_weight(int weight_bits, int bits_per_cell) {
    return static_cast<std::uint64_t>(
        (weight_bits + bits_per_cell - 1) / bits_per_cell);
}

} // namespace

std::uint64_t required_cells(const Workload& w, int bits_per_cell) {
    std::uint64_t sum = 0;
    for (const auto& l : w.layers)
        sum += l.weight_count * cells_per_weight(l.weight_bits, bits_per_cell);
    return sum;
}

std::uint64_t largest_layer_cells(const Workload& w, int bits_per_cell) {
    std::uint64_t best = 0;
    for (const auto& l : w.layers)
        best = std::max(best, l.weight_count *
                                  cells_per_weight(l.weight_bits, bits_per_cell));
    return best;
}

Workload generate_synthetic(const std::string& kind, int scale,
                            std::uint64_t seed) {
    if (scale < 1)
        throw SchemaError("synthetic scale must be >= 1");
    Rng rng(seed);
    static constexpr std::uint64_t kDims[] = {64, 128, 256, 512};

    Workload w;
    if (kind == "mlp") {
        w.name = "mlp_s" + std::to_string(scale) + "_" + std::to_string(seed);
        std::uint64_t fan_in = kDims[rng.uniform_index(4)];
        for (int i = 0; i < scale; ++i) {
            const std::uint64_t fan_out = kDims[rng.uniform_index(4)];
            LayerSpec l;
            l.name = "fc" + std::to_string(i);
            l.kind = LayerKind::FC;
            l.fan_in = fan_in;
            l.fan_out = fan_out;
            l.weight_count = fan_in * fan_out;
            l.macs = l.weight_count;
            l.in_activations = fan_in;
            l.out_activations = fan_out;
            w.layers.push_back(std::move(l));
            fan_in = fan_out;
        }
    } else if (kind == "convstack") {
        w.name = "convstack_s" + std::to_string(scale) + "_" +
                 std::to_string(seed);
        static constexpr std::uint64_t kChannels[] = {8, 16, 32, 64};
        static constexpr std::uint64_t kSpatial[] = {256, 1024, 4096};
        std::uint64_t in_c = 3;
        for (int i = 0; i < scale; ++i) {
            const std::uint64_t out_c = kChannels[rng.uniform_index(4)];
            const std::uint64_t spatial = kSpatial[rng.uniform_index(3)];
            LayerSpec l;
            l.name = "conv" + std::to_string(i);
            l.kind = LayerKind::Conv;
            l.fan_in = 9 * in_c; // 3x3 kernels
            l.fan_out = out_c;
            l.weight_count = l.fan_in * l.fan_out;
            l.macs = l.weight_count * spatial;
            l.in_activations = in_c * spatial;
            l.out_activations = out_c * spatial;
            w.layers.push_back(std::move(l));
            in_c = out_c;
        }
    } else {
        throw UnknownKind("unknown synthetic workload kind: " + kind);
    }
    return w;
}

} // namespace imcdse
