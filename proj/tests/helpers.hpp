#pragma once

#include <string>
#include <vector>

#include "imcdse/search_space.hpp"
#include "imcdse/workload.hpp"

namespace testutil {

inline std::string data_path(const std::string& rel) {
    return std::string(IMCDSE_DATA_DIR) + "/" + rel;
}

// small space with no physical meaning, for operator and kernel tests
inline imcdse::SearchSpace toy_space(std::vector<std::size_t> sizes) {
    imcdse::SearchSpace space;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        imcdse::ParamDomain d;
        d.name = "p" + std::to_string(i);
        for (std::size_t k = 0; k < sizes[i]; ++k)
            d.options.push_back(static_cast<double>(k + 1));
        space.domains.push_back(std::move(d));
    }
    return space;
}

inline imcdse::DesignPoint point_of(std::vector<std::uint8_t> gene) {
    imcdse::DesignPoint p;
    p.gene = std::move(gene);
    return p;
}

// single FC layer workload: `weights` parameters, macs = weights * passes
inline imcdse::Workload fc_workload(const std::string& name,
                                    std::uint64_t fan_in, std::uint64_t fan_out,
                                    std::uint64_t passes = 1,
                                    int weight_bits = 8) {
    imcdse::Workload w;
    w.name = name;
    imcdse::LayerSpec l;
    l.name = "fc0";
    l.kind = imcdse::LayerKind::FC;
    l.fan_in = fan_in;
    l.fan_out = fan_out;
    l.weight_count = fan_in * fan_out;
    l.weight_bits = weight_bits;
    l.macs = l.weight_count * passes;
    l.in_activations = fan_in;
    l.out_activations = fan_out;
    w.layers.push_back(std::move(l));
    return w;
}

// small weight-stationary space whose capacity spans the given workloads
inline imcdse::SearchSpace tiny_hw_space() {
    imcdse::SearchSpace space;
    auto dom = [](const char* name, std::vector<double> opts) {
        return imcdse::ParamDomain{name, std::move(opts)};
    };
    namespace dn = imcdse::domain_names;
    space.domains = {
        dom(dn::xbar_rows, {64, 128, 256}),
        dom(dn::xbar_cols, {64, 128, 256}),
        dom(dn::crossbars_per_tile, {2, 4}),
        dom(dn::tiles_per_router, {2, 4}),
        dom(dn::tile_groups_per_chip, {2, 4}),
        dom(dn::v_op, {0.7, 0.85, 1.0}),
        dom(dn::t_cycle_ns, {1, 5}),
        dom(dn::glb_bytes, {65536, 1048576}),
        dom(dn::bits_per_cell, {1, 2, 4}),
        dom(dn::tech_nm, {32}),
    };
    space.mode = imcdse::SystemMode::WeightStationary;
    return space;
}

} // namespace testutil
