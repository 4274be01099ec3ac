#include "imcdse/search_space.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "imcdse/errors.hpp"

#include <nlohmann/json.hpp>

namespace imcdse {

SystemMode mode_from_string(const std::string& s) {
    if (s == "weight_stationary" || s == "rram")
        return SystemMode::WeightStationary;
    if (s == "weight_swapping" || s == "sram")
        return SystemMode::WeightSwapping;
    throw SchemaError("unknown system mode: " + s);
}

std::string to_string(SystemMode mode) {
    return mode == SystemMode::WeightStationary ? "weight_stationary"
                                                : "weight_swapping";
}

const ParamDomain* SearchSpace::find_domain(const std::string& name) const {
    for (const auto& d : domains)
        if (d.name == name)
            return &d;
    return nullptr;
}

std::optional<std::size_t>
SearchSpace::domain_index(const std::string& name) const {
    for (std::size_t i = 0; i < domains.size(); ++i)
        if (domains[i].name == name)
            return i;
    return std::nullopt;
}

void SearchSpace::validate() const {
    if (domains.empty())
        throw SchemaError("search space has no domains");
    std::set<std::string> names;
    for (const auto& d : domains) {
        if (d.name.empty())
            throw SchemaError("domain with empty name");
        if (!names.insert(d.name).second)
            throw SchemaError("duplicate domain name: " + d.name);
        if (d.options.empty())
            throw SchemaError("domain " + d.name + " has no options");
        if (d.options.size() > 256)
            throw SchemaError("domain " + d.name + " exceeds 256 options");
        for (std::size_t i = 0; i < d.options.size(); ++i) {
            if (!(d.options[i] > 0.0))
                throw SchemaError("domain " + d.name +
                                  " has a non-positive option");
            if (i > 0 && !(d.options[i] > d.options[i - 1]))
                throw SchemaError("domain " + d.name +
                                  " options not strictly ascending");
        }
    }
    const ParamDomain* tech = find_domain(domain_names::tech_nm);
    const ParamDomain* vop = find_domain(domain_names::v_op);
    if (tech && vop && !voltage_by_tech.empty()) {
        // every voltage option must be admissible for at least one node
        for (double v : vop->options) {
            bool found = false;
            for (const auto& [node, volts] : voltage_by_tech)
                for (double av : volts)
                    if (std::abs(av - v) < 1e-9)
                        found = true;
            if (!found)
                throw SchemaError("voltage option not admissible for any "
                                  "technology node");
        }
    }
    for (const auto& [node, volts] : voltage_by_tech) {
        if (volts.empty())
            throw SchemaError("empty voltage list for tech node " +
                              std::to_string(node));
        if (!std::is_sorted(volts.begin(), volts.end()))
            throw SchemaError("voltage list for tech node " +
                              std::to_string(node) + " not ascending");
    }
}

bool SearchSpace::contains(const DesignPoint& p) const {
    if (p.gene.size() != domains.size())
        return false;
    for (std::size_t i = 0; i < domains.size(); ++i)
        if (p.gene[i] >= domains[i].size())
            return false;
    return true;
}

DesignPoint SearchSpace::random_point(Rng& rng) const {
    DesignPoint p;
    p.gene.reserve(domains.size());
    for (const auto& d : domains)
        p.gene.push_back(static_cast<std::uint8_t>(rng.uniform_index(d.size())));
    return p;
}

DesignPoint SearchSpace::point_at(std::uint64_t flat_index) const {
    DesignPoint p;
    p.gene.resize(domains.size());
    // row-major: the last domain varies fastest
    for (std::size_t i = domains.size(); i-- > 0;) {
        const std::uint64_t n = domains[i].size();
        p.gene[i] = static_cast<std::uint8_t>(flat_index % n);
        flat_index /= n;
    }
    return p;
}

DesignPoint SearchSpace::min_point() const {
    DesignPoint p;
    p.gene.assign(domains.size(), 0);
    return p;
}

DesignPoint SearchSpace::max_point() const {
    DesignPoint p;
    p.gene.reserve(domains.size());
    for (const auto& d : domains)
        p.gene.push_back(static_cast<std::uint8_t>(d.size() - 1));
    return p;
}

DesignPoint SearchSpace::median_point() const {
    DesignPoint p;
    p.gene.reserve(domains.size());
    for (const auto& d : domains)
        p.gene.push_back(static_cast<std::uint8_t>(d.size() / 2));
    return p;
}

std::uint64_t space_size(const SearchSpace& space) {
    std::uint64_t total = 1;
    for (const auto& d : space.domains) {
        const std::uint64_t n = d.size();
        if (total > std::numeric_limits<std::uint64_t>::max() / n)
            throw ArithmeticOverflow("space size overflows 64 bits");
        total *= n;
    }
    return total;
}

namespace {

double nearest_admissible(double v, const std::vector<double>& admissible) {
    double best = admissible.front();
    double best_gap = std::abs(v - best);
    for (double a : admissible) {
        const double gap = std::abs(v - a);
        if (gap < best_gap) {
            best = a;
            best_gap = gap;
        }
    }
    return best;
}

std::uint64_t as_count(double v) { return static_cast<std::uint64_t>(v + 0.5); }

} // namespace

HardwareConfig decode(const SearchSpace& space, const DesignPoint& point) {
    if (point.gene.size() != space.domains.size())
        throw LengthMismatch("gene length does not match domain count");
    for (std::size_t i = 0; i < space.domains.size(); ++i)
        if (point.gene[i] >= space.domains[i].size())
            throw IndexOutOfDomain("gene index " + std::to_string(point.gene[i]) +
                                   " out of domain " + space.domains[i].name);

    HardwareConfig cfg;
    auto value_of = [&](const char* name, double fallback) {
        auto idx = space.domain_index(name);
        if (!idx)
            return fallback;
        return space.domains[*idx].options[point.gene[*idx]];
    };

    cfg.xbar_rows = as_count(value_of(domain_names::xbar_rows, 256));
    cfg.xbar_cols = as_count(value_of(domain_names::xbar_cols, 256));
    cfg.crossbars_per_tile =
        as_count(value_of(domain_names::crossbars_per_tile, 8));
    cfg.tiles_per_router = as_count(value_of(domain_names::tiles_per_router, 8));
    cfg.tile_groups_per_chip =
        as_count(value_of(domain_names::tile_groups_per_chip, 16));
    cfg.v_op = value_of(domain_names::v_op, 1.0);
    cfg.t_cycle_ns = value_of(domain_names::t_cycle_ns, 1.0);
    cfg.glb_bytes = as_count(value_of(domain_names::glb_bytes, 2097152));
    cfg.bits_per_cell =
        static_cast<int>(as_count(value_of(domain_names::bits_per_cell, 1)));
    cfg.tech_nm = static_cast<int>(as_count(value_of(domain_names::tech_nm, 32)));

    if (space.mode == SystemMode::WeightSwapping)
        cfg.bits_per_cell = 1; // SRAM stores one bit per cell

    auto it = space.voltage_by_tech.find(cfg.tech_nm);
    if (it != space.voltage_by_tech.end())
        cfg.v_op = nearest_admissible(cfg.v_op, it->second);
    return cfg;
}

std::uint64_t cell_capacity(const HardwareConfig& config) {
    const std::uint64_t factors[] = {
        config.xbar_rows, config.xbar_cols, config.crossbars_per_tile,
        config.tiles_per_router, config.tile_groups_per_chip};
    std::uint64_t total = 1;
    for (std::uint64_t f : factors) {
        if (f == 0)
            throw ArithmeticOverflow("zero structural parameter");
        if (total > std::numeric_limits<std::uint64_t>::max() / f)
            throw ArithmeticOverflow("cell capacity overflows 64 bits");
        total *= f;
    }
    return total;
}

std::vector<double> to_real(const DesignPoint& point) {
    std::vector<double> reals;
    reals.reserve(point.gene.size());
    for (std::uint8_t g : point.gene)
        reals.push_back(static_cast<double>(g) + 0.5);
    return reals;
}

DesignPoint from_real(const SearchSpace& space,
                      const std::vector<double>& reals) {
    if (reals.size() != space.domains.size())
        throw LengthMismatch("real vector length does not match domain count");
    DesignPoint p;
    p.gene.reserve(reals.size());
    for (std::size_t i = 0; i < reals.size(); ++i) {
        const long n = static_cast<long>(space.domains[i].size());
        long idx = static_cast<long>(std::floor(reals[i]));
        idx = std::clamp(idx, 0L, n - 1);
        p.gene.push_back(static_cast<std::uint8_t>(idx));
    }
    return p;
}

namespace {

SearchSpace parse_space(const nlohmann::json& j) {
    SearchSpace space;
    try {
        if (!j.is_object() || !j.contains("domains"))
            throw SchemaError("space file must be an object with 'domains'");
        if (j.contains("mode"))
            space.mode = mode_from_string(j.at("mode").get<std::string>());
        for (const auto& dj : j.at("domains")) {
            ParamDomain d;
            d.name = dj.at("name").get<std::string>();
            for (const auto& v : dj.at("options"))
                d.options.push_back(v.get<double>());
            space.domains.push_back(std::move(d));
        }
        if (j.contains("voltage_by_tech")) {
            for (const auto& [key, volts] : j.at("voltage_by_tech").items()) {
                std::vector<double> vs;
                for (const auto& v : volts)
                    vs.push_back(v.get<double>());
                space.voltage_by_tech[std::stoi(key)] = std::move(vs);
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("bad space file: ") + e.what());
    }
    space.validate();
    return space;
}

} // namespace

SearchSpace search_space_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("space JSON: ") + e.what());
    }
    return parse_space(j);
}

SearchSpace load_search_space(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open space file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return search_space_from_json_text(ss.str());
    } catch (ConfigError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

} // namespace imcdse
