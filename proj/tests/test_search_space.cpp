#include <doctest.h>

#include "imcdse/errors.hpp"
#include "imcdse/search_space.hpp"

#include "helpers.hpp"

using namespace imcdse;
using testutil::point_of;
using testutil::toy_space;

TEST_CASE("space_size is the product of option counts") {
    CHECK(space_size(toy_space({3, 4})) == 12);
    CHECK(space_size(toy_space({1})) == 1);
    CHECK(space_size(toy_space({2, 2, 2, 2})) == 16);
}

TEST_CASE("space_size matches exhaustive enumeration on a small space") {
    const auto space = toy_space({3, 2, 4});
    const std::uint64_t n = space_size(space);
    std::uint64_t seen = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        (void)space.point_at(i);
        ++seen;
    }
    CHECK(seen == 24);
    // all points distinct
    for (std::uint64_t i = 1; i < n; ++i)
        CHECK(!(space.point_at(i) == space.point_at(i - 1)));
}

TEST_CASE("default RRAM space lands in the expected size band") {
    const auto space =
        load_search_space(testutil::data_path("spaces/rram_default.json"));
    const std::uint64_t n = space_size(space);
    CHECK(n >= 2'500'000);  // 0.25e7
    CHECK(n <= 12'100'000); // 1.21e7
}

TEST_CASE("decode maps boundary genes to boundary configs") {
    const auto space = testutil::tiny_hw_space();
    const auto lo = decode(space, space.min_point());
    CHECK(lo.xbar_rows == 64);
    CHECK(lo.xbar_cols == 64);
    CHECK(lo.crossbars_per_tile == 2);
    CHECK(lo.glb_bytes == 65536);
    CHECK(lo.bits_per_cell == 1);
    const auto hi = decode(space, space.max_point());
    CHECK(hi.xbar_rows == 256);
    CHECK(hi.tile_groups_per_chip == 4);
    CHECK(hi.bits_per_cell == 4);
    CHECK(hi.v_op == doctest::Approx(1.0));
}

TEST_CASE("decode clamps voltage to the technology node range") {
    SearchSpace space;
    namespace dn = domain_names;
    space.domains = {{dn::v_op, {0.45, 1.3}}, {dn::tech_nm, {7, 90}}};
    space.voltage_by_tech[7] = {0.45, 0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8};
    space.voltage_by_tech[90] = {0.95, 1.0, 1.05, 1.1, 1.15, 1.2, 1.25, 1.3};

    // 1.3 V requested at 7 nm clamps to the admissible maximum 0.8 V
    const auto cfg = decode(space, point_of({1, 0}));
    CHECK(cfg.tech_nm == 7);
    CHECK(cfg.v_op == doctest::Approx(0.8));
    // 0.45 V at 90 nm clamps up to 0.95 V
    const auto cfg2 = decode(space, point_of({0, 1}));
    CHECK(cfg2.v_op == doctest::Approx(0.95));
}

TEST_CASE("decode rejects out-of-domain gene indices") {
    const auto space = toy_space({3, 4});
    CHECK_THROWS_AS(decode(space, point_of({3, 0})), IndexOutOfDomain);
    CHECK_THROWS_AS(decode(space, point_of({0})), LengthMismatch);
}

TEST_CASE("weight-swapping spaces store one bit per cell") {
    auto space = testutil::tiny_hw_space();
    space.mode = SystemMode::WeightSwapping;
    auto p = space.max_point();
    CHECK(decode(space, p).bits_per_cell == 1);
}

TEST_CASE("cell_capacity multiplies the five structural factors") {
    HardwareConfig cfg;
    cfg.xbar_rows = 512;
    cfg.xbar_cols = 256;
    cfg.crossbars_per_tile = 8;
    cfg.tiles_per_router = 4;
    cfg.tile_groups_per_chip = 16;
    CHECK(cell_capacity(cfg) == 67'108'864);

    cfg.xbar_rows = 256;
    cfg.xbar_cols = 512; // row/col symmetric
    CHECK(cell_capacity(cfg) == 67'108'864);

    cfg = HardwareConfig{};
    cfg.xbar_rows = cfg.xbar_cols = 1;
    cfg.crossbars_per_tile = cfg.tiles_per_router = cfg.tile_groups_per_chip = 1;
    CHECK(cell_capacity(cfg) == 1);
}

TEST_CASE("cell_capacity reports overflow instead of wrapping") {
    HardwareConfig cfg;
    cfg.xbar_rows = cfg.xbar_cols = 1'000'000'000;
    cfg.crossbars_per_tile = cfg.tiles_per_router = 1'000'000'000;
    cfg.tile_groups_per_chip = 1'000'000'000;
    CHECK_THROWS_AS(cell_capacity(cfg), ArithmeticOverflow);
}

TEST_CASE("cell_capacity is monotone in every factor") {
    HardwareConfig base;
    base.xbar_rows = 64;
    base.xbar_cols = 128;
    base.crossbars_per_tile = 4;
    base.tiles_per_router = 2;
    base.tile_groups_per_chip = 8;
    const auto c0 = cell_capacity(base);
    for (int f = 0; f < 5; ++f) {
        HardwareConfig cfg = base;
        switch (f) {
        case 0: cfg.xbar_rows *= 2; break;
        case 1: cfg.xbar_cols *= 2; break;
        case 2: cfg.crossbars_per_tile *= 2; break;
        case 3: cfg.tiles_per_router *= 2; break;
        case 4: cfg.tile_groups_per_chip *= 2; break;
        }
        CHECK(cell_capacity(cfg) > c0);
    }
}

TEST_CASE("to_real and from_real round-trip every valid point") {
    const auto space = toy_space({5, 1, 3, 7, 2});
    Rng rng(99);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto p = space.random_point(rng);
        CHECK(from_real(space, to_real(p)) == p);
    }
}

TEST_CASE("from_real clamps out-of-range reals") {
    const auto space = toy_space({5});
    CHECK(from_real(space, {-2.7}).gene[0] == 0);
    CHECK(from_real(space, {9.9}).gene[0] == 4);
    CHECK(from_real(space, {3.5}).gene[0] == 3);
}

TEST_CASE("space schema violations are rejected") {
    auto space = toy_space({3});
    space.domains[0].options = {2.0, 1.0};
    CHECK_THROWS_AS(space.validate(), SchemaError);
    space.domains[0].options = {1.0, 1.0};
    CHECK_THROWS_AS(space.validate(), SchemaError);
    space.domains[0].options = {};
    CHECK_THROWS_AS(space.validate(), SchemaError);
    space.domains[0].options = {-1.0, 1.0};
    CHECK_THROWS_AS(space.validate(), SchemaError);

    CHECK_THROWS_AS(search_space_from_json_text("{not json"), ParseError);
    CHECK_THROWS_AS(search_space_from_json_text("{\"domains\": []}"),
                    SchemaError);
}

TEST_CASE("shipped space files parse and validate") {
    for (const char* name :
         {"spaces/rram_default.json", "spaces/sram_default.json",
          "spaces/rram_32nm.json", "spaces/sram_32nm.json",
          "spaces/rram_reduced4.json", "spaces/sram_sweep_small.json"}) {
        const auto space = load_search_space(testutil::data_path(name));
        CHECK(space.num_genes() > 0);
        CHECK(space_size(space) > 0);
    }
}

TEST_CASE("reduced space freezes everything but the four studied domains") {
    const auto space =
        load_search_space(testutil::data_path("spaces/rram_reduced4.json"));
    CHECK(space_size(space) == 192);
    for (const auto& d : space.domains) {
        const bool varying = d.name == domain_names::xbar_rows ||
                             d.name == domain_names::xbar_cols ||
                             d.name == domain_names::crossbars_per_tile ||
                             d.name == domain_names::bits_per_cell;
        CHECK(varying == (d.options.size() > 1));
    }
}
