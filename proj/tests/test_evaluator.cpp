#include <doctest.h>

#include <limits>

#include "imcdse/errors.hpp"
#include "imcdse/evaluator.hpp"

#include "helpers.hpp"

using namespace imcdse;

namespace {

HardwareConfig mid_config() {
    HardwareConfig cfg;
    cfg.xbar_rows = 512;
    cfg.xbar_cols = 256;
    cfg.crossbars_per_tile = 8;
    cfg.tiles_per_router = 4;
    cfg.tile_groups_per_chip = 16;
    cfg.v_op = 0.85;
    cfg.t_cycle_ns = 5;
    cfg.glb_bytes = 2097152;
    cfg.bits_per_cell = 2;
    cfg.tech_nm = 32;
    return cfg;
}

HardwareConfig unit_config() {
    HardwareConfig cfg;
    cfg.xbar_rows = 256;
    cfg.xbar_cols = 256;
    cfg.crossbars_per_tile = 1;
    cfg.tiles_per_router = 1;
    cfg.tile_groups_per_chip = 1;
    cfg.v_op = 1.0;
    cfg.t_cycle_ns = 1;
    cfg.glb_bytes = 65536;
    cfg.bits_per_cell = 1;
    cfg.tech_nm = 32;
    return cfg;
}

} // namespace

TEST_CASE("area matches the hand-evaluated formula") {
    const ModelCoefficients co;
    // 512 macros of (512*256 cells * 0.25 um^2 + ADC + periphery) plus 16
    // routers and 2 MiB of global buffer at 32 nm
    CHECK(chip_area_mm2(mid_config(), co) ==
          doctest::Approx(24.561216).epsilon(1e-12));
}

TEST_CASE("area grows with structure and scales quadratically with tech") {
    const ModelCoefficients co;
    auto cfg = mid_config();
    const double a0 = chip_area_mm2(cfg, co);
    cfg.tile_groups_per_chip *= 2;
    CHECK(chip_area_mm2(cfg, co) > a0);

    auto scaled = mid_config();
    scaled.tech_nm = 64;
    CHECK(chip_area_mm2(scaled, co) == doctest::Approx(4.0 * a0).epsilon(1e-12));
}

TEST_CASE("evaluate reproduces the hand-computed single-layer numbers") {
    const ModelCoefficients co;
    // one 256x32 FC layer at 8-bit weights on a single 256x256 macro:
    // exactly one fold, eight bit-serial passes
    const auto w = testutil::fc_workload("w", 256, 32);
    const auto m = evaluate(unit_config(), w, SystemMode::WeightStationary, co);
    CHECK(m.latency_ms == doctest::Approx(0.002048).epsilon(1e-12));
    CHECK(m.energy_mj == doctest::Approx(3.0144e-6).epsilon(1e-12));
    CHECK(m.area_mm2 == doctest::Approx(0.254634).epsilon(1e-12));
}

TEST_CASE("weight-stationary mode rejects workloads that do not fit") {
    const ModelCoefficients co;
    const auto w = testutil::fc_workload("big", 4096, 4096); // 16.8M weights
    CHECK_THROWS_AS(
        evaluate(unit_config(), w, SystemMode::WeightStationary, co),
        InfeasibleMapping);
    CHECK(!try_evaluate(unit_config(), w, SystemMode::WeightStationary, co));
    // the same workload swaps fine
    CHECK(try_evaluate(unit_config(), w, SystemMode::WeightSwapping, co));
}

TEST_CASE("workloads without weights are rejected") {
    const ModelCoefficients co;
    Workload w;
    w.name = "empty";
    CHECK_THROWS_AS(evaluate(unit_config(), w, SystemMode::WeightStationary, co),
                    ZeroWorkload);
    LayerSpec l;
    l.name = "pool";
    l.kind = LayerKind::Other;
    l.in_activations = 64;
    l.out_activations = 16;
    w.layers.push_back(l);
    CHECK_THROWS_AS(evaluate(unit_config(), w, SystemMode::WeightStationary, co),
                    ZeroWorkload);
}

TEST_CASE("three equal layers at triple capacity swap in three rounds") {
    const ModelCoefficients co;
    auto cfg = unit_config(); // capacity 65536 cells
    Workload w;
    w.name = "triple";
    for (int i = 0; i < 3; ++i) {
        LayerSpec l;
        l.name = "fc" + std::to_string(i);
        l.fan_in = 256;
        l.fan_out = 32;
        l.weight_count = 8192; // 65536 cells at 1 bit per cell
        l.weight_bits = 8;
        l.macs = 8192;
        l.in_activations = 256;
        l.out_activations = 32;
        w.layers.push_back(l);
    }
    const auto detail =
        evaluate_detail(cfg, w, SystemMode::WeightSwapping, co);
    CHECK(detail.swap_rounds == 3);
    CHECK(detail.swap_bytes == 3 * 8192);
}

TEST_CASE("full-fit weight swapping equals weight-stationary execution") {
    const ModelCoefficients co;
    const auto w = testutil::fc_workload("fits", 256, 32, 5);
    const auto ws = evaluate_detail(unit_config(), w,
                                    SystemMode::WeightStationary, co);
    const auto sw = evaluate_detail(unit_config(), w,
                                    SystemMode::WeightSwapping, co);
    CHECK(sw.swap_rounds == 0);
    CHECK(sw.swap_bytes == 0);
    CHECK(sw.metrics.energy_mj == ws.metrics.energy_mj);
    CHECK(sw.metrics.latency_ms == ws.metrics.latency_ms);
}

TEST_CASE("lower operating voltage slows the cycle and saves energy") {
    const ModelCoefficients co;
    const auto w = testutil::fc_workload("w", 256, 32);
    auto fast = unit_config(); // t_cycle 1 ns, v 1.0 -> t_eff 1 ns
    auto slow = unit_config();
    slow.v_op = 0.5; // t_min / 0.5 = 2 ns > t_cycle
    const auto m_fast = evaluate(fast, w, SystemMode::WeightStationary, co);
    const auto m_slow = evaluate(slow, w, SystemMode::WeightStationary, co);
    CHECK(m_slow.latency_ms > m_fast.latency_ms);
    CHECK(m_slow.energy_mj < m_fast.energy_mj);
}

TEST_CASE("energy and latency are monotone in the MAC count") {
    const ModelCoefficients co;
    const auto w1 = testutil::fc_workload("w", 256, 32, 2);
    const auto w2 = testutil::fc_workload("w", 256, 32, 6);
    const auto m1 = evaluate(unit_config(), w1, SystemMode::WeightStationary, co);
    const auto m2 = evaluate(unit_config(), w2, SystemMode::WeightStationary, co);
    CHECK(m2.energy_mj > m1.energy_mj);
    CHECK(m2.latency_ms > m1.latency_ms);
}

TEST_CASE("activation spill past the GLB pays DRAM energy and latency") {
    const ModelCoefficients co;
    auto cfg = unit_config();
    Workload w = testutil::fc_workload("spill", 64, 8);
    w.layers[0].in_activations = 200000; // above the 65536-byte buffer
    const auto detail =
        evaluate_detail(cfg, w, SystemMode::WeightStationary, co);
    CHECK(detail.dram_overflow_bytes == 200000 + 8 - 65536);

    auto big_glb = cfg;
    big_glb.glb_bytes = 1 << 20;
    const auto detail2 =
        evaluate_detail(big_glb, w, SystemMode::WeightStationary, co);
    CHECK(detail2.dram_overflow_bytes == 0);
    CHECK(detail2.metrics.energy_mj < detail.metrics.energy_mj);
}

TEST_CASE("evaluate is a pure function of its arguments") {
    const ModelCoefficients co;
    const auto w = testutil::fc_workload("w", 300, 40, 3);
    const auto a = evaluate(mid_config(), w, SystemMode::WeightStationary, co);
    const auto b = evaluate(mid_config(), w, SystemMode::WeightStationary, co);
    CHECK(a.energy_mj == b.energy_mj);
    CHECK(a.latency_ms == b.latency_ms);
    CHECK(a.area_mm2 == b.area_mm2);
}

TEST_CASE("evaluation cache hits on repeats and misses across workloads") {
    const ModelCoefficients co;
    auto space = testutil::tiny_hw_space();
    Rng rng(5);
    const auto p = space.random_point(rng);
    const auto w1 = testutil::fc_workload("w1", 64, 8);
    const auto w2 = testutil::fc_workload("w2", 64, 16);

    EvalCache cache;
    const auto m1 = cache.evaluate(space, p, w1, co);
    CHECK(cache.miss_count() == 1);
    const auto m1b = cache.evaluate(space, p, w1, co);
    CHECK(cache.miss_count() == 1);
    CHECK(cache.hit_count() == 1);
    REQUIRE(m1.has_value());
    REQUIRE(m1b.has_value());
    CHECK(m1->energy_mj == m1b->energy_mj);

    cache.evaluate(space, p, w2, co); // different workload, same gene
    CHECK(cache.miss_count() == 2);
}

TEST_CASE("default coefficients spread EDAP over orders of magnitude") {
    const ModelCoefficients co;
    const auto space = load_search_space(
        testutil::data_path("spaces/rram_default.json"));
    const auto workloads =
        load_workloads(testutil::data_path("workloads/cnn4.json"));
    Rng rng(8);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    int feasible = 0;
    for (int i = 0; i < 4000 && feasible < 40; ++i) {
        const auto cfg = decode(space, space.random_point(rng));
        if (chip_area_mm2(cfg, co) > 800.0)
            continue;
        double e_max = 0, l_max = 0;
        bool ok = true;
        for (const auto& w : workloads) {
            const auto m = try_evaluate(cfg, w, space.mode, co);
            if (!m) {
                ok = false;
                break;
            }
            e_max = std::max(e_max, m->energy_mj);
            l_max = std::max(l_max, m->latency_ms);
        }
        if (!ok)
            continue;
        ++feasible;
        const double edap = e_max * l_max * chip_area_mm2(cfg, co);
        lo = std::min(lo, edap);
        hi = std::max(hi, edap);
    }
    REQUIRE(feasible >= 20);
    CHECK(hi / lo >= 1e3); // the search landscape is non-trivial
}

TEST_CASE("coefficient files override fields and reject bad values") {
    const auto co = coefficients_from_json_text(
        R"({"e_cell_pj": 0.75, "dram_gbps": 12.5})");
    CHECK(co.e_cell_pj == 0.75);
    CHECK(co.dram_gbps == 12.5);
    CHECK(co.e_adc_pj == ModelCoefficients{}.e_adc_pj);
    CHECK_THROWS_AS(coefficients_from_json_text(R"({"e_cell_pj": -1})"),
                    SchemaError);
    CHECK_THROWS_AS(coefficients_from_json_text("{"), ParseError);
}
