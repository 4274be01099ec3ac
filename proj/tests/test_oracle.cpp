#include <doctest.h>

#include "imcdse/errors.hpp"
#include "imcdse/ga_engine.hpp"
#include "imcdse/oracle.hpp"

#include "helpers.hpp"

using namespace imcdse;

namespace {

struct OracleFixture {
    SearchSpace space = testutil::tiny_hw_space();
    std::vector<Workload> workloads = {testutil::fc_workload("a", 256, 64, 4)};
    ObjectiveSpec objective = ObjectiveSpec::from_strings("edap", "max");
    ModelCoefficients coeffs;
};

} // namespace

TEST_CASE("a one-point space has a one-entry landscape") {
    OracleFixture fx;
    for (auto& d : fx.space.domains)
        d.options = {d.options.back()};
    const auto land =
        exhaustive(fx.space, fx.workloads, fx.objective, fx.coeffs);
    CHECK(land.points.size() == 1);
    REQUIRE(land.global_min.has_value());
    CHECK(*land.global_min == 0);
    CHECK(land.feasible_count == 1);
    CHECK(rank_of(land.points[0], land) == 1);
}

TEST_CASE("an all-infeasible space reports no global minimum") {
    OracleFixture fx;
    fx.workloads = {testutil::fc_workload("huge", 65536, 65536)};
    const auto land =
        exhaustive(fx.space, fx.workloads, fx.objective, fx.coeffs);
    CHECK(land.feasible_count == 0);
    CHECK(!land.global_min.has_value());
}

TEST_CASE("exhaustive evaluation is order independent") {
    OracleFixture fx;
    const auto land =
        exhaustive(fx.space, fx.workloads, fx.objective, fx.coeffs);
    REQUIRE(land.global_min.has_value());

    // second pass in reversed enumeration order, straight from the scorer
    const std::uint64_t n = space_size(fx.space);
    std::optional<JointScore> best;
    std::optional<DesignPoint> best_point;
    for (std::uint64_t i = n; i-- > 0;) {
        const auto p = fx.space.point_at(i);
        const auto cfg = decode(fx.space, p);
        std::vector<std::optional<HwMetrics>> metrics;
        for (const auto& w : fx.workloads)
            metrics.push_back(try_evaluate(cfg, w, fx.space.mode, fx.coeffs));
        const auto s = joint_score(metrics, chip_area_mm2(cfg, fx.coeffs),
                                   cfg.tech_nm, cfg, fx.workloads,
                                   fx.objective);
        if (s.feasible && (!best || s.value < best->value)) {
            best = s;
            best_point = p;
        }
    }
    REQUIRE(best.has_value());
    CHECK(best->value == land.scores[*land.global_min].value);
    // parallel enumeration agrees with sequential
    const auto land2 =
        exhaustive(fx.space, fx.workloads, fx.objective, fx.coeffs,
                   kDefaultEnumerationCap, 2);
    CHECK(land2.scores[*land.global_min].value ==
          land.scores[*land.global_min].value);
}

TEST_CASE("ranks count strictly better feasible entries") {
    OracleFixture fx;
    const auto land =
        exhaustive(fx.space, fx.workloads, fx.objective, fx.coeffs);
    REQUIRE(land.global_min.has_value());
    CHECK(rank_of(land.points[*land.global_min], land) == 1);

    // the worst feasible entry ranks last among feasible ones unless tied
    std::optional<std::size_t> worst;
    for (std::size_t i = 0; i < land.points.size(); ++i)
        if (land.scores[i].feasible &&
            (!worst || land.scores[i].value > land.scores[*worst].value))
            worst = i;
    REQUIRE(worst.has_value());
    std::uint64_t ties = 0;
    for (const auto& s : land.scores)
        if (s.feasible && s.value == land.scores[*worst].value)
            ++ties;
    CHECK(rank_of(land.points[*worst], land) == land.feasible_count - ties + 1);

    DesignPoint outside;
    outside.gene.assign(fx.space.num_genes(), 255);
    CHECK_THROWS_AS(rank_of(outside, land), NotInLandscape);
}

TEST_CASE("tied scores share a rank") {
    OracleFixture fx;
    const auto land =
        exhaustive(fx.space, fx.workloads, fx.objective, fx.coeffs);
    for (std::size_t i = 0; i < land.points.size(); ++i)
        for (std::size_t j = i + 1; j < land.points.size(); ++j)
            if (land.scores[i].feasible && land.scores[j].feasible &&
                land.scores[i].value == land.scores[j].value) {
                CHECK(rank_of(land.points[i], land) ==
                      rank_of(land.points[j], land));
                return; // one tie pair is enough
            }
}

TEST_CASE("the enumeration cap rejects oversized spaces") {
    OracleFixture fx;
    CHECK_THROWS_AS(
        exhaustive(fx.space, fx.workloads, fx.objective, fx.coeffs, 10),
        SpaceTooLarge);
}

TEST_CASE("GA results never beat the exhaustive global minimum") {
    OracleFixture fx;
    const auto land =
        exhaustive(fx.space, fx.workloads, fx.objective, fx.coeffs);
    REQUIRE(land.global_min.has_value());
    GaSettings settings;
    settings.p_h = 40;
    settings.p_e = 20;
    settings.p_ga = 8;
    settings.generations = 2;
    for (std::uint64_t seed : {1ull, 5ull, 9ull}) {
        settings.seed = seed;
        const auto r = run_joint(fx.space, fx.workloads, fx.objective,
                                 fx.coeffs, default_phases(2), settings);
        CHECK(r.best.score.value >= land.scores[*land.global_min].value);
    }
}
