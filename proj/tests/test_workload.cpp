#include <doctest.h>

#include "imcdse/errors.hpp"
#include "imcdse/workload.hpp"

#include "helpers.hpp"

using namespace imcdse;

TEST_CASE("FC layer weight count derives from fan-in and fan-out") {
    const auto ws = workloads_from_json_text(R"({
        "name": "tiny",
        "layers": [{"name": "fc", "kind": "fc", "fan_in": 100, "fan_out": 10,
                    "weight_bits": 8, "in_activations": 100,
                    "out_activations": 10}]
    })");
    REQUIRE(ws.size() == 1);
    CHECK(ws[0].layers[0].weight_count == 1000);
    CHECK(ws[0].layers[0].macs == 1000); // defaulted to fan_in * out_acts
}

TEST_CASE("empty layer lists violate the schema") {
    CHECK_THROWS_AS(
        workloads_from_json_text(R"({"name": "w", "layers": []})"),
        SchemaError);
    CHECK_THROWS_AS(workloads_from_json_text(R"({"name": "w"})"), SchemaError);
    CHECK_THROWS_AS(workloads_from_json_text("[{]"), ParseError);
    CHECK_THROWS_AS(workloads_from_json_text(R"({
        "name": "w",
        "layers": [{"name": "l", "kind": "fc", "fan_in": -3, "fan_out": 1,
                    "in_activations": 1, "out_activations": 1}]})"),
                    SchemaError);
    CHECK_THROWS_AS(workloads_from_json_text(R"({
        "name": "w",
        "layers": [{"name": "l", "kind": "blob", "fan_in": 1, "fan_out": 1,
                    "in_activations": 1, "out_activations": 1}]})"),
                    UnknownKind);
    // conv/fc weight counts must match their lowered matrix shape
    CHECK_THROWS_AS(workloads_from_json_text(R"({
        "name": "w",
        "layers": [{"name": "l", "kind": "fc", "fan_in": 4, "fan_out": 4,
                    "weight_count": 5, "in_activations": 4,
                    "out_activations": 4, "macs": 16}]})"),
                    SchemaError);
}

TEST_CASE("required_cells follows the bit-packing ratio") {
    const auto w = testutil::fc_workload("w", 100, 10); // 1000 weights, 8 bit
    CHECK(required_cells(w, 2) == 4000);
    CHECK(required_cells(w, 8) == 1000);
    CHECK(required_cells(w, 3) == 3000); // ceil(8/3) = 3
}

TEST_CASE("required_cells is monotone non-increasing in bits_per_cell") {
    const auto w = testutil::fc_workload("w", 123, 45);
    std::uint64_t prev = required_cells(w, 1);
    CHECK(prev == w.total_weights() * 8);
    for (int b = 2; b <= 8; ++b) {
        const auto cur = required_cells(w, b);
        CHECK(cur <= prev);
        prev = cur;
    }
    CHECK(required_cells(w, 8) == w.total_weights());
}

TEST_CASE("largest_layer_cells picks the maximum layer") {
    Workload w;
    w.name = "w";
    for (std::uint64_t n : {10, 20, 15}) {
        LayerSpec l;
        l.name = "l" + std::to_string(n);
        l.fan_in = n;
        l.fan_out = 1;
        l.weight_count = n;
        l.weight_bits = 1;
        l.macs = n;
        w.layers.push_back(l);
    }
    CHECK(largest_layer_cells(w, 1) == 20);

    const auto single = testutil::fc_workload("s", 7, 3);
    CHECK(largest_layer_cells(single, 8) == 21);
}

TEST_CASE("shipped vgg16 matches the published largest-layer footprint") {
    const auto ws =
        load_workloads(testutil::data_path("workloads/vgg16.json"));
    REQUIRE(ws.size() == 1);
    // fc6 is 25088 x 4096 = 102,760,448 weights; at 8-bit weights and one
    // bit per cell that is 822,083,584 cells, reported as 8.2e8
    CHECK(largest_layer_cells(ws[0], 1) == 822'083'584);
    CHECK(largest_layer_cells(ws[0], 1) ==
          doctest::Approx(8.2e8).epsilon(0.01));
    CHECK(ws[0].total_weights() == doctest::Approx(138.3e6).epsilon(0.01));
}

TEST_CASE("shipped gpt2_medium largest layer is the token embedding") {
    const auto ws =
        load_workloads(testutil::data_path("workloads/gpt2_medium.json"));
    REQUIRE(ws.size() == 1);
    CHECK(largest_layer_cells(ws[0], 1) ==
          doctest::Approx(4.1e8).epsilon(0.01));
}

TEST_CASE("vgg16 is the largest workload of the shipped CNN set") {
    const auto ws = load_workloads(testutil::data_path("workloads/cnn4.json"));
    REQUIRE(ws.size() == 4);
    std::size_t by_total = 0, by_layer = 0;
    for (std::size_t i = 1; i < ws.size(); ++i) {
        if (required_cells(ws[i], 1) > required_cells(ws[by_total], 1))
            by_total = i;
        if (largest_layer_cells(ws[i], 1) >
            largest_layer_cells(ws[by_layer], 1))
            by_layer = i;
    }
    CHECK(ws[by_total].name == "vgg16");
    CHECK(ws[by_layer].name == "vgg16");
}

TEST_CASE("all nine shipped descriptors parse with unique layer names") {
    const auto ws = load_workloads(testutil::data_path("workloads/all9.json"));
    CHECK(ws.size() == 9);
    for (const auto& w : ws) {
        CHECK(!w.layers.empty());
        CHECK(w.total_weights() > 0);
        for (const auto& l : w.layers)
            if (l.weight_count > 0)
                CHECK(l.macs >= l.weight_count);
    }
}

TEST_CASE("synthetic workloads are deterministic in their inputs") {
    const auto a = generate_synthetic("mlp", 4, 17);
    const auto b = generate_synthetic("mlp", 4, 17);
    REQUIRE(a.layers.size() == 4);
    CHECK(a.total_weights() == b.total_weights());
    for (std::size_t i = 0; i < a.layers.size(); ++i) {
        CHECK(a.layers[i].fan_in == b.layers[i].fan_in);
        CHECK(a.layers[i].fan_out == b.layers[i].fan_out);
    }
    const auto c = generate_synthetic("mlp", 4, 18);
    bool any_diff = false;
    for (std::size_t i = 0; i < c.layers.size(); ++i)
        any_diff |= c.layers[i].fan_out != a.layers[i].fan_out;
    // different seed is allowed to coincide, but not for this fixed pair
    CHECK(any_diff);
}

TEST_CASE("mlp scale 1 yields a single FC layer") {
    const auto w = generate_synthetic("mlp", 1, 0);
    REQUIRE(w.layers.size() == 1);
    CHECK(w.layers[0].kind == LayerKind::FC);
    CHECK(w.layers[0].weight_count ==
          w.layers[0].fan_in * w.layers[0].fan_out);
}

TEST_CASE("convstack weights re-derive from the documented generator rule") {
    // replay the generator arithmetic: 3x3 kernels chained through the
    // drawn channel counts, starting from 3 input channels
    const auto w = generate_synthetic("convstack", 3, 7);
    REQUIRE(w.layers.size() == 3);
    std::uint64_t expected_total = 0;
    std::uint64_t in_c = 3;
    for (const auto& l : w.layers) {
        CHECK(l.fan_in == 9 * in_c);
        expected_total += 9 * in_c * l.fan_out;
        CHECK(l.macs % l.weight_count == 0); // macs = weights * spatial
        in_c = l.fan_out;
    }
    CHECK(w.total_weights() == expected_total);
    CHECK_THROWS_AS(generate_synthetic("lstm", 1, 0), UnknownKind);
}
