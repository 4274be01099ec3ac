#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "helpers.hpp"

namespace fs = std::filesystem;

namespace {

std::string cli_path() { return IMCDSE_CLI_PATH; }

int run_cli(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name)
        : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

const std::string kCommon =
    " --space " + testutil::data_path("spaces/rram_32nm.json") +
    " --workloads " + testutil::data_path("workloads/cnn4.json") +
    " --ph 120 --pe 60 --pga 10 --generations 2";

} // namespace

TEST_CASE("optimize emits byte-identical records for equal seeds") {
    TempDir d1("imcdse_cli_a"), d2("imcdse_cli_b");
    REQUIRE(run_cli("optimize" + kCommon + " --seed 7 --out " +
                    d1.path.string()) == 0);
    REQUIRE(run_cli("optimize" + kCommon + " --seed 7 --out " +
                    d2.path.string()) == 0);
    const auto r1 = slurp(d1.path / "run_record.json");
    const auto r2 = slurp(d2.path / "run_record.json");
    CHECK(!r1.empty());
    CHECK(r1 == r2);

    // convergence CSV exists with the documented header
    const auto csv = slurp(d1.path / "run_convergence.csv");
    CHECK(csv.rfind("generation,phase,best_score,mean_score,evals\n", 0) == 0);

    // different seed, different record
    TempDir d3("imcdse_cli_c");
    REQUIRE(run_cli("optimize" + kCommon + " --seed 8 --out " +
                    d3.path.string()) == 0);
    CHECK(slurp(d3.path / "run_record.json") != r1);
}

TEST_CASE("bad configuration exits with code 2") {
    CHECK(run_cli("optimize --space /nonexistent.json --workloads missing") ==
          2);
    TempDir d("imcdse_cli_d");
    CHECK(run_cli("optimize" + kCommon + " --objective edapx --out " +
                  d.path.string()) == 2);
    CHECK(run_cli("baseline" + kCommon + " --strategy warp --out " +
                  d.path.string()) == 2);
}

TEST_CASE("exhausted sampling exits with code 3") {
    TempDir d("imcdse_cli_e");
    // GPT-2 Medium can never fit the weight-stationary reduced space
    const std::string args =
        "optimize --space " + testutil::data_path("spaces/rram_reduced4.json") +
        " --workloads " + testutil::data_path("workloads/gpt2_medium.json") +
        " --ph 40 --pe 20 --pga 5 --generations 1 --out " + d.path.string();
    CHECK(run_cli(args) == 3);
}

TEST_CASE("oracle writes the landscape with stable headers") {
    TempDir d("imcdse_cli_f");
    const std::string args =
        "oracle --space " + testutil::data_path("spaces/rram_reduced4.json") +
        " --workloads " + testutil::data_path("workloads/cnn4.json") +
        " --out " + d.path.string();
    REQUIRE(run_cli(args) == 0);
    const auto csv = slurp(d.path / "landscape.csv");
    CHECK(csv.rfind("index,", 0) == 0);
    CHECK(csv.find("score,feasible,area_mm2") != std::string::npos);
}

TEST_CASE("experiment files fill in unset flags") {
    TempDir d("imcdse_cli_g");
    const fs::path cfg = d.path / "exp.json";
    {
        std::ofstream out(cfg);
        out << R"({"space": ")" << testutil::data_path("spaces/rram_32nm.json")
            << R"(", "workloads": [")"
            << testutil::data_path("workloads/cnn4.json")
            << R"("], "ph": 120, "pe": 60, "pga": 10, "generations": 1,)"
            << R"( "seed": 5, "out": ")" << (d.path / "from_file").string()
            << R"("})";
    }
    REQUIRE(run_cli("optimize --config " + cfg.string()) == 0);
    CHECK(fs::exists(d.path / "from_file" / "run_record.json"));

    // the command line always wins over the file
    REQUIRE(run_cli("optimize --config " + cfg.string() + " --out " +
                    (d.path / "flag_wins").string()) == 0);
    CHECK(fs::exists(d.path / "flag_wins" / "run_record.json"));
}

TEST_CASE("the IMCDSE_OUT variable supplies the output directory") {
    TempDir d("imcdse_cli_env");
    const std::string cmd = "IMCDSE_OUT=" + (d.path / "via_env").string() +
                            " " + cli_path() + " optimize" + kCommon +
                            " --seed 3 >/dev/null 2>&1";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    CHECK(fs::exists(d.path / "via_env" / "run_record.json"));
}

TEST_CASE("aggregation-study writes one row per scheme and workload") {
    TempDir d("imcdse_cli_agg");
    REQUIRE(run_cli("aggregation-study" + kCommon + " --seed 5 --out " +
                    d.path.string()) == 0);
    const auto csv = slurp(d.path / "aggregation_study.csv");
    CHECK(csv.rfind("scheme,workload,score,unit,wall_seconds\n", 0) == 0);
    for (const char* scheme : {"all", "max", "mean"})
        for (const char* w : {"resnet18", "vgg16", "alexnet", "mobilenetv3"})
            CHECK(csv.find(std::string(scheme) + "," + w + ",") !=
                  std::string::npos);
}

TEST_CASE("repeat summarizes the seed study") {
    TempDir d("imcdse_cli_rep");
    REQUIRE(run_cli("repeat -n 3 --strategy plain-ga" + kCommon +
                    " --seed 50 --out " + d.path.string()) == 0);
    const auto csv = slurp(d.path / "repeat.csv");
    CHECK(csv.rfind("seed,strategy,best_score,feasible\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    const auto summary = slurp(d.path / "repeat_summary.csv");
    CHECK(summary.rfind("strategy,n,mean,std,cv\n", 0) == 0);
    CHECK(summary.find("plain-ga,3,") != std::string::npos);
}

TEST_CASE("tech-sweep emits the trade-point table") {
    TempDir d("imcdse_cli_h");
    const std::string args =
        "tech-sweep --space " +
        testutil::data_path("spaces/sram_sweep_small.json") + " --workloads " +
        testutil::data_path("workloads/cnn4.json") +
        " --objective ed-cost --ph 60 --pe 30 --pga 8 --generations 1 "
        "--seed 2 --out " +
        d.path.string();
    REQUIRE(run_cli(args) == 0);
    const auto csv = slurp(d.path / "pareto.csv");
    CHECK(csv.rfind("edap,cost,tech_nm,", 0) == 0);
    CHECK(csv.find(",on_front") != std::string::npos);
}
