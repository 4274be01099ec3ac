// Command line experiment runner: joint search, baselines, aggregation and
// technology studies, exhaustive oracle, and multi-seed repeats. Batch only;
// every command writes machine-readable outputs under --out.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "imcdse/errors.hpp"
#include "imcdse/ga_engine.hpp"
#include "imcdse/oracle.hpp"
#include "imcdse/pareto.hpp"
#include "imcdse/run_record.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
    std::string space_path;
    std::vector<std::string> workload_paths;
    std::string objective = "edap";
    std::string aggregation = "max";
    std::string mode; // empty keeps the space file's mode
    std::string coeffs_path;
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 1;
    std::size_t p_ga = 40;
    std::size_t p_e = 500;
    std::size_t p_h = 1000;
    int generations = 10;
    int threads = 1;
    double a_constr = 800.0;
    bool no_cache = false;
};

void add_common_flags(CLI::App* cmd, Options& opt) {
    cmd->add_option("--space", opt.space_path, "search space JSON file");
    cmd->add_option("--workloads", opt.workload_paths,
                    "workload JSON file(s), repeatable");
    cmd->add_option("--objective", opt.objective,
                    "edap|edp|energy|latency|area|ed-cost");
    cmd->add_option("--aggregation", opt.aggregation, "max|all|mean");
    cmd->add_option("--mode", opt.mode, "rram|sram (overrides the space file)");
    cmd->add_option("--coeffs", opt.coeffs_path, "model coefficient overrides");
    cmd->add_option("--config", opt.config_path,
                    "experiment file; flags given on the command line win");
    cmd->add_option("--seed", opt.seed, "random seed");
    cmd->add_option("--pga", opt.p_ga, "GA population size");
    cmd->add_option("--pe", opt.p_e, "diverse candidate pool size");
    cmd->add_option("--ph", opt.p_h, "random candidate pool size");
    cmd->add_option("--generations", opt.generations, "generations per phase");
    cmd->add_option("--threads", opt.threads, "evaluation worker cap");
    cmd->add_option("--area-constraint", opt.a_constr,
                    "area constraint in mm^2");
    cmd->add_option("--out", opt.out_dir, "output directory");
    cmd->add_flag("--no-cache", opt.no_cache, "disable evaluation memoization");
}

// precedence: command line flag > experiment file > built-in default
void overlay_config_file(const CLI::App* cmd, Options& opt) {
    if (opt.config_path.empty())
        return;
    std::ifstream in(opt.config_path);
    if (!in)
        throw imcdse::ConfigError("cannot open config file: " +
                                  opt.config_path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw imcdse::ConfigError(std::string("config file: ") + e.what());
    }
    auto given = [&](const std::string& flag) {
        return cmd->count(flag) > 0;
    };
    auto set_str = [&](const char* key, const char* flag, std::string& field) {
        if (j.contains(key) && !given(flag))
            field = j.at(key).get<std::string>();
    };
    set_str("space", "--space", opt.space_path);
    set_str("objective", "--objective", opt.objective);
    set_str("aggregation", "--aggregation", opt.aggregation);
    set_str("mode", "--mode", opt.mode);
    set_str("coeffs", "--coeffs", opt.coeffs_path);
    set_str("out", "--out", opt.out_dir);
    if (j.contains("workloads") && !given("--workloads")) {
        opt.workload_paths.clear();
        for (const auto& p : j.at("workloads"))
            opt.workload_paths.push_back(p.get<std::string>());
    }
    if (j.contains("seed") && !given("--seed"))
        opt.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("pga") && !given("--pga"))
        opt.p_ga = j.at("pga").get<std::size_t>();
    if (j.contains("pe") && !given("--pe"))
        opt.p_e = j.at("pe").get<std::size_t>();
    if (j.contains("ph") && !given("--ph"))
        opt.p_h = j.at("ph").get<std::size_t>();
    if (j.contains("generations") && !given("--generations"))
        opt.generations = j.at("generations").get<int>();
    if (j.contains("threads") && !given("--threads"))
        opt.threads = j.at("threads").get<int>();
    if (j.contains("area_constraint") && !given("--area-constraint"))
        opt.a_constr = j.at("area_constraint").get<double>();
}

struct Experiment {
    imcdse::SearchSpace space;
    std::vector<imcdse::Workload> workloads;
    imcdse::ObjectiveSpec objective;
    imcdse::ModelCoefficients coeffs;
    imcdse::GaSettings settings;
    fs::path out;
};

Experiment prepare(const Options& opt) {
    if (opt.space_path.empty())
        throw imcdse::ConfigError("no search space given (--space or config)");
    if (opt.workload_paths.empty())
        throw imcdse::ConfigError("no workloads given (--workloads or config)");
    Experiment ex;
    ex.space = imcdse::load_search_space(opt.space_path);
    if (!opt.mode.empty())
        ex.space.mode = imcdse::mode_from_string(opt.mode);
    for (const auto& p : opt.workload_paths) {
        auto ws = imcdse::load_workloads(p);
        ex.workloads.insert(ex.workloads.end(), ws.begin(), ws.end());
    }
    ex.objective =
        imcdse::ObjectiveSpec::from_strings(opt.objective, opt.aggregation);
    ex.objective.a_constr_mm2 = opt.a_constr;
    if (!opt.coeffs_path.empty())
        ex.coeffs = imcdse::load_coefficients(opt.coeffs_path);
    ex.settings.p_h = opt.p_h;
    ex.settings.p_e = opt.p_e;
    ex.settings.p_ga = opt.p_ga;
    ex.settings.generations = opt.generations;
    ex.settings.seed = opt.seed;
    ex.settings.threads = opt.threads;
    ex.settings.cache_enabled = !opt.no_cache;

    std::string out = opt.out_dir;
    if (out.empty()) {
        const char* env = std::getenv("IMCDSE_OUT");
        out = env ? env : "runs";
    }
    ex.out = out;
    fs::create_directories(ex.out);
    return ex;
}

void write_run_outputs(const Experiment& ex, const std::string& command,
                       const imcdse::RunResult& result,
                       const std::string& stem = "run") {
    imcdse::write_json(ex.out / (stem + "_record.json"),
                       imcdse::make_run_record(command, ex.space, ex.workloads,
                                               ex.objective, ex.coeffs,
                                               ex.settings, result));
    imcdse::write_json(ex.out / (stem + "_timing.json"),
                       imcdse::timing_json(result));
    imcdse::write_convergence_csv(ex.out / (stem + "_convergence.csv"),
                                  result);
}

void print_summary(const Experiment& ex, const imcdse::RunResult& r) {
    std::cout << "best score " << imcdse::format_double(r.best.score.value)
              << " " << ex.objective.unit_string()
              << (r.best.score.feasible ? "" : " (infeasible)") << ", area "
              << imcdse::format_double(r.best.score.area_mm2)
              << " mm^2, evals " << r.eval_count << " (sampling "
              << r.sampling_evals << "), time "
              << imcdse::format_double(r.sampling_seconds + r.search_seconds)
              << " s\n";
}

// per-workload score of one design under the run objective's terms, the way
// single-workload results are reported (no aggregation)
double per_workload_score(const imcdse::JointScore& s, std::size_t i,
                          const imcdse::ObjectiveSpec& objective,
                          int tech_nm) {
    const auto& m = s.per_workload[i];
    if (!m)
        return std::numeric_limits<double>::infinity();
    double v = 1.0;
    for (auto t : objective.terms) {
        switch (t) {
        case imcdse::MetricTerm::Energy: v *= m->energy_mj; break;
        case imcdse::MetricTerm::Latency: v *= m->latency_ms; break;
        case imcdse::MetricTerm::Area: v *= s.area_mm2; break;
        case imcdse::MetricTerm::Cost:
            v *= imcdse::fabrication_cost(s.area_mm2, tech_nm);
            break;
        }
    }
    return v;
}

int cmd_optimize(const Options& opt) {
    Experiment ex = prepare(opt);
    const auto result = imcdse::run_joint(
        ex.space, ex.workloads, ex.objective, ex.coeffs,
        imcdse::default_phases(ex.settings.generations), ex.settings);
    write_run_outputs(ex, "optimize", result);
    print_summary(ex, result);
    return 0;
}

int cmd_baseline(const Options& opt, const std::string& strategy) {
    Experiment ex = prepare(opt);
    const auto phases = imcdse::default_phases(ex.settings.generations);
    if (strategy == "plain-ga") {
        const auto result = imcdse::run_baseline_ga(
            ex.space, ex.workloads, ex.objective, ex.coeffs, ex.settings);
        write_run_outputs(ex, "baseline-plain-ga", result);
        print_summary(ex, result);
    } else if (strategy == "separate") {
        for (const auto& w : ex.workloads) {
            const auto result = imcdse::run_separate(
                ex.space, w, ex.objective, ex.coeffs, phases, ex.settings);
            Experiment single = ex;
            single.workloads = {w};
            write_run_outputs(single, "baseline-separate", result,
                              "run_" + w.name);
            std::cout << w.name << ": ";
            print_summary(single, result);
        }
    } else if (strategy == "largest") {
        const auto result = imcdse::run_largest(
            ex.space, ex.workloads, ex.objective, ex.coeffs, phases,
            ex.settings);
        write_run_outputs(ex, "baseline-largest", result);
        print_summary(ex, result);
    } else if (strategy == "sequential-max" ||
               strategy == "sequential-median") {
        const auto start = strategy == "sequential-max"
                               ? imcdse::SequentialStart::MaxConfig
                               : imcdse::SequentialStart::MedianConfig;
        const auto result = imcdse::run_sequential(
            ex.space, ex.workloads, ex.objective, ex.coeffs, start,
            ex.settings);
        write_run_outputs(ex, "baseline-" + strategy, result);
        print_summary(ex, result);
    } else {
        throw imcdse::ConfigError("unknown strategy: " + strategy);
    }
    return 0;
}

int cmd_aggregation_study(const Options& opt) {
    Experiment ex = prepare(opt);
    const auto phases = imcdse::default_phases(ex.settings.generations);
    imcdse::write_json(ex.out / "aggregation_config.json",
                       imcdse::make_config_snapshot(
                           "aggregation-study", ex.space, ex.workloads,
                           ex.objective, ex.coeffs, ex.settings));
    std::ofstream csv(ex.out / "aggregation_study.csv");
    csv << "scheme,workload,score,unit,wall_seconds\n";
    std::cout << "scheme      best-design per-workload scores ("
              << ex.objective.unit_string() << ")\n";
    for (const std::string scheme : {"all", "max", "mean"}) {
        Experiment run_ex = ex;
        run_ex.objective = imcdse::ObjectiveSpec::from_strings(
            opt.objective, scheme);
        run_ex.objective.a_constr_mm2 = opt.a_constr;
        const auto t0 = std::chrono::steady_clock::now();
        const auto result =
            imcdse::run_joint(run_ex.space, run_ex.workloads, run_ex.objective,
                              run_ex.coeffs, phases, run_ex.settings);
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          t0)
                .count();
        const auto cfg = imcdse::decode(run_ex.space, result.best.point);
        std::cout << scheme << ":";
        for (std::size_t i = 0; i < run_ex.workloads.size(); ++i) {
            const double v = per_workload_score(result.best.score, i,
                                                run_ex.objective, cfg.tech_nm);
            csv << scheme << "," << run_ex.workloads[i].name << ","
                << imcdse::format_double(v) << ","
                << run_ex.objective.unit_string() << ","
                << imcdse::format_double(wall) << "\n";
            std::cout << "  " << run_ex.workloads[i].name << "="
                      << imcdse::format_double(v);
        }
        std::cout << "  (" << imcdse::format_double(wall) << " s)\n";
    }
    return 0;
}

int cmd_tech_sweep(const Options& opt, bool pga_given, bool objective_given) {
    Options sweep_opt = opt;
    if (!objective_given)
        sweep_opt.objective = "ed-cost"; // fabrication-cost trade-off
    Experiment ex = prepare(sweep_opt);
    if (!pga_given)
        ex.settings.p_ga = 70; // trade-off runs use the larger population
    const auto result = imcdse::tech_sweep(
        ex.space, ex.workloads, ex.objective, ex.coeffs,
        imcdse::default_phases(ex.settings.generations), ex.settings);
    write_run_outputs(ex, "tech-sweep", result.run);
    imcdse::write_trade_csv(ex.out / "pareto.csv", ex.space, result.points,
                            result.front);
    std::cout << result.points.size() << " feasible designs, "
              << result.front.size() << " on the Pareto front\n";
    for (const auto& p : result.front)
        std::cout << "  edap " << imcdse::format_double(p.edap) << ", cost "
                  << imcdse::format_double(p.cost) << ", " << p.tech_nm
                  << " nm\n";
    return 0;
}

int cmd_oracle(const Options& opt, std::uint64_t cap) {
    Experiment ex = prepare(opt);
    const auto landscape =
        imcdse::exhaustive(ex.space, ex.workloads, ex.objective, ex.coeffs,
                           cap, ex.settings.threads);
    imcdse::write_json(ex.out / "oracle_config.json",
                       imcdse::make_config_snapshot("oracle", ex.space,
                                                    ex.workloads, ex.objective,
                                                    ex.coeffs, ex.settings));
    imcdse::write_landscape_csv(ex.out / "landscape.csv", ex.space, landscape);
    std::cout << landscape.points.size() << " points, "
              << landscape.feasible_count << " feasible\n";
    if (landscape.global_min) {
        const auto& best = landscape.scores[*landscape.global_min];
        std::cout << "global minimum " << imcdse::format_double(best.value)
                  << " " << ex.objective.unit_string() << " at index "
                  << *landscape.global_min << "\n";
    } else {
        std::cout << "no feasible design in the space\n";
        return 3;
    }
    return 0;
}

int cmd_repeat(const Options& opt, int n, const std::string& strategy) {
    Experiment ex = prepare(opt);
    const auto phases = imcdse::default_phases(ex.settings.generations);
    auto snapshot = imcdse::make_config_snapshot(
        "repeat", ex.space, ex.workloads, ex.objective, ex.coeffs,
        ex.settings);
    snapshot["strategy"] = strategy;
    snapshot["runs"] = n;
    imcdse::write_json(ex.out / "repeat_config.json", snapshot);
    std::ofstream csv(ex.out / "repeat.csv");
    csv << "seed,strategy,best_score,feasible\n";
    std::vector<double> scores;
    for (int i = 0; i < n; ++i) {
        imcdse::GaSettings s = ex.settings;
        s.seed = ex.settings.seed + static_cast<std::uint64_t>(i);
        s.keep_archive = false;
        imcdse::RunResult r;
        if (strategy == "proposed")
            r = imcdse::run_joint(ex.space, ex.workloads, ex.objective,
                                  ex.coeffs, phases, s);
        else if (strategy == "plain-ga")
            r = imcdse::run_baseline_ga(ex.space, ex.workloads, ex.objective,
                                        ex.coeffs, s);
        else if (strategy == "largest")
            r = imcdse::run_largest(ex.space, ex.workloads, ex.objective,
                                    ex.coeffs, phases, s);
        else if (strategy == "sequential-max" ||
                 strategy == "sequential-median")
            r = imcdse::run_sequential(
                ex.space, ex.workloads, ex.objective, ex.coeffs,
                strategy == "sequential-max"
                    ? imcdse::SequentialStart::MaxConfig
                    : imcdse::SequentialStart::MedianConfig,
                s);
        else
            throw imcdse::ConfigError("unknown strategy: " + strategy);
        csv << s.seed << "," << strategy << ","
            << imcdse::format_double(r.best.score.value) << ","
            << (r.best.score.feasible ? 1 : 0) << "\n";
        scores.push_back(r.best.score.value);
    }
    double mean = 0.0;
    for (double v : scores)
        mean += v;
    mean /= static_cast<double>(scores.size());
    double var = 0.0;
    for (double v : scores)
        var += (v - mean) * (v - mean);
    const double std_dev =
        scores.size() > 1
            ? std::sqrt(var / static_cast<double>(scores.size() - 1))
            : 0.0;
    std::ofstream summary(ex.out / "repeat_summary.csv");
    summary << "strategy,n,mean,std,cv\n";
    summary << strategy << "," << n << "," << imcdse::format_double(mean)
            << "," << imcdse::format_double(std_dev) << ","
            << imcdse::format_double(std_dev / mean) << "\n";
    std::cout << strategy << ": mean " << imcdse::format_double(mean)
              << ", std " << imcdse::format_double(std_dev) << " over " << n
              << " seeds\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"design space exploration for multi-workload in-memory "
                 "computing accelerators"};
    app.require_subcommand(1);

    Options opt;
    std::string strategy = "plain-ga";
    std::uint64_t oracle_cap = imcdse::kDefaultEnumerationCap;
    int repeat_n = 25;

    auto* optimize = app.add_subcommand("optimize", "four-phase joint search");
    add_common_flags(optimize, opt);

    auto* baseline = app.add_subcommand("baseline", "search-strategy baselines");
    add_common_flags(baseline, opt);
    baseline
        ->add_option("--strategy", strategy,
                     "plain-ga|separate|largest|sequential-max|"
                     "sequential-median")
        ->required();

    auto* agg = app.add_subcommand("aggregation-study",
                                   "max/all/mean side by side");
    add_common_flags(agg, opt);

    auto* sweep = app.add_subcommand("tech-sweep",
                                     "EDAP versus fabrication cost trade-off");
    add_common_flags(sweep, opt);

    auto* oracle = app.add_subcommand("oracle", "exhaustive landscape");
    add_common_flags(oracle, opt);
    oracle->add_option("--cap", oracle_cap, "enumeration cap");

    auto* repeat = app.add_subcommand("repeat", "multi-seed study");
    add_common_flags(repeat, opt);
    repeat->add_option("-n,--runs", repeat_n, "number of seeds");
    repeat->add_option("--strategy", strategy,
                       "proposed|plain-ga|largest|sequential-max|"
                       "sequential-median");

    CLI11_PARSE(app, argc, argv);

    try {
        CLI::App* cmd = app.get_subcommands().front();
        overlay_config_file(cmd, opt);
        if (cmd == optimize)
            return cmd_optimize(opt);
        if (cmd == baseline)
            return cmd_baseline(opt, strategy);
        if (cmd == agg)
            return cmd_aggregation_study(opt);
        if (cmd == sweep)
            return cmd_tech_sweep(opt, sweep->count("--pga") > 0,
                                  sweep->count("--objective") > 0);
        if (cmd == oracle)
            return cmd_oracle(opt, oracle_cap);
        if (cmd == repeat) {
            if (repeat->count("--strategy") == 0)
                strategy = "proposed";
            return cmd_repeat(opt, repeat_n, strategy);
        }
    } catch (const imcdse::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const imcdse::SamplingExhausted& e) {
        std::cerr << "sampling exhausted: " << e.what() << "\n";
        return 3;
    } catch (const imcdse::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
