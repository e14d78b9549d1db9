#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fplab/error.hpp"
#include "fplab/version.hpp"
#include "runner.hpp"
#include "scenario.hpp"

namespace {

using fplab::Error;
using fplab::ErrorKind;
using fplab::cli::RunResult;
using fplab::cli::Scenario;

// Exit codes: 0 success, 2 parse, 3 validation, 4 budget, 5 assertion
// failure, 6 io.
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitBudget = 4;
constexpr int kExitAssertion = 5;
constexpr int kExitIo = 6;

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Parse: return kExitParse;
        case ErrorKind::Budget: return kExitBudget;
        case ErrorKind::Io: return kExitIo;
        default: return kExitValidation;
    }
}

void add_key_option(CLI::App* cmd, Scenario& sc, const std::string& flag,
                    const std::string& key, const std::string& desc) {
    cmd->add_option_function<std::string>(
        flag, [&sc, key](const std::string& value) { sc.set(key, value); }, desc);
}

void add_population_options(CLI::App* cmd, Scenario& sc) {
    add_key_option(cmd, sc, "--pop", "population", "population source: file or synthetic");
    add_key_option(cmd, sc, "--pop-file", "population.file", "population CSV path");
    add_key_option(cmd, sc, "--n", "pop.n", "synthetic population size");
    add_key_option(cmd, sc, "--dim", "pop.dim", "synthetic feature dimension (default 1)");
    add_key_option(cmd, sc, "--rule", "pop.rule",
                   "synthetic label rule: threshold, threshold_noise or bernoulli");
    add_key_option(cmd, sc, "--cut", "pop.cut", "threshold rule cut point (default 0.5)");
    add_key_option(cmd, sc, "--flip-prob", "pop.flip_prob", "threshold_noise flip probability");
    add_key_option(cmd, sc, "--label-prob", "pop.label_prob", "bernoulli label probability");
    add_key_option(cmd, sc, "--label-coord", "pop.coord", "coordinate the label rule reads");
    add_key_option(cmd, sc, "--pop-seed", "pop.seed", "synthetic generator seed");
}

void add_class_options(CLI::App* cmd, Scenario& sc) {
    add_key_option(cmd, sc, "--class", "class",
                   "hypothesis class: threshold, interval, rectangle or explicit");
    add_key_option(cmd, sc, "--class-coord", "class.coord", "coordinate a 1-D class reads");
    add_key_option(cmd, sc, "--class-file", "class.file", "explicit class CSV path");
    add_key_option(cmd, sc, "--labelings", "class.labelings",
                   "explicit labelings, semicolon-separated bitstrings");
    add_key_option(cmd, sc, "--declared-vc", "class.declared_vc", "declared VC dimension");
}

void add_mode_options(CLI::App* cmd, Scenario& sc) {
    add_key_option(cmd, sc, "--mode", "mode", "draw coverage: exhaustive or monte_carlo");
    add_key_option(cmd, sc, "--trials", "trials", "monte-carlo trial count");
    add_key_option(cmd, sc, "--fallback", "fallback",
                   "budget overflow handling: none or monte_carlo");
    add_key_option(cmd, sc, "--fallback-trials", "fallback.trials",
                   "trials for the monte-carlo fallback");
    add_key_option(cmd, sc, "--fallback-seed", "fallback.seed",
                   "seed for the monte-carlo fallback");
}

int emit(const Scenario& sc, const RunResult& result, double wall_ms,
         const std::string& out_flag) {
    nlohmann::json report = {{"payload", result.payload}, {"wall_time_ms", wall_ms}};
    std::string text = report.dump(2);
    text += "\n";
    std::cout << text;

    std::filesystem::path dir;
    if (!out_flag.empty()) {
        dir = out_flag;
    } else if (sc.has("out")) {
        dir = sc.require("out");
    } else if (const char* env = std::getenv("FPLAB_OUT"); env && *env) {
        dir = env;
    } else {
        dir = ".";
    }

    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        fplab::raise(ErrorKind::Io, "cannot create output directory " + dir.string());
    }

    const std::string name = sc.require("name");
    auto write_file = [&](const std::filesystem::path& path, const std::string& content) {
        std::ofstream out(path, std::ios::binary);
        if (!out || !(out << content) || !out.flush()) {
            fplab::raise(ErrorKind::Io, "cannot write " + path.string());
        }
        std::cerr << "wrote " << path.string() << "\n";
    };
    write_file(dir / (name + ".json"), text);
    for (const auto& [suffix, csv] : result.tables) {
        write_file(dir / (name + "." + suffix + ".csv"), csv);
    }

    if (result.assertion_failed) {
        std::cerr << "assertion failed: " << result.assertion_message << "\n";
        return kExitAssertion;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-population learning laboratory"};
    app.set_version_flag("--version", fplab::kVersion);
    app.require_subcommand(1);
    app.fallthrough();

    Scenario flag_sc;
    flag_sc.origin = "<flags>";

    std::string scenario_path;
    std::string out_flag;
    std::string seed_flag;
    std::string workers_flag;
    std::string budget_flag;
    std::string name_flag;

    app.add_option("--out", out_flag, "output directory (overrides scenario and FPLAB_OUT)");
    app.add_option("--seed", seed_flag, "draw seed (overrides the scenario value)");
    app.add_option("--workers", workers_flag, "worker thread cap");
    app.add_option("--budget", budget_flag, "max exhaustive draw count");
    app.add_option("--name", name_flag, "report name (file base name)");

    CLI::App* run_cmd = app.add_subcommand("run", "run a scenario file");
    run_cmd->add_option("scenario", scenario_path, "scenario file path")->required();

    CLI::App* measure_cmd =
        app.add_subcommand("measure", "proportion of draws with deviation above epsilon");
    add_population_options(measure_cmd, flag_sc);
    add_class_options(measure_cmd, flag_sc);
    add_mode_options(measure_cmd, flag_sc);
    add_key_option(measure_cmd, flag_sc, "--statistic", "statistic",
                   "u_minus_vtr or uprime_minus_vtr");
    add_key_option(measure_cmd, flag_sc, "--epsilon", "epsilon", "deviation cutoff");
    add_key_option(measure_cmd, flag_sc, "--l", "l", "draw size");

    CLI::App* lemma_cmd = app.add_subcommand("lemma", "check one symmetrisation instance");
    add_population_options(lemma_cmd, flag_sc);
    add_class_options(lemma_cmd, flag_sc);
    add_mode_options(lemma_cmd, flag_sc);
    add_key_option(lemma_cmd, flag_sc, "--epsilon", "epsilon", "deviation cutoff");
    add_key_option(lemma_cmd, flag_sc, "--l", "l", "draw size");
    add_key_option(lemma_cmd, flag_sc, "--lemma-version", "version", "v1 or v2");
    add_key_option(lemma_cmd, flag_sc, "--allow-out-of-regime", "allow_out_of_regime",
                   "run outside l > 2/epsilon and flag the report (true/false)");

    CLI::App* bound_cmd = app.add_subcommand("bound", "evaluate deviation bounds over epsilons");
    add_key_option(bound_cmd, flag_sc, "--l", "l", "train draw size");
    add_key_option(bound_cmd, flag_sc, "--k", "k", "remainder size");
    add_key_option(bound_cmd, flag_sc, "--vc", "h", "VC dimension");
    add_key_option(bound_cmd, flag_sc, "--epsilons", "epsilons", "comma-separated cutoffs");
    add_key_option(bound_cmd, flag_sc, "--variant", "variant", "u, uprime or both");

    CLI::App* meng_cmd = app.add_subcommand("meng", "error decomposition for one inclusion draw");
    add_population_options(meng_cmd, flag_sc);
    add_key_option(meng_cmd, flag_sc, "--predictor", "predictor", "zero, one or threshold");
    add_key_option(meng_cmd, flag_sc, "--predictor-cut", "predictor.cut",
                   "threshold predictor cut point");
    add_key_option(meng_cmd, flag_sc, "--predictor-coord", "predictor.coord",
                   "threshold predictor coordinate");
    add_key_option(meng_cmd, flag_sc, "--scheme", "scheme", "fixed, uniform or bernoulli");
    add_key_option(meng_cmd, flag_sc, "--scheme-l", "scheme.l", "uniform scheme draw size");
    add_key_option(meng_cmd, flag_sc, "--scheme-a", "scheme.a", "propensity intercept");
    add_key_option(meng_cmd, flag_sc, "--scheme-b", "scheme.b", "propensity slope");
    add_key_option(meng_cmd, flag_sc, "--scheme-coord", "scheme.coord",
                   "propensity coordinate");
    add_key_option(meng_cmd, flag_sc, "--indices", "scheme.indices",
                   "fixed scheme sample indices, comma-separated");
    add_key_option(meng_cmd, flag_sc, "--trials", "trials", "gap monte-carlo trials");
    add_key_option(meng_cmd, flag_sc, "--trace", "trace", "emit one CSV row per trial");

    CLI::App* growth_cmd = app.add_subcommand("growth", "count induced labelings on draws");
    add_population_options(growth_cmd, flag_sc);
    add_class_options(growth_cmd, flag_sc);
    add_key_option(growth_cmd, flag_sc, "--l", "l", "subset size");
    add_key_option(growth_cmd, flag_sc, "--samples", "growth.samples",
                   "sampled subsets when exhausting is too big");
    add_key_option(growth_cmd, flag_sc, "--max-n", "growth.max_n",
                   "largest population exhausted exactly");

    CLI::App* halfsplit_cmd =
        app.add_subcommand("halfsplit", "half/half partition concentration probability");
    add_key_option(halfsplit_cmd, flag_sc, "--labels", "labels",
                   "comma-separated binary labels, even count");
    add_key_option(halfsplit_cmd, flag_sc, "--epsilon", "epsilon",
                   "max allowed half-to-half rate difference");

    CLI::App* ht_cmd = app.add_subcommand("ht", "exhaustive estimator unbiasedness check");
    add_population_options(ht_cmd, flag_sc);
    add_key_option(ht_cmd, flag_sc, "--predictor", "predictor", "zero, one or threshold");
    add_key_option(ht_cmd, flag_sc, "--predictor-cut", "predictor.cut",
                   "threshold predictor cut point");
    add_key_option(ht_cmd, flag_sc, "--predictor-coord", "predictor.coord",
                   "threshold predictor coordinate");
    add_key_option(ht_cmd, flag_sc, "--l", "l", "draw size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitParse;
    }

    try {
        Scenario sc;
        if (run_cmd->parsed()) {
            sc = fplab::cli::parse_scenario_file(scenario_path);
        } else {
            sc = flag_sc;
            const char* kind = nullptr;
            if (measure_cmd->parsed()) kind = "counting_measure";
            if (lemma_cmd->parsed()) kind = "lemma_check";
            if (bound_cmd->parsed()) kind = "theorem_bound_sweep";
            if (meng_cmd->parsed()) kind = "meng";
            if (growth_cmd->parsed()) kind = "growth";
            if (halfsplit_cmd->parsed()) kind = "half_split";
            if (ht_cmd->parsed()) kind = "ht_unbiasedness";
            sc.set("experiment", kind);
            if (!sc.has("name")) sc.set("name", kind);
        }
        if (!seed_flag.empty()) sc.set("seed", seed_flag);
        if (!workers_flag.empty()) sc.set("workers", workers_flag);
        if (!budget_flag.empty()) sc.set("budget", budget_flag);
        if (!name_flag.empty()) sc.set("name", name_flag);

        auto start = std::chrono::steady_clock::now();
        RunResult result = fplab::cli::run_scenario(sc);
        auto stop = std::chrono::steady_clock::now();
        double wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
        return emit(sc, result, wall_ms, out_flag);
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}
